#pragma once

#include "markoff/arith.hpp"

// The quadratic extension F_{p^2}, realized as F_p[w] with w^2 equal to a
// fixed quadratic non-residue.  Used to parametrize level-surface solutions
// through exponents modulo p^2 - 1.

namespace markoff {

struct Fp2Element {
  u64 c0 = 0;  // constant coefficient
  u64 c1 = 0;  // coefficient of w

  bool operator==(const Fp2Element&) const = default;
  bool in_base_field() const { return c1 == 0; }
};

class Fp2 {
 public:
  explicit Fp2(PrimeField field);

  const PrimeField& base() const { return field_; }
  u64 p() const { return field_.p(); }
  /// The fixed non-residue n with w^2 = n (smallest positive one mod p).
  u64 nonresidue() const { return nonresidue_; }
  /// Order of the multiplicative group, p^2 - 1.
  u64 group_order() const { return order_; }
  const Factorization& group_order_factorization() const { return order_factors_; }

  Fp2Element zero() const { return {0, 0}; }
  Fp2Element one() const { return {1, 0}; }
  Fp2Element make(u64 c0, u64 c1) const { return {c0 % p(), c1 % p()}; }

  Fp2Element add(Fp2Element a, Fp2Element b) const;
  Fp2Element sub(Fp2Element a, Fp2Element b) const;
  Fp2Element neg(Fp2Element a) const;
  Fp2Element mul(Fp2Element a, Fp2Element b) const;
  /// Galois conjugate a^p = c0 - c1 w.
  Fp2Element conj(Fp2Element a) const;
  /// Norm a * conj(a), an element of F_p.
  u64 norm(Fp2Element a) const;
  Fp2Element inv(Fp2Element a) const;
  Fp2Element pow(Fp2Element a, u64 e) const;

  /// Multiplicative order divides p^2 - 1; true iff it is exactly that.
  bool is_generator(Fp2Element a) const;

  /// The first generator of the multiplicative group in (c0, c1) scan order
  /// with c1 >= 1.  Deterministic across runs.
  const Fp2Element& generator() const { return generator_; }

  /// g^u + g^{-u} for exponents u taken modulo p^2 - 1.  Lands in F_p
  /// exactly when (p+1) | u or (p-1) | u.
  Fp2Element trace_of_power(Fp2Element g, u64 u) const;

 private:
  PrimeField field_;
  u64 nonresidue_;
  u64 order_;
  Factorization order_factors_;
  Fp2Element generator_;
};

}  // namespace markoff
