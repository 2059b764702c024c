#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

// Exact arithmetic over F_p together with the integer factorization and
// divisor machinery needed to analyze p^2 - 1.  Everything here is a pure
// function of its arguments; all residues are normalized into [0, p).

namespace markoff {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);

/// Modular inverse of a mod m; throws std::invalid_argument if gcd(a, m) != 1.
u64 invmod(u64 a, u64 m);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 n);

std::vector<u64> primes_up_to(u64 n);
std::vector<u64> primes_in_range(u64 lo, u64 hi);

/// An odd prime field with p >= 5.  Construction checks primality.
class PrimeField {
 public:
  explicit PrimeField(u64 p);

  u64 p() const { return p_; }
  u64 reduce(i64 v) const;
  u64 add(u64 a, u64 b) const;
  u64 sub(u64 a, u64 b) const;
  u64 neg(u64 a) const;
  u64 mul(u64 a, u64 b) const { return mulmod(a % p_, b % p_, p_); }
  u64 inv(u64 a) const { return invmod(a % p_, p_); }
  u64 pow(u64 a, u64 e) const { return powmod(a % p_, e, p_); }

 private:
  u64 p_;
};

/// Legendre symbol (a/p): 0 if p | a, +1 for nonzero squares, -1 otherwise.
int legendre(u64 a, u64 p);

/// Canonical square root of a mod p: the root in [0, (p-1)/2], or nullopt
/// when a is a non-residue.  sqrt_mod(0) = 0.
std::optional<u64> sqrt_mod(u64 a, u64 p);

/// Sum over z in F_p of the Legendre symbol of z^2 - s.  Evaluated by the
/// literal character sum, so it doubles as an independent oracle: the value
/// is p - 1 when s = 0 and -1 for every nonzero s.
i64 shifted_square_sum(u64 s, u64 p);

/// Prime factorization with strictly increasing primes.
struct Factorization {
  u64 n = 1;
  std::vector<std::pair<u64, u32>> factors;  // (prime, exponent >= 1)

  u32 exponent_of(u64 q) const;
};

/// Trial division up to sqrt(n).  Intended for n below ~10^10 (p < 10^5).
Factorization factorize(u64 n);

/// All divisors in increasing order; the count is prod (e_q + 1).
std::vector<u64> divisors_of(const Factorization& f);

}  // namespace markoff
