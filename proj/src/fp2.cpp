#include "markoff/fp2.hpp"

#include <stdexcept>

namespace markoff {

namespace {

u64 smallest_nonresidue(const PrimeField& f) {
  for (u64 n = 2; n < f.p(); ++n) {
    if (legendre(n, f.p()) == -1) return n;
  }
  throw std::logic_error("no quadratic non-residue found");  // unreachable for p >= 3
}

}  // namespace

Fp2::Fp2(PrimeField field)
    : field_(field),
      nonresidue_(smallest_nonresidue(field_)),
      order_(field_.p() * field_.p() - 1),
      order_factors_(factorize(order_)) {
  // Elements of F_p have order dividing p - 1, so only c1 >= 1 can generate.
  for (u64 c0 = 0; c0 < p(); ++c0) {
    for (u64 c1 = 1; c1 < p(); ++c1) {
      Fp2Element cand{c0, c1};
      if (is_generator(cand)) {
        generator_ = cand;
        return;
      }
    }
  }
  throw std::logic_error("no generator found");  // unreachable: the group is cyclic
}

Fp2Element Fp2::add(Fp2Element a, Fp2Element b) const {
  return {field_.add(a.c0, b.c0), field_.add(a.c1, b.c1)};
}

Fp2Element Fp2::sub(Fp2Element a, Fp2Element b) const {
  return {field_.sub(a.c0, b.c0), field_.sub(a.c1, b.c1)};
}

Fp2Element Fp2::neg(Fp2Element a) const { return {field_.neg(a.c0), field_.neg(a.c1)}; }

Fp2Element Fp2::mul(Fp2Element a, Fp2Element b) const {
  // (a0 + a1 w)(b0 + b1 w) = a0 b0 + n a1 b1 + (a0 b1 + a1 b0) w
  u64 cross = field_.add(field_.mul(a.c0, b.c1), field_.mul(a.c1, b.c0));
  u64 c0 = field_.add(field_.mul(a.c0, b.c0), field_.mul(nonresidue_, field_.mul(a.c1, b.c1)));
  return {c0, cross};
}

Fp2Element Fp2::conj(Fp2Element a) const { return {a.c0, field_.neg(a.c1)}; }

u64 Fp2::norm(Fp2Element a) const {
  return field_.sub(field_.mul(a.c0, a.c0), field_.mul(nonresidue_, field_.mul(a.c1, a.c1)));
}

Fp2Element Fp2::inv(Fp2Element a) const {
  u64 n = norm(a);
  if (n == 0) throw std::invalid_argument("Fp2::inv: zero element");
  u64 ninv = field_.inv(n);
  Fp2Element c = conj(a);
  return {field_.mul(c.c0, ninv), field_.mul(c.c1, ninv)};
}

Fp2Element Fp2::pow(Fp2Element a, u64 e) const {
  Fp2Element r = one();
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

bool Fp2::is_generator(Fp2Element a) const {
  if (a == zero()) return false;
  for (const auto& [q, e] : order_factors_.factors) {
    (void)e;
    if (pow(a, order_ / q) == one()) return false;
  }
  return true;
}

Fp2Element Fp2::trace_of_power(Fp2Element g, u64 u) const {
  u %= order_;
  Fp2Element gu = pow(g, u);
  return add(gu, inv(gu));
}

}  // namespace markoff
