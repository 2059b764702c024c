#include "markoff/surface.hpp"

#include <stdexcept>
#include <string>

namespace markoff {

LevelSurface::LevelSurface(PrimeField field, u64 k, u64 a)
    : field_(field), k_(k % field.p()), a_(a % field.p()) {
  if (a_ == 0) throw std::invalid_argument("LevelSurface: a must be nonzero mod p");
  if (field_.p() > 0xFFFFFFFFull) {
    throw std::invalid_argument("LevelSurface: coordinates are 32-bit, p is too large");
  }
}

bool LevelSurface::contains(Triple t) const {
  const PrimeField& f = field_;
  u64 squares = f.add(f.add(f.mul(t.x, t.x), f.mul(t.y, t.y)), f.mul(t.z, t.z));
  u64 cubic = f.mul(a_, f.mul(t.x, f.mul(t.y, t.z)));
  return f.sub(squares, cubic) == k_;
}

Triple LevelSurface::apply(Move m, Triple t) const {
  if (!contains(t)) {
    throw std::domain_error("LevelSurface::apply: input (" + std::to_string(t.x) + "," +
                            std::to_string(t.y) + "," + std::to_string(t.z) +
                            ") is not on the surface");
  }
  const PrimeField& f = field_;
  auto vieta = [&](u64 u, u64 v, u64 w) {  // a*v*w - u
    return static_cast<u32>(f.sub(f.mul(a_, f.mul(v, w)), u));
  };
  u32 x = t.x, y = t.y, z = t.z;
  switch (m) {
    case Move::M1: return {vieta(x, y, z), y, z};
    case Move::M2: return {x, vieta(y, x, z), z};
    case Move::M3: return {x, y, vieta(z, x, y)};
    case Move::D1: return {vieta(x, y, z), z, y};
    case Move::D2: return {x, z, vieta(y, x, z)};
    case Move::D3: return {x, vieta(z, x, y), y};
    case Move::T12: return {y, x, z};
    case Move::T23: return {x, z, y};
    case Move::T13: return {z, y, x};
    case Move::S12: return {static_cast<u32>(f.neg(x)), static_cast<u32>(f.neg(y)), z};
    case Move::S13: return {static_cast<u32>(f.neg(x)), y, static_cast<u32>(f.neg(z))};
    case Move::S23: return {x, static_cast<u32>(f.neg(y)), static_cast<u32>(f.neg(z))};
  }
  throw std::logic_error("unknown move");
}

std::vector<Triple> LevelSurface::d1_fixed_points() const {
  if (k_ != 0) throw std::invalid_argument("d1_fixed_points: requires k = 0");
  std::vector<Triple> fixed{{0, 0, 0}};
  auto r = sqrt_mod(8 % p(), p());
  if (r) {
    u64 ainv = field_.inv(a_);
    u64 x = field_.mul(4, ainv);
    u64 y1 = field_.mul(*r, ainv);
    u64 y2 = field_.neg(y1);
    fixed.push_back({static_cast<u32>(x), static_cast<u32>(y1), static_cast<u32>(y1)});
    fixed.push_back({static_cast<u32>(x), static_cast<u32>(y2), static_cast<u32>(y2)});
  }
  return fixed;
}

u64 LevelSurface::count_solutions() const {
  u64 pp = p();
  u64 a2k_minus_4 = field_.sub(field_.mul(field_.mul(a_, a_), k_), 4 % pp);
  i64 correction = static_cast<i64>(3 + legendre(k_, pp)) * legendre(a2k_minus_4, pp);
  i64 n = static_cast<i64>(pp) * static_cast<i64>(pp) + correction * static_cast<i64>(pp) + 1;
  return static_cast<u64>(n);
}

std::vector<Triple> LevelSurface::enumerate_solutions() const {
  u64 pp = p();
  std::vector<Triple> out;
  out.reserve(count_solutions());
  u64 half = field_.inv(2);
  for (u64 x = 0; x < pp; ++x) {
    u64 x2 = field_.mul(x, x);
    for (u64 y = 0; y < pp; ++y) {
      // z^2 - (a x y) z + (x^2 + y^2 - k) = 0
      u64 b = field_.mul(a_, field_.mul(x, y));
      u64 c = field_.sub(field_.add(x2, field_.mul(y, y)), k_);
      u64 disc = field_.sub(field_.mul(b, b), field_.mul(4, c));
      auto root = sqrt_mod(disc, pp);
      if (!root) continue;
      u64 z1 = field_.mul(field_.add(b, *root), half);
      u64 z2 = field_.mul(field_.sub(b, *root), half);
      if (z1 > z2) std::swap(z1, z2);
      out.push_back({static_cast<u32>(x), static_cast<u32>(y), static_cast<u32>(z1)});
      if (z2 != z1) out.push_back({static_cast<u32>(x), static_cast<u32>(y), static_cast<u32>(z2)});
    }
  }
  return out;
}

}  // namespace markoff
