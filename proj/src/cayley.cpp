#include "markoff/cayley.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <stdexcept>

namespace markoff {

EpsilonDecomposition epsilon_decomposition(const PrimeField& field) {
  EpsilonDecomposition d;
  d.p = field.p();
  d.epsilon = (d.p % 4 == 1) ? 1 : -1;
  u64 plus = d.p + d.epsilon;   // 2 * odd
  u64 minus = d.p - d.epsilon;  // 2^(e2-1) * odd
  u32 v2 = 0;
  u64 odd_minus = minus;
  while ((odd_minus & 1) == 0) {
    odd_minus >>= 1;
    ++v2;
  }
  d.e2 = v2 + 1;
  for (const auto& [q, e] : factorize(plus / 2).factors) d.q_plus.emplace_back(q, e);
  for (const auto& [q, e] : factorize(odd_minus).factors) d.q_minus.emplace_back(q, e);
  return d;
}

u64 count_orbits(const PrimeField& field, bool signs) {
  EpsilonDecomposition d = epsilon_decomposition(field);
  u64 prod_minus = 1, prod_plus = 1;
  for (const auto& [q, e] : d.q_minus) prod_minus *= (e + 1);
  for (const auto& [q, e] : d.q_plus) prod_plus *= (e + 1);
  if (signs) return (d.e2 - 1) * prod_minus + prod_plus - 1;
  return d.e2 * prod_minus + 2 * prod_plus - 2;
}

namespace {

// Exponent-vector view of a divisor of p^2 - 1.
struct DivisorSpec {
  u64 divisor;
  std::vector<u32> f;  // aligned with the factorization of p^2 - 1
};

u64 ipow(u64 b, u32 e) {
  u64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

std::vector<OrbitPrediction> predict_orbits(const PrimeField& field, bool signs) {
  const u64 p = field.p();
  const Factorization fac = factorize(p * p - 1);
  const std::size_t nf = fac.factors.size();
  const EpsilonDecomposition eps = epsilon_decomposition(field);

  // Required exponents for divisibility by p + epsilon and p - epsilon.
  std::vector<u32> need_plus(nf, 0), need_minus(nf, 0);
  for (std::size_t i = 0; i < nf; ++i) {
    u64 q = fac.factors[i].first;
    if (q == 2) {
      need_plus[i] = 1;
      need_minus[i] = eps.e2 - 1;
      continue;
    }
    // An odd prime divides exactly one of p + epsilon, p - epsilon, with its
    // full exponent from p^2 - 1; on the other side it is unconstrained.
    for (const auto& [qq, e] : eps.q_plus) {
      if (qq == q) need_plus[i] = e;
    }
    for (const auto& [qq, e] : eps.q_minus) {
      if (qq == q) need_minus[i] = e;
    }
  }

  // Walk every exponent vector f with 0 <= f(q) <= e_q.
  std::vector<DivisorSpec> real_divisors;
  std::vector<u32> f(nf, 0);
  while (true) {
    bool mult_plus = true, mult_minus = true;
    for (std::size_t i = 0; i < nf; ++i) {
      if (f[i] < need_plus[i]) mult_plus = false;
      if (f[i] < need_minus[i]) mult_minus = false;
    }
    if (mult_plus || mult_minus) {
      u64 t = 1;
      for (std::size_t i = 0; i < nf; ++i) t *= ipow(fac.factors[i].first, f[i]);
      real_divisors.push_back({t, f});
    }
    std::size_t pos = 0;
    while (pos < nf && f[pos] == fac.factors[pos].second) {
      f[pos] = 0;
      ++pos;
    }
    if (pos == nf) break;
    ++f[pos];
  }

  const u64 n = p * p - 1;
  std::vector<OrbitPrediction> orbits;
  orbits.reserve(real_divisors.size());
  for (const auto& spec : real_divisors) {
    OrbitPrediction o;
    o.divisor = spec.divisor;
    o.exponents = spec.f;
    u64 size2 = 1;  // twice the orbit size, to keep the arithmetic integral
    for (std::size_t i = 0; i < nf; ++i) {
      u64 q = fac.factors[i].first;
      u32 e = fac.factors[i].second;
      if (spec.f[i] < e) size2 *= (q * q - 1) * ipow(q, 2 * (e - spec.f[i] - 1));
    }
    bool doubled = (spec.divisor == n) || (spec.divisor == n / 2);
    o.size = doubled ? size2 : size2 / 2;
    orbits.push_back(std::move(o));
  }
  std::sort(orbits.begin(), orbits.end(),
            [](const OrbitPrediction& a, const OrbitPrediction& b) { return a.divisor < b.divisor; });

  if (!signs) return orbits;

  // Sign changes translate exponents by (p^2-1)/2, which is trivial at odd
  // primes and drops one power of 2: the orbit with f(2) = e2 - 1 merges
  // with the orbit of twice its divisor.
  std::size_t two_index = 0;  // factorization lists 2 first, but stay explicit
  for (std::size_t i = 0; i < nf; ++i) {
    if (fac.factors[i].first == 2) two_index = i;
  }
  std::map<u64, std::size_t> by_divisor;
  for (std::size_t i = 0; i < orbits.size(); ++i) by_divisor[orbits[i].divisor] = i;

  std::vector<OrbitPrediction> merged;
  for (const auto& o : orbits) {
    if (o.exponents[two_index] == eps.e2 - 1) continue;  // absorbed below
    merged.push_back(o);
  }
  for (const auto& o : orbits) {
    if (o.exponents[two_index] != eps.e2 - 1) continue;
    u64 partner = o.divisor * 2;
    auto it = by_divisor.find(partner);
    if (it == by_divisor.end()) throw std::logic_error("sign-change partner missing");
    for (auto& m : merged) {
      if (m.divisor == partner) {
        m.size += o.size;
        m.merged_with = o.divisor;
      }
    }
  }
  std::sort(merged.begin(), merged.end(),
            [](const OrbitPrediction& a, const OrbitPrediction& b) { return a.divisor < b.divisor; });
  return merged;
}

std::vector<u64> predicted_orbit_sizes(const PrimeField& field, bool signs) {
  std::vector<u64> sizes;
  for (const auto& o : predict_orbits(field, signs)) sizes.push_back(o.size);
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

std::vector<u64> empirical_orbit_sizes(const PrimeField& field, bool signs, u64 cap) {
  const u64 p = field.p();
  if (p > cap) {
    throw std::invalid_argument("empirical_orbit_sizes: p exceeds the cap of " + std::to_string(cap));
  }
  LevelSurface surface(field, 4 % p, 1);
  std::vector<Triple> solutions = surface.enumerate_solutions();

  std::vector<Move> moves = {Move::M1, Move::M2, Move::M3, Move::T12, Move::T23, Move::T13};
  if (signs) {
    moves.insert(moves.end(), {Move::S12, Move::S13, Move::S23});
  }

  auto pack = [p](Triple t) { return (static_cast<u64>(t.x) * p + t.y) * p + t.z; };
  std::vector<u64> visited((p * p * p + 63) / 64, 0);
  auto test_and_set = [&](u64 idx) {
    u64 word = idx >> 6, bit = 1ull << (idx & 63);
    if (visited[word] & bit) return true;
    visited[word] |= bit;
    return false;
  };

  std::vector<u64> sizes;
  std::deque<Triple> frontier;
  for (const Triple& seed : solutions) {  // lexicographically smallest unvisited seeds
    if (test_and_set(pack(seed))) continue;
    u64 count = 0;
    frontier.push_back(seed);
    while (!frontier.empty()) {
      Triple t = frontier.front();
      frontier.pop_front();
      ++count;
      for (Move m : moves) {
        Triple img = surface.apply(m, t);
        if (!test_and_set(pack(img))) frontier.push_back(img);
      }
    }
    sizes.push_back(count);
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

MoveMatrix move_matrix(Move m) {
  switch (m) {
    case Move::M1: return {1, 2, 0, -1};
    case Move::M2: return {1, 0, -2, -1};
    case Move::M3: return {1, 0, 0, -1};
    case Move::T12: return {0, 1, 1, 0};
    case Move::T23: return {-1, 0, 1, 1};
    case Move::T13: return {1, 1, 0, -1};
    default:
      throw std::invalid_argument(
          "move_matrix: only Vieta moves and transpositions act linearly on exponents");
  }
}

bool linear_action_check(const Fp2& ext, u64 u, u64 v, Move m) {
  const u64 order = ext.group_order();
  u %= order;
  v %= order;
  const Fp2Element g = ext.generator();

  auto triple_from = [&](u64 uu, u64 vv) {
    return std::array<Fp2Element, 3>{ext.trace_of_power(g, uu), ext.trace_of_power(g, vv),
                                     ext.trace_of_power(g, (uu + vv) % order)};
  };

  // Move applied to coordinates over F_{p^2} (a = 1 on the Cayley level).
  auto apply_coord = [&](const std::array<Fp2Element, 3>& t) {
    auto vieta = [&](Fp2Element a, Fp2Element b, Fp2Element c) {
      return ext.sub(ext.mul(b, c), a);
    };
    const auto& [x, y, z] = t;
    switch (m) {
      case Move::M1: return std::array{vieta(x, y, z), y, z};
      case Move::M2: return std::array{x, vieta(y, x, z), z};
      case Move::M3: return std::array{x, y, vieta(z, x, y)};
      case Move::T12: return std::array{y, x, z};
      case Move::T23: return std::array{x, z, y};
      case Move::T13: return std::array{z, y, x};
      case Move::S12: return std::array{ext.neg(x), ext.neg(y), z};
      case Move::S13: return std::array{ext.neg(x), y, ext.neg(z)};
      case Move::S23: return std::array{x, ext.neg(y), ext.neg(z)};
      default: throw std::invalid_argument("linear_action_check: unsupported move");
    }
  };

  // Exponent-side action: matrix for the linear moves, translation by
  // (p^2-1)/2 on one or both coordinates for the sign changes.
  u64 half = order / 2;
  u64 nu, nv;
  switch (m) {
    case Move::S12:
      nu = (u + half) % order;
      nv = (v + half) % order;
      break;
    case Move::S13:
      nu = (u + half) % order;
      nv = v;
      break;
    case Move::S23:
      nu = u;
      nv = (v + half) % order;
      break;
    default: {
      MoveMatrix mat = move_matrix(m);
      auto mod = [&](i64 coef, u64 e) {
        u64 c = coef >= 0 ? static_cast<u64>(coef) : order - static_cast<u64>(-coef) % order;
        return mulmod(c % order, e, order);
      };
      nu = (mod(mat.m00, u) + mod(mat.m01, v)) % order;
      nv = (mod(mat.m10, u) + mod(mat.m11, v)) % order;
      break;
    }
  }

  auto lhs = apply_coord(triple_from(u, v));
  auto rhs = triple_from(nu, nv);
  return lhs[0] == rhs[0] && lhs[1] == rhs[1] && lhs[2] == rhs[2];
}

namespace {

Mat2 mat_mul(const PrimeField& f, const Mat2& x, const Mat2& y) {
  return {f.add(f.mul(x.a, y.a), f.mul(x.b, y.c)), f.add(f.mul(x.a, y.b), f.mul(x.b, y.d)),
          f.add(f.mul(x.c, y.a), f.mul(x.d, y.c)), f.add(f.mul(x.c, y.b), f.mul(x.d, y.d))};
}

u64 mat_det(const PrimeField& f, const Mat2& x) {
  return f.sub(f.mul(x.a, x.d), f.mul(x.b, x.c));
}

u64 mat_tr(const PrimeField& f, const Mat2& x) { return f.add(x.a, x.d); }

Mat2 mat_inv_unimodular(const PrimeField& f, const Mat2& x) {
  return {x.d, f.neg(x.b), f.neg(x.c), x.a};  // adjugate; valid since det = 1
}

}  // namespace

FrickeResult fricke_check(const PrimeField& field, const Mat2& A, const Mat2& B) {
  if (mat_det(field, A) != 1 || mat_det(field, B) != 1) {
    throw std::invalid_argument("fricke_check: matrices must have determinant 1");
  }
  Mat2 AB = mat_mul(field, A, B);
  Mat2 comm = mat_mul(field, mat_mul(field, AB, mat_inv_unimodular(field, A)),
                      mat_inv_unimodular(field, B));
  u64 ta = mat_tr(field, A), tb = mat_tr(field, B), tab = mat_tr(field, AB);
  FrickeResult r;
  r.lhs = field.add(field.add(field.mul(ta, ta), field.mul(tb, tb)), field.mul(tab, tab));
  r.commutator_trace = mat_tr(field, comm);
  r.rhs = field.add(field.add(field.mul(ta, field.mul(tb, tab)), r.commutator_trace), 2);
  return r;
}

}  // namespace markoff
