#pragma once

#include <compare>
#include <vector>

#include "markoff/arith.hpp"

// Points and symmetries of the level surface x^2 + y^2 + z^2 - a*xyz = k
// over F_p.  Moves come in four families:
//   M_j   Vieta move: replace coordinate j by a*(product of the others) - it
//   D_j   Dehn twist: M_j followed by swapping the other two coordinates;
//         D1 is an involution and D3 = D2^{-1}
//   T_ij  transposition of coordinates i and j
//   S_ij  double sign change negating coordinates i and j

namespace markoff {

struct Triple {
  u32 x = 0, y = 0, z = 0;

  auto operator<=>(const Triple&) const = default;
};

enum class Move { M1, M2, M3, D1, D2, D3, T12, T23, T13, S12, S13, S23 };

class LevelSurface {
 public:
  /// Throws std::invalid_argument unless a != 0 mod p.
  LevelSurface(PrimeField field, u64 k, u64 a);

  const PrimeField& field() const { return field_; }
  u64 p() const { return field_.p(); }
  u64 k() const { return k_; }
  u64 a() const { return a_; }

  bool contains(Triple t) const;

  /// Applies a move to a point of the surface.  Throws std::domain_error if
  /// the input is not a solution (contract violation up the call chain).
  Triple apply(Move m, Triple t) const;

  /// Fixed points of D1 on the k = 0 surface: the origin plus, when 8 is a
  /// square mod p, the two points (4, r, r)/a with r = +-sqrt(8).  These are
  /// exactly the loop vertices of the Dehn graph.
  std::vector<Triple> d1_fixed_points() const;

  /// Closed-form solution count p^2 + (3 + (k/p)) ((a^2 k - 4)/p) p + 1.
  u64 count_solutions() const;

  /// All solutions in lexicographic (x, y, z) order, found by solving the
  /// quadratic in z for each (x, y).  Length equals count_solutions().
  std::vector<Triple> enumerate_solutions() const;

 private:
  PrimeField field_;
  u64 k_;
  u64 a_;
};

}  // namespace markoff
