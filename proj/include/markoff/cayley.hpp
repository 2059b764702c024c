#pragma once

#include <optional>
#include <vector>

#include "markoff/fp2.hpp"
#include "markoff/surface.hpp"

// Orbit structure of the degenerate level x^2 + y^2 + z^2 = xyz + 4 mod p.
// On this surface the moves act linearly on the exponent vector (u, v) of a
// parametrization x = g^u + g^{-u}, y = g^v + g^{-v}, z = g^{u+v} + g^{-u-v}
// with g generating the multiplicative group of F_{p^2}.  Orbits correspond
// to divisors of p^2 - 1 that are multiples of p+1 or p-1, with explicit
// sizes, and double sign changes merge specific pairs of them.

namespace markoff {

/// Factorizations of p + e and p - e with e = (-1)^((p-1)/2), arranged so
/// that p + e = 2 * (odd part) and p - e = 2^(e2-1) * (odd part).
struct EpsilonDecomposition {
  u64 p = 0;
  int epsilon = 0;
  u32 e2 = 0;                                   // power of 2 in p^2 - 1, always >= 3
  std::vector<std::pair<u64, u32>> q_plus;      // odd primes dividing p + epsilon
  std::vector<std::pair<u64, u32>> q_minus;     // odd primes dividing p - epsilon
};

EpsilonDecomposition epsilon_decomposition(const PrimeField& field);

/// Closed-form orbit counts: e2 * prod_{Q-}(e+1) + 2 * prod_{Q+}(e+1) - 2
/// without sign changes, (e2-1) * prod_{Q-}(e+1) + prod_{Q+}(e+1) - 1 with.
u64 count_orbits(const PrimeField& field, bool signs);

struct OrbitPrediction {
  u64 divisor = 0;                  // t | p^2 - 1, a multiple of p+1 or p-1
  std::vector<u32> exponents;       // f(q), aligned with factorize(p^2 - 1)
  u64 size = 0;
  std::optional<u64> merged_with;   // divisor absorbed by a sign-change merge
};

/// One prediction per orbit, ordered by increasing divisor.  Sizes follow
/// the rule (1/2) prod_{f(q) < e_q} (q^2 - 1) q^(2(e_q - f_q - 1)), doubled
/// for the two divisors p^2-1 and (p^2-1)/2.  With signs, each orbit whose
/// divisor carries 2^(e2-1) merges into the orbit of twice its divisor.
std::vector<OrbitPrediction> predict_orbits(const PrimeField& field, bool signs);

/// Convenience: predicted orbit sizes, ascending.
std::vector<u64> predicted_orbit_sizes(const PrimeField& field, bool signs);

/// Orbit sizes found by breadth-first search over the actual solutions of
/// x^2 + y^2 + z^2 = xyz + 4 under Vieta moves and transpositions (plus
/// double sign changes when signs is set).  Ascending.  The visited set is
/// a p^3 bit array, so the cap keeps memory at desk scale.
std::vector<u64> empirical_orbit_sizes(const PrimeField& field, bool signs, u64 cap = 199);

/// 2x2 integer matrix acting on the exponent vector (u, v).
struct MoveMatrix {
  i64 m00 = 0, m01 = 0, m10 = 0, m11 = 0;

  i64 det() const { return m00 * m11 - m01 * m10; }
};

/// Exponent action of a Vieta move or transposition, determinant +-1.
/// Sign changes act by translation, not linearly, and are rejected.
MoveMatrix move_matrix(Move m);

/// Checks the commuting square for one move: build the triple from (u, v),
/// apply the move to coordinates over F_{p^2}, and compare against the
/// triple rebuilt from the transformed exponents (sign changes translate
/// u and/or v by (p^2-1)/2 instead of acting by a matrix).
bool linear_action_check(const Fp2& ext, u64 u, u64 v, Move m);

/// 2x2 matrix over F_p, row-major.
struct Mat2 {
  u64 a = 1, b = 0, c = 0, d = 1;
};

struct FrickeResult {
  u64 lhs = 0;               // tr(A)^2 + tr(B)^2 + tr(AB)^2
  u64 rhs = 0;               // tr(A)tr(B)tr(AB) + tr(ABA^-1B^-1) + 2
  u64 commutator_trace = 0;  // tr(ABA^-1B^-1); 2 exactly on the Cayley level
};

/// Evaluates both sides of the Fricke trace identity for unimodular A, B.
/// Throws std::invalid_argument unless det A = det B = 1 mod p.
FrickeResult fricke_check(const PrimeField& field, const Mat2& A, const Mat2& B);

}  // namespace markoff
