// Acceptance suite: runs every gate criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion.  Exit code is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "markoff/cayley.hpp"
#include "markoff/output_table.hpp"
#include "markoff/graph.hpp"
#include "markoff/pool.hpp"
#include "markoff/spectral.hpp"
#include "markoff/surface.hpp"

extern "C" void openblas_set_num_threads(int);

namespace {

using namespace markoff;

u64 lcg(u64& s) {
  s = s * 6364136223846793005ull + 1442695040888963407ull;
  return s >> 16;
}

MarkoffGraph dehn_markoff_graph(u64 p) {
  return build_graph(LevelSurface(PrimeField(p), 0, 3), GeneratorSet::Dehn, true);
}

// Dense spectra are shared across the spectral criteria.
std::map<u64, std::vector<double>>& spectrum_cache() {
  static std::map<u64, std::vector<double>> cache;
  return cache;
}

const std::vector<double>& dense_spectrum(u64 p) {
  auto& cache = spectrum_cache();
  auto it = cache.find(p);
  if (it == cache.end()) {
    it = cache.emplace(p, full_spectrum(dehn_markoff_graph(p))).first;
  }
  return it->second;
}

std::string run_cli_line(const std::string& args) {
  std::string cmd = std::string(MARKOFF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  char buf[4096];
  std::string out;
  while (fgets(buf, sizeof(buf), pipe)) out += buf;
  pclose(pipe);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out;
}

// ---------------------------------------------------------------------------
// 1. Counting formula exactness.
// ---------------------------------------------------------------------------
bool criterion_counting(std::string& detail) {
  for (u64 p : primes_in_range(5, 31)) {
    PrimeField field(p);
    for (u64 k = 0; k < p; ++k) {
      for (u64 a : {1ull, 2ull, 3ull}) {
        LevelSurface s(field, k, a);
        u64 brute = 0;
        for (u64 x = 0; x < p; ++x) {
          for (u64 y = 0; y < p; ++y) {
            for (u64 z = 0; z < p; ++z) {
              if (s.contains({static_cast<u32>(x), static_cast<u32>(y), static_cast<u32>(z)}))
                ++brute;
            }
          }
        }
        if (brute != s.count_solutions() || s.enumerate_solutions().size() != brute) {
          detail = "mismatch at p=" + std::to_string(p) + " k=" + std::to_string(k) +
                   " a=" + std::to_string(a);
          return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 2. Component table reproduction through the CLI.
// ---------------------------------------------------------------------------
struct TableCell {
  u64 p, k;
  const char* sizes;
};

// Expected component-size multisets (ascending) for the full generator set.
const TableCell kComponentTable[] = {
    {5, 0, "1 40"},   {5, 1, "4 6 16"},  {5, 2, "36"},      {5, 3, "16"},     {5, 4, "6"},
    {7, 0, "1 28"},   {7, 1, "6 16"},    {7, 2, "4 6 16 24"}, {7, 3, "64"},   {7, 4, "64"},
    {7, 5, "36"},     {7, 6, "64"},
    {11, 0, "1 88"},  {11, 1, "6 160"},  {11, 2, "144"},    {11, 3, "6 160"}, {11, 4, "6 160"},
    {11, 5, "6 72"},  {11, 6, "40 60"},  {11, 7, "144"},    {11, 8, "40 60"},
    {11, 9, "4 6 16 48 48"}, {11, 10, "16 128"},
    {13, 0, "1 208"}, {13, 1, "6 112"},  {13, 2, "196"},    {13, 3, "6 216"}, {13, 4, "6 112"},
    {13, 5, "144"},   {13, 6, "16 128"}, {13, 7, "144"},    {13, 8, "196"},   {13, 9, "6 216"},
    {13, 10, "6 112"}, {13, 11, "196"},  {13, 12, "4 6 16 48 96"},
    {17, 0, "1 340"}, {17, 1, "6 216"},  {17, 2, "6 216"},  {17, 3, "256"},
    {17, 4, "6 16 336"}, {17, 5, "256"}, {17, 6, "36 288"}, {17, 7, "324"},
    {17, 8, "4 6 16 24 96 144"}, {17, 9, "6 352"}, {17, 10, "324"}, {17, 11, "256"},
    {17, 12, "324"}, {17, 13, "6 216"}, {17, 14, "256"}, {17, 15, "6 216"}, {17, 16, "6 352"},
};

u64 sum_of_size_list(const std::string& sizes) {
  std::istringstream in(sizes);
  u64 total = 0, v = 0;
  while (in >> v) total += v;
  return total;
}

bool criterion_component_table(std::string& detail) {
  bool ok = true;
  for (const TableCell& cell : kComponentTable) {
    std::string got = run_cli_line("components --p " + std::to_string(cell.p) + " --k " +
                                   std::to_string(cell.k) + " --gens full");
    if (got == cell.sizes) continue;
    ok = false;
    // Mass diagnostic: a component multiset must partition the solution set,
    // whose size is pinned independently by criterion 1.
    u64 count = LevelSurface(PrimeField(cell.p), cell.k, 3).count_solutions();
    detail += "p=" + std::to_string(cell.p) + " k=" + std::to_string(cell.k) + ": got {" + got +
              "} (sum " + std::to_string(sum_of_size_list(got)) + "), reference row {" +
              cell.sizes + "} (sum " + std::to_string(sum_of_size_list(cell.sizes)) +
              "), solution count " + std::to_string(count) + "; ";
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 3. Component multisets of the p=7, k=2 surface for both generator sets.
// ---------------------------------------------------------------------------
bool criterion_figure5(std::string& detail) {
  LevelSurface s(PrimeField(7), 2, 3);
  auto dehn = connected_components(build_graph(s, GeneratorSet::Dehn, false));
  auto full = connected_components(build_graph(s, GeneratorSet::MovesPermsSigns, false));
  bool ok = true;
  if (full != std::vector<u64>{4, 6, 16, 24}) {
    detail += "full-set sizes " + join_sizes(full) + " != 4 6 16 24; ";
    ok = false;
  }
  if (dehn != std::vector<u64>{1, 3, 4, 6, 12, 24}) {
    auto perms = connected_components(build_graph(s, GeneratorSet::MovesPerms, false));
    detail += "Dehn-set sizes {" + join_sizes(dehn) +
              "} != stated {1 3 4 6 12 24}; the stated multiset is produced by moves plus "
              "permutations ({" +
              join_sizes(perms) + "}), while the Dehn set alone yields " +
              std::to_string(dehn.size()) + " components";
    ok = false;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 4. Orbit prediction equals BFS enumeration.
// ---------------------------------------------------------------------------
bool criterion_prediction_vs_empirical(std::string& detail) {
  for (u64 p : primes_in_range(5, 199)) {
    PrimeField field(p);
    if (predicted_orbit_sizes(field, true) != empirical_orbit_sizes(field, true)) {
      detail = "signs=true mismatch at p=" + std::to_string(p);
      return false;
    }
    if (p <= 179 &&
        predicted_orbit_sizes(field, false) != empirical_orbit_sizes(field, false)) {
      detail = "signs=false mismatch at p=" + std::to_string(p);
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 5. Mass conservation of predicted orbit sizes.
// ---------------------------------------------------------------------------
bool criterion_mass(std::string& detail) {
  for (u64 p : primes_in_range(5, 499)) {
    PrimeField field(p);
    for (bool signs : {false, true}) {
      u64 sum = 0;
      for (u64 s : predicted_orbit_sizes(field, signs)) sum += s;
      if (sum != p * p + 1) {
        detail = "p=" + std::to_string(p) + " signs=" + (signs ? "1" : "0") + ": sum " +
                 std::to_string(sum) + " != " + std::to_string(p * p + 1);
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 6. Closed-form orbit counts and the divisor bound.
// ---------------------------------------------------------------------------
bool criterion_orbit_counts(std::string& detail) {
  struct Expect {
    u64 p;
    bool signs;
    u64 count;
  };
  for (const auto& e : {Expect{29, false, 12}, Expect{71, false, 18}, Expect{5, true, 3},
                        Expect{199, true, 14}}) {
    u64 got = count_orbits(PrimeField(e.p), e.signs);
    if (got != e.count) {
      detail = "count_orbits(" + std::to_string(e.p) + ") = " + std::to_string(got) +
               ", expected " + std::to_string(e.count);
      return false;
    }
  }
  for (u64 p : primes_in_range(5, 10000)) {
    u64 divisors = divisors_of(factorize(p * p - 1)).size();
    if (count_orbits(PrimeField(p), false) > divisors) {
      detail = "divisor bound violated at p=" + std::to_string(p);
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 7. Strong approximation at desk scale.
// ---------------------------------------------------------------------------
bool criterion_connectivity(std::string& detail) {
  auto primes = primes_in_range(5, 300);
  std::vector<std::size_t> counts(primes.size(), 0);
  parallel_for(primes.size(), 2, [&](std::size_t i) {
    counts[i] = connected_components(dehn_markoff_graph(primes[i])).size();
  });
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (counts[i] != 1) {
      detail = "p=" + std::to_string(primes[i]) + " has " + std::to_string(counts[i]) +
               " components";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 8. Spectral regression band plus Lanczos-vs-dense agreement.
// ---------------------------------------------------------------------------
bool criterion_spectral_band(std::string& detail) {
  auto primes = primes_in_range(100, 300);
  std::vector<Lambda2Result> results(primes.size());
  openblas_set_num_threads(1);
  parallel_for(primes.size(), 2, [&](std::size_t i) {
    results[i] = lambda2(dehn_markoff_graph(primes[i]), 1e-9);
  });
  openblas_set_num_threads(2);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    u64 p = primes[i];
    const auto& r = results[i];
    if (!r.converged || r.residual >= 1e-8) {
      detail = "p=" + std::to_string(p) + " residual " + std::to_string(r.residual);
      return false;
    }
    double lo = (p % 4 == 3) ? 2.70 : 2.80;
    double hi = (p % 4 == 3) ? 2.90 : 3.00;
    if (r.value <= lo || r.value >= hi) {
      detail = "p=" + std::to_string(p) + " lambda2 " + std::to_string(r.value) +
               " outside (" + std::to_string(lo) + ", " + std::to_string(hi) + ")";
      return false;
    }
  }
  for (u64 p : primes_in_range(5, 83)) {
    const auto& spec = dense_spectrum(p);
    double dense = spec[spec.size() - 2];
    auto r = lambda2(dehn_markoff_graph(p), 1e-9);
    if (!r.converged || std::abs(r.value - dense) > 1e-6) {
      detail = "p=" + std::to_string(p) + " lanczos " + std::to_string(r.value) + " vs dense " +
               std::to_string(dense);
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 9. Kesten-McKay fit at p = 83 and 89.
// ---------------------------------------------------------------------------
bool criterion_km_fit(std::string& detail) {
  for (u64 p : {83ull, 89ull}) {
    u64 expected_v = LevelSurface(PrimeField(p), 0, 3).count_solutions() - 1;
    const auto& spec = dense_spectrum(p);
    if (spec.size() != expected_v) {
      detail = "p=" + std::to_string(p) + " has " + std::to_string(spec.size()) +
               " eigenvalues, expected " + std::to_string(expected_v);
      return false;
    }
    double l1 = histogram_compare(spec, 60).l1_distance;
    if (!(l1 < 0.08)) {
      detail = "p=" + std::to_string(p) + " l1 " + std::to_string(l1) + " >= 0.08";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 10. Exceptional-eigenvalue counts grow roughly linearly in p.
// ---------------------------------------------------------------------------
bool criterion_exceptional_scaling(std::string& detail) {
  const std::vector<u64> primes = {13, 17, 29, 37, 41, 53, 61, 73, 89, 97};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (u64 p : primes) {
    std::size_t count = exceptional_count(dense_spectrum(p));
    if (count == 0) {
      detail = "p=" + std::to_string(p) + " has no exceptional eigenvalues";
      return false;
    }
    double x = std::log(static_cast<double>(p));
    double y = std::log(static_cast<double>(count));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(primes.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (slope < 0.6 || slope > 1.4) {
    detail = "slope " + std::to_string(slope) + " outside [0.6, 1.4]";
    return false;
  }
  detail = "slope " + std::to_string(slope);
  return true;
}

// ---------------------------------------------------------------------------
// 11. Oracle identities.
// ---------------------------------------------------------------------------
bool criterion_oracles(std::string& detail) {
  for (u64 p : primes_in_range(5, 101)) {
    for (u64 s = 0; s < p; ++s) {
      i64 expect = s == 0 ? static_cast<i64>(p) - 1 : -1;
      if (shifted_square_sum(s, p) != expect) {
        detail = "character sum wrong at p=" + std::to_string(p) + " s=" + std::to_string(s);
        return false;
      }
    }
  }

  auto primes = primes_in_range(5, 97);
  u64 state = 0x5eed;
  for (int i = 0; i < 10000; ++i) {
    PrimeField field(primes[lcg(state) % primes.size()]);
    auto rand_mat = [&]() {
      while (true) {
        u64 a = lcg(state) % field.p(), b = lcg(state) % field.p(), c = lcg(state) % field.p();
        if (a == 0) continue;
        return Mat2{a, b, c, field.mul(field.add(1, field.mul(b, c)), field.inv(a))};
      }
    };
    auto r = fricke_check(field, rand_mat(), rand_mat());
    if (r.lhs != r.rhs) {
      detail = "trace identity violated at p=" + std::to_string(field.p());
      return false;
    }
  }

  static constexpr Move kMoves[] = {Move::M1,  Move::M2,  Move::M3,  Move::T12, Move::T23,
                                    Move::T13, Move::S12, Move::S13, Move::S23};
  std::map<u64, Fp2> extensions;
  for (int i = 0; i < 10000; ++i) {
    u64 p = primes[lcg(state) % primes.size()];
    auto it = extensions.find(p);
    if (it == extensions.end()) it = extensions.emplace(p, Fp2{PrimeField(p)}).first;
    const Fp2& ext = it->second;
    u64 u = lcg(state) % ext.group_order();
    u64 v = lcg(state) % ext.group_order();
    Move m = kMoves[lcg(state) % 9];
    if (!linear_action_check(ext, u, v, m)) {
      detail = "exponent action mismatch at p=" + std::to_string(p);
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  openblas_set_num_threads(2);
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "counting formula exactness (p <= 31, all k, a in {1,2,3})", criterion_counting},
      {2, "component table reproduction via the CLI (p in {5..17})", criterion_component_table},
      {3, "p=7 k=2 component multisets for Dehn and full generator sets", criterion_figure5},
      {4, "orbit prediction = BFS orbits (signs p <= 199; no signs p <= 179)",
       criterion_prediction_vs_empirical},
      {5, "predicted orbit sizes sum to p^2 + 1 (p <= 499)", criterion_mass},
      {6, "closed-form orbit counts and divisor bound (p <= 10^4)", criterion_orbit_counts},
      {7, "k=0 Dehn graph connected for 5 <= p <= 300", criterion_connectivity},
      {8, "lambda2 bands with residual < 1e-8; Lanczos = dense to 1e-6 (p <= 83)",
       criterion_spectral_band},
      {9, "Kesten-McKay 60-bin L1 fit < 0.08 at p = 83, 89", criterion_km_fit},
      {10, "exceptional eigenvalue counts positive with log-log slope in [0.6, 1.4]",
       criterion_exceptional_scaling},
      {11, "oracle identities: character sum, trace identity, exponent action",
       criterion_oracles},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d  %s  (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, elapsed,
                detail.empty() ? "" : "  -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("%d criteria failed\n", failures);
  }
  return failures;
}
