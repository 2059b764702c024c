#include "markoff/spectral.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

extern "C" {
void dsyev_(const char* jobz, const char* uplo, const int* n, double* a, const int* lda,
            double* w, double* work, const int* lwork, int* info);
}

namespace markoff {

namespace {

constexpr double kTopWindow = 1e-6;  // detection window around the Perron value

// ---------------------------------------------------------------------------
// Dense symmetric eigenvalues (column-major input, destroyed).
// ---------------------------------------------------------------------------
std::vector<double> dense_sym_eigenvalues(std::vector<double>& a, int n, bool want_vectors) {
  std::vector<double> w(n);
  int info = 0;
  int lwork = -1;
  double wkopt = 0.0;
  const char* jobz = want_vectors ? "V" : "N";
  dsyev_(jobz, "L", &n, a.data(), &n, w.data(), &wkopt, &lwork, &info);
  lwork = static_cast<int>(wkopt);
  std::vector<double> work(lwork);
  dsyev_(jobz, "L", &n, a.data(), &n, w.data(), work.data(), &lwork, &info);
  if (info != 0) throw std::runtime_error("dsyev failed, info=" + std::to_string(info));
  return w;
}

// ---------------------------------------------------------------------------
// CSR matvec followed by exact deflation of the uniform vector.
// ---------------------------------------------------------------------------
struct Operator {
  const MarkoffGraph& g;
  std::size_t V;

  void apply(const double* x, double* y) const {
    for (std::size_t v = 0; v < V; ++v) {
      double acc = 0.0;
      for (u32 i = g.offsets[v]; i < g.offsets[v + 1]; ++i) acc += x[g.neighbors[i]];
      y[v] = acc;
    }
    project_off_uniform(y);
  }

  void project_off_uniform(double* y) const {
    double mean = 0.0;
    for (std::size_t v = 0; v < V; ++v) mean += y[v];
    mean /= static_cast<double>(V);
    for (std::size_t v = 0; v < V; ++v) y[v] -= mean;
  }
};

u64 splitmix64(u64& state) {
  u64 z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double unit_double(u64 bits) {
  return static_cast<double>(bits >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

}  // namespace

double kesten_mckay_density(int d, double lambda) {
  if (d < 3) throw std::invalid_argument("kesten_mckay_density: d must be >= 3");
  double support = 2.0 * std::sqrt(d - 1.0);
  if (std::abs(lambda) > support) return 0.0;
  // The radicand can round to a tiny negative right at the support edge.
  double num = std::sqrt(std::max(0.0, 4.0 * (d - 1.0) - lambda * lambda));
  return d * num / (2.0 * std::numbers::pi * (d * d - lambda * lambda));
}

namespace {

double adaptive_simpson(int d, double a, double b, double fa, double fm, double fb, double whole,
                        double eps, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = kesten_mckay_density(d, lm), frm = kesten_mckay_density(d, rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(d, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
         adaptive_simpson(d, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

}  // namespace

double kesten_mckay_mass(int d, double lo, double hi) {
  double support = 2.0 * std::sqrt(d - 1.0);
  lo = std::max(lo, -support);
  hi = std::min(hi, support);
  if (hi <= lo) return 0.0;
  double m = 0.5 * (lo + hi);
  double fa = kesten_mckay_density(d, lo);
  double fm = kesten_mckay_density(d, m);
  double fb = kesten_mckay_density(d, hi);
  double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(d, lo, hi, fa, fm, fb, whole, 1e-10, 48);
}

// ---------------------------------------------------------------------------
// lambda2 via Lanczos.
//
// The operator is P A P with P the projector off the all-ones vector; since
// Dehn rows sum to exactly 3, A preserves the complement and the projection
// only scrubs roundoff.  Full reorthogonalization (two-pass classical
// Gram-Schmidt against the whole basis) keeps ghost eigenvalues out, and a
// thick restart bounds memory: when the basis is full the top Ritz vectors
// are kept and the recurrence continues from the carried Lanczos vector.
// ---------------------------------------------------------------------------
Lambda2Result lambda2(const MarkoffGraph& g, double tol) {
  if (g.gens != GeneratorSet::Dehn) {
    throw std::invalid_argument("lambda2: requires a Dehn-generator (regular) graph");
  }
  const std::size_t V = g.vertex_count();
  if (V < 8) throw std::invalid_argument("lambda2: graph too small");

  const Operator op{g, V};
  const std::size_t ncv = std::min<std::size_t>(V - 1, 220);
  const std::size_t keep_max = std::min<std::size_t>(ncv / 4, 48);
  const u64 matvec_cap =
      std::max<u64>(5 * static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(V)))),
                    2 * ncv + 16);
  const double conv_threshold = 3.0 * tol;

  std::vector<double> basis((ncv + 1) * V);
  std::vector<double> T(ncv * ncv, 0.0);  // column-major, leading block in use
  std::vector<double> coeffs(ncv + 1), w(V), ritz(V), scratch;
  std::vector<double> beta(ncv, 0.0);

  auto row = [&](std::size_t i) { return basis.data() + i * V; };

  // Deterministic start vector.
  u64 seed = 0x6d61726b6f666621ull ^ (g.p * 0x100000001b3ull) ^ V;
  for (std::size_t v = 0; v < V; ++v) row(0)[v] = unit_double(splitmix64(seed));
  op.project_off_uniform(row(0));
  {
    double nrm = cblas_dnrm2(static_cast<int>(V), row(0), 1);
    cblas_dscal(static_cast<int>(V), 1.0 / nrm, row(0), 1);
  }

  Lambda2Result best;
  best.residual = std::numeric_limits<double>::infinity();
  u64 matvecs = 0;
  std::size_t kept = 0;  // number of Ritz vectors carried over the last restart
  std::size_t j = 0;     // next Lanczos step processes basis row j

  std::vector<double> tsolve;  // scratch for dense solves of the projected matrix
  std::vector<double> evals;

  auto solve_projected = [&](std::size_t m, bool vectors) {
    tsolve.assign(m * m, 0.0);
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t r = 0; r < m; ++r) tsolve[r + c * m] = T[r + c * ncv];
    }
    evals = dense_sym_eigenvalues(tsolve, static_cast<int>(m), vectors);
  };

  // Assembles the Ritz vector for projected-eigenvector column `col`, then
  // measures the explicit residual ||A y - theta y||.
  auto explicit_residual = [&](std::size_t m, std::size_t col, double& theta_out) {
    cblas_dgemv(CblasRowMajor, CblasTrans, static_cast<int>(m), static_cast<int>(V), 1.0,
                basis.data(), static_cast<int>(V), tsolve.data() + col * m, 1, 0.0, ritz.data(),
                1);
    double nrm = cblas_dnrm2(static_cast<int>(V), ritz.data(), 1);
    cblas_dscal(static_cast<int>(V), 1.0 / nrm, ritz.data(), 1);
    op.apply(ritz.data(), w.data());
    ++matvecs;
    double theta = cblas_ddot(static_cast<int>(V), ritz.data(), 1, w.data(), 1);
    cblas_daxpy(static_cast<int>(V), -theta, ritz.data(), 1, w.data(), 1);
    theta_out = theta;
    return cblas_dnrm2(static_cast<int>(V), w.data(), 1);
  };

  while (true) {
    // One Lanczos step from basis row j.
    op.apply(row(j), w.data());
    ++matvecs;
    double alpha = cblas_ddot(static_cast<int>(V), row(j), 1, w.data(), 1);
    T[j + j * ncv] = alpha;

    // Two-pass Gram-Schmidt against every stored vector.
    for (int pass = 0; pass < 2; ++pass) {
      cblas_dgemv(CblasRowMajor, CblasNoTrans, static_cast<int>(j + 1), static_cast<int>(V), 1.0,
                  basis.data(), static_cast<int>(V), w.data(), 1, 0.0, coeffs.data(), 1);
      cblas_dgemv(CblasRowMajor, CblasTrans, static_cast<int>(j + 1), static_cast<int>(V), -1.0,
                  basis.data(), static_cast<int>(V), coeffs.data(), 1, 1.0, w.data(), 1);
      op.project_off_uniform(w.data());
    }

    beta[j] = cblas_dnrm2(static_cast<int>(V), w.data(), 1);
    bool invariant = beta[j] <= 1e-12 * 3.0;
    if (!invariant) {
      cblas_dcopy(static_cast<int>(V), w.data(), 1, row(j + 1), 1);
      cblas_dscal(static_cast<int>(V), 1.0 / beta[j], row(j + 1), 1);
      if (j + 1 < ncv) T[(j + 1) + j * ncv] = T[j + (j + 1) * ncv] = beta[j];
    }

    std::size_t m = j + 1;
    bool basis_full = (m == ncv);
    bool check_now = invariant || basis_full || (m > kept + 2 && (m - kept) % 4 == 0);

    if (check_now) {
      solve_projected(m, true);
      std::size_t top = m - 1;  // ascending order
      double estimate = invariant ? 0.0 : std::abs(beta[j] * tsolve[(m - 1) + top * m]);
      if (invariant || estimate <= 0.5 * conv_threshold || matvecs >= matvec_cap) {
        double theta = 0.0;
        double res = explicit_residual(m, top, theta);
        if (res < best.residual) {
          best.value = theta;
          best.residual = res;
          best.matvecs = matvecs;
        }
        if (res <= conv_threshold) {
          best.converged = true;
          best.value = theta;
          best.residual = res;
          best.matvecs = matvecs;
          return best;
        }
        if (invariant || matvecs >= matvec_cap) {
          best.matvecs = matvecs;
          return best;  // flagged unconverged with the best estimate found
        }
      }
    }

    if (matvecs >= matvec_cap) {
      if (std::isinf(best.residual)) {
        solve_projected(m, true);
        double theta = 0.0;
        best.residual = explicit_residual(m, m - 1, theta);
        best.value = theta;
      }
      best.matvecs = matvecs;
      return best;
    }

    if (!basis_full) {
      ++j;
      continue;
    }

    // Thick restart: keep the top Ritz vectors, carry the fresh Lanczos
    // vector, and encode the couplings in the restarted projected matrix.
    solve_projected(ncv, true);
    std::size_t keep = std::min(keep_max, ncv - 2);
    scratch.assign(keep * V, 0.0);
    std::vector<double> W(keep * ncv);  // selected eigenvectors, row-major
    std::vector<double> theta_sel(keep), coupling(keep);
    for (std::size_t r = 0; r < keep; ++r) {
      std::size_t col = ncv - keep + r;  // the `keep` largest eigenvalues
      theta_sel[r] = evals[col];
      coupling[r] = beta[ncv - 1] * tsolve[(ncv - 1) + col * ncv];
      for (std::size_t i = 0; i < ncv; ++i) W[r * ncv + i] = tsolve[i + col * ncv];
    }
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(keep),
                static_cast<int>(V), static_cast<int>(ncv), 1.0, W.data(), static_cast<int>(ncv),
                basis.data(), static_cast<int>(V), 0.0, scratch.data(), static_cast<int>(V));
    std::memcpy(basis.data(), scratch.data(), sizeof(double) * keep * V);
    cblas_dcopy(static_cast<int>(V), row(ncv), 1, row(keep), 1);

    std::fill(T.begin(), T.end(), 0.0);
    for (std::size_t r = 0; r < keep; ++r) {
      T[r + r * ncv] = theta_sel[r];
      T[r + keep * ncv] = T[keep + r * ncv] = coupling[r];
    }
    kept = keep;
    j = keep;
  }
}

std::vector<double> full_spectrum(const MarkoffGraph& g, std::size_t dense_cap) {
  const std::size_t V = g.vertex_count();
  if (V > dense_cap) {
    throw std::invalid_argument("full_spectrum: " + std::to_string(V) + " vertices exceeds the dense cap " +
                                std::to_string(dense_cap) + "; use lambda2 for large graphs");
  }
  std::vector<double> a(V * V, 0.0);
  for (std::size_t v = 0; v < V; ++v) {
    for (u32 i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
      a[g.neighbors[i] + v * V] += 1.0;  // column-major; symmetric by construction
    }
  }
  return dense_sym_eigenvalues(a, static_cast<int>(V), false);
}

std::size_t exceptional_count(std::span<const double> spectrum) {
  const double lo = 2.0 * std::numbers::sqrt2;
  std::size_t count = 0;
  for (double lam : spectrum) {
    if (lam > lo && lam < 3.0 - kTopWindow) ++count;
  }
  return count;
}

std::size_t multiplicity_of_top(std::span<const double> spectrum) {
  std::size_t count = 0;
  for (double lam : spectrum) {
    if (std::abs(lam - 3.0) <= kTopWindow) ++count;
  }
  return count;
}

std::pair<double, double> cheeger_bounds(double lambda2_value, int d) {
  double gap = d - lambda2_value;
  return {0.5 * gap, std::sqrt(2.0 * d * gap)};
}

HistogramComparison histogram_compare(std::span<const double> spectrum, int nbins) {
  if (nbins < 10) throw std::invalid_argument("histogram_compare: nbins must be >= 10");
  if (spectrum.empty()) throw std::invalid_argument("histogram_compare: empty spectrum");

  HistogramComparison out;
  const double lo = -3.0, hi = 3.0;
  const double width = (hi - lo) / nbins;
  out.edges.resize(nbins + 1);
  for (int i = 0; i <= nbins; ++i) out.edges[i] = lo + i * width;

  std::vector<std::size_t> counts(nbins, 0);
  for (double lam : spectrum) {
    int b = static_cast<int>(std::floor((lam - lo) / width));
    b = std::clamp(b, 0, nbins - 1);
    ++counts[b];
  }

  out.empirical.resize(nbins);
  out.kesten_mckay.resize(nbins);
  const double V = static_cast<double>(spectrum.size());
  double l1 = 0.0;
  for (int i = 0; i < nbins; ++i) {
    out.empirical[i] = counts[i] / (V * width);
    double mass = kesten_mckay_mass(3, out.edges[i], out.edges[i + 1]);
    out.kesten_mckay[i] = mass / width;
    l1 += std::abs(out.empirical[i] - out.kesten_mckay[i]) * width;
  }
  out.l1_distance = l1;
  return out;
}

SpectralReport spectral_report(const MarkoffGraph& g, std::size_t dense_cap) {
  SpectralReport r;
  r.p = g.p;
  r.vertex_count = g.vertex_count();
  auto spec = full_spectrum(g, dense_cap);
  r.lambda2 = spec[spec.size() - 2];
  r.residual = 0.0;
  r.multiplicity_of_3 = multiplicity_of_top(spec);
  r.exceptional_count = exceptional_count(spec);
  auto [lo, hi] = cheeger_bounds(r.lambda2, 3);
  r.cheeger_lower = lo;
  r.cheeger_upper = hi;
  r.spectrum = std::move(spec);
  return r;
}

}  // namespace markoff
