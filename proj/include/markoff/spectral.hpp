#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "markoff/graph.hpp"

// Spectral analysis of Markoff graphs: the second-highest adjacency
// eigenvalue lambda_2, full spectra at small sizes, the Kesten-McKay
// reference density for random 3-regular graphs, and Cheeger bounds.

namespace markoff {

/// Kesten-McKay density (d/2pi) sqrt(4(d-1) - x^2) / (d^2 - x^2) supported
/// on |x| <= 2 sqrt(d-1); zero outside.
double kesten_mckay_density(int d, double lambda);

/// Mass of the Kesten-McKay density over [lo, hi], adaptive quadrature with
/// relative error below 1e-8.
double kesten_mckay_mass(int d, double lo, double hi);

struct Lambda2Result {
  double value = 0.0;
  double residual = 0.0;  // ||A v - value * v||_2 for the unit Ritz vector v
  bool converged = false;
  u64 matvecs = 0;
};

/// Largest eigenvalue of the adjacency operator restricted to the orthogonal
/// complement of the all-ones vector.  Lanczos with full reorthogonalization,
/// thick restarts, and exact deflation of the uniform vector; requires a
/// Dehn-generator (regular) graph.  Converged means residual <= 3 * tol.
Lambda2Result lambda2(const MarkoffGraph& g, double tol = 1e-8);

/// All eigenvalues of the symmetric adjacency matrix, ascending.  Dense
/// tridiagonalization + QR; graphs above the cap are rejected.
std::vector<double> full_spectrum(const MarkoffGraph& g, std::size_t dense_cap = 12000);

/// Number of eigenvalues strictly between 2*sqrt(2) and 3, excluding
/// anything within 1e-6 of the Perron value 3.
std::size_t exceptional_count(std::span<const double> spectrum);

/// Eigenvalues within 1e-6 of 3; equals the component count for Dehn graphs.
std::size_t multiplicity_of_top(std::span<const double> spectrum);

/// Cheeger sandwich ( (d - lambda2)/2 , sqrt(2 d (d - lambda2)) ).
std::pair<double, double> cheeger_bounds(double lambda2_value, int d);

struct HistogramComparison {
  std::vector<double> edges;         // nbins + 1 values spanning [-3, 3]
  std::vector<double> empirical;     // densities, integrate to 1
  std::vector<double> kesten_mckay;  // bin-averaged reference densities
  double l1_distance = 0.0;          // sum |emp - km| * width
};

/// Equal-width comparison of an eigenvalue histogram against the d = 3
/// Kesten-McKay law.  nbins must be at least 10.
HistogramComparison histogram_compare(std::span<const double> spectrum, int nbins);

struct SpectralReport {
  u64 p = 0;
  std::size_t vertex_count = 0;
  double lambda2 = 0.0;
  double residual = 0.0;
  std::size_t multiplicity_of_3 = 0;
  std::optional<std::vector<double>> spectrum;
  std::size_t exceptional_count = 0;
  double cheeger_lower = 0.0;
  double cheeger_upper = 0.0;
};

/// Full dense report for graphs under the cap.
SpectralReport spectral_report(const MarkoffGraph& g, std::size_t dense_cap = 12000);

}  // namespace markoff
