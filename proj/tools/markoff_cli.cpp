// Command-line frontend: counting, component tables, spectral sweeps, and
// Cayley-cubic orbit analysis over prime ranges.  CSV is the primary output
// format; JSON mirrors the same columns.  Exit codes: 0 success, 1 usage
// error, 2 failed internal assertion.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "markoff/cayley.hpp"
#include "markoff/graph.hpp"
#include "markoff/output_table.hpp"
#include "markoff/pool.hpp"
#include "markoff/spectral.hpp"
#include "markoff/surface.hpp"

namespace {

using namespace markoff;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssertion = 2;

void write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot open output file '" + out_path + "'");
  out << text;
}

PrimeField checked_field(u64 p) {
  return PrimeField(p);  // throws invalid_argument for non-primes and p < 5
}

// ---------------------------------------------------------------------------
// count
// ---------------------------------------------------------------------------
int cmd_count(u64 p, u64 k, u64 a) {
  LevelSurface s(checked_field(p), k, a);
  u64 formula = s.count_solutions();
  u64 enumerated = s.enumerate_solutions().size();
  bool ok = formula == enumerated;
  std::printf("p=%llu k=%llu a=%llu formula=%llu enumerated=%llu %s\n",
              static_cast<unsigned long long>(p), static_cast<unsigned long long>(s.k()),
              static_cast<unsigned long long>(s.a()), static_cast<unsigned long long>(formula),
              static_cast<unsigned long long>(enumerated), ok ? "ok" : "MISMATCH");
  return ok ? kExitOk : kExitAssertion;
}

// ---------------------------------------------------------------------------
// components / components-table
// ---------------------------------------------------------------------------
int cmd_components(u64 p, u64 k, u64 a, const std::string& gens_name, bool exclude_origin,
                   const std::string& out_path, const std::string& format,
                   const std::string& edges_path) {
  GeneratorSet gens = generator_set_from_string(gens_name);
  LevelSurface s(checked_field(p), k, a);
  MarkoffGraph g = build_graph(s, gens, exclude_origin);
  std::vector<u64> sizes = connected_components(g);
  std::printf("%s\n", join_sizes(sizes).c_str());
  if (!out_path.empty()) {
    OutputTable table({"p", "k", "a", "gens", "component_sizes"});
    table.add_row({p, s.k(), s.a(), to_string(gens), join_sizes(sizes)});
    write_or_print(table.render(format), out_path);
  }
  if (!edges_path.empty()) {
    write_or_print(edge_list(g), edges_path);
  }
  return kExitOk;
}

int cmd_components_table(u64 pmin, u64 pmax, u64 a, const std::string& gens_name, int workers,
                         const std::string& out_path, const std::string& format) {
  GeneratorSet gens = generator_set_from_string(gens_name);
  std::vector<u64> primes = primes_in_range(std::max<u64>(pmin, 5), pmax);
  std::vector<std::vector<ComponentRow>> per_prime(primes.size());
  parallel_for(primes.size(), resolve_workers(workers), [&](std::size_t i) {
    per_prime[i] = component_table(primes[i], primes[i], a, gens);
  });
  OutputTable table({"p", "k", "a", "gens", "component_sizes"});
  for (const auto& rows : per_prime) {
    for (const auto& row : rows) {
      table.add_row({row.p, row.k, row.a, to_string(row.gens), join_sizes(row.sizes)});
    }
  }
  write_or_print(table.render(format), out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// lambda2 sweep
// ---------------------------------------------------------------------------
struct SweepRow {
  double lambda2 = 0.0;
  double residual = 0.0;
  bool converged = false;
};

std::map<u64, SweepRow> read_sweep_rows(const std::string& path) {
  std::map<u64, SweepRow> rows;
  std::ifstream in(path);
  if (!in) return rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string cell;
    SweepRow row;
    if (!std::getline(ss, cell, ',')) continue;
    u64 p = std::strtoull(cell.c_str(), nullptr, 10);
    if (!std::getline(ss, cell, ',')) continue;
    row.lambda2 = std::strtod(cell.c_str(), nullptr);
    if (!std::getline(ss, cell, ',')) continue;
    row.residual = std::strtod(cell.c_str(), nullptr);
    if (!std::getline(ss, cell, ',')) continue;
    row.converged = cell == "1";
    if (p != 0) rows[p] = row;
  }
  return rows;
}

int cmd_lambda2_sweep(u64 pmin, u64 pmax, u64 a, double tol, int workers,
                      const std::string& out_path, const std::string& format) {
  std::vector<u64> primes = primes_in_range(std::max<u64>(pmin, 5), pmax);

  // Resume: converged rows already present in the output file are kept.
  std::map<u64, SweepRow> done;
  if (!out_path.empty() && format == "csv") {
    for (const auto& [prime, row] : read_sweep_rows(out_path)) {
      if (row.converged) done[prime] = row;
    }
  }

  std::vector<SweepRow> results(primes.size());
  parallel_for(primes.size(), resolve_workers(workers), [&](std::size_t i) {
    u64 p = primes[i];
    if (auto it = done.find(p); it != done.end()) {
      results[i] = it->second;
      return;
    }
    try {
      LevelSurface s(PrimeField(p), 0, a);
      MarkoffGraph g = build_graph(s, GeneratorSet::Dehn, true);
      Lambda2Result r = lambda2(g, tol);
      results[i] = {r.value, r.residual, r.converged};
    } catch (const std::exception& e) {
      std::fprintf(stderr, "lambda2 sweep: p=%llu failed: %s\n",
                   static_cast<unsigned long long>(p), e.what());
      results[i] = {0.0, 0.0, false};
    }
  });

  OutputTable table({"p", "lambda2", "residual", "converged"});
  for (std::size_t i = 0; i < primes.size(); ++i) {
    table.add_row({primes[i], results[i].lambda2, results[i].residual,
                   static_cast<u64>(results[i].converged ? 1 : 0)});
  }
  write_or_print(table.render(format), out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// spectrum: one dense spectrum with histogram, or an exceptional-count sweep
// ---------------------------------------------------------------------------
int cmd_spectrum_single(u64 p, u64 a, int nbins, u64 dense_cap, const std::string& out_prefix) {
  if (nbins < 10) throw std::invalid_argument("spectrum: --nbins must be >= 10");
  LevelSurface s(checked_field(p), 0, a);
  MarkoffGraph g = build_graph(s, GeneratorSet::Dehn, true);
  SpectralReport report = spectral_report(g, dense_cap);
  const auto& spectrum = *report.spectrum;
  HistogramComparison hist = histogram_compare(spectrum, nbins);

  std::printf(
      "p=%llu V=%zu lambda2=%s multiplicity_of_3=%zu exceptional=%zu l1=%s "
      "cheeger_lower=%s cheeger_upper=%s\n",
      static_cast<unsigned long long>(p), report.vertex_count,
      format_double(report.lambda2).c_str(), report.multiplicity_of_3, report.exceptional_count,
      format_double(hist.l1_distance).c_str(), format_double(report.cheeger_lower).c_str(),
      format_double(report.cheeger_upper).c_str());

  if (!out_prefix.empty()) {
    OutputTable spec_table({"eigenvalue"});
    for (double lam : spectrum) spec_table.add_row({lam});
    write_or_print(spec_table.to_csv(), out_prefix + ".spectrum.csv");

    OutputTable hist_table({"bin_center", "empirical", "kesten_mckay"});
    for (std::size_t i = 0; i + 1 < hist.edges.size(); ++i) {
      hist_table.add_row(
          {0.5 * (hist.edges[i] + hist.edges[i + 1]), hist.empirical[i], hist.kesten_mckay[i]});
    }
    write_or_print(hist_table.to_csv(), out_prefix + ".histogram.csv");
  }
  return kExitOk;
}

int cmd_spectrum_sweep(u64 pmin, u64 pmax, u64 a, u64 dense_cap, int workers,
                       const std::string& out_path, const std::string& format) {
  std::vector<u64> primes = primes_in_range(std::max<u64>(pmin, 5), pmax);
  std::vector<u64> counts(primes.size(), 0);
  parallel_for(primes.size(), resolve_workers(workers), [&](std::size_t i) {
    LevelSurface s(PrimeField(primes[i]), 0, a);
    MarkoffGraph g = build_graph(s, GeneratorSet::Dehn, true);
    counts[i] = exceptional_count(full_spectrum(g, dense_cap));
  });
  OutputTable table({"p", "exceptional_count"});
  for (std::size_t i = 0; i < primes.size(); ++i) table.add_row({primes[i], counts[i]});
  write_or_print(table.render(format), out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// cayley
// ---------------------------------------------------------------------------
int cmd_cayley(u64 p_single, u64 pmax, bool signs, bool verify, u64 empirical_cap,
               const std::string& out_path, const std::string& format) {
  std::vector<u64> primes =
      p_single > 0 ? std::vector<u64>{p_single} : primes_in_range(5, pmax);
  if (p_single > 0) checked_field(p_single);

  bool all_match = true;
  OutputTable table({"p", "signs", "predicted_sizes", "empirical_sizes", "match"});
  for (u64 p : primes) {
    PrimeField field(p);
    std::vector<u64> predicted = predicted_orbit_sizes(field, signs);
    std::string empirical_cell, match_cell;
    if (verify) {
      if (p <= empirical_cap) {
        std::vector<u64> empirical = empirical_orbit_sizes(field, signs, empirical_cap);
        bool match = empirical == predicted;
        all_match = all_match && match;
        empirical_cell = join_sizes(empirical);
        match_cell = match ? "1" : "0";
      } else {
        std::fprintf(stderr, "cayley: skipping verification for p=%llu (> cap %llu)\n",
                     static_cast<unsigned long long>(p),
                     static_cast<unsigned long long>(empirical_cap));
      }
    }
    table.add_row({p, static_cast<u64>(signs ? 1 : 0), join_sizes(predicted), empirical_cell,
                   match_cell});
  }
  write_or_print(table.render(format), out_path);
  return all_match ? kExitOk : kExitAssertion;
}

// ---------------------------------------------------------------------------
// self-tests
// ---------------------------------------------------------------------------
u64 rng_next(u64& state) {
  state = state * 6364136223846793005ull + 1442695040888963407ull;
  return state >> 16;
}

int cmd_fricke_selftest(u64 pairs, u64 pmax, u64 seed) {
  std::vector<u64> primes = primes_in_range(5, pmax);
  u64 state = seed * 0x9e3779b97f4a7c15ull + 1;
  for (u64 done = 0; done < pairs; ++done) {
    const u64 p = primes[rng_next(state) % primes.size()];
    PrimeField field(p);
    auto random_unimodular = [&]() {
      while (true) {
        u64 a = rng_next(state) % p, b = rng_next(state) % p, c = rng_next(state) % p;
        if (a == 0) continue;
        u64 d = field.mul(field.add(1, field.mul(b, c)), field.inv(a));  // det = 1
        return Mat2{a, b, c, d};
      }
    };
    FrickeResult r = fricke_check(field, random_unimodular(), random_unimodular());
    if (r.lhs != r.rhs) {
      std::fprintf(stderr, "fricke-selftest: identity violated at p=%llu\n",
                   static_cast<unsigned long long>(p));
      return kExitAssertion;
    }
  }
  std::printf("fricke-selftest: %llu pairs ok (p <= %llu)\n",
              static_cast<unsigned long long>(pairs), static_cast<unsigned long long>(pmax));
  return kExitOk;
}

int cmd_selftest() {
  for (u64 p : primes_in_range(5, 19)) {
    PrimeField field(p);
    for (u64 k = 0; k < p; ++k) {
      for (u64 a : {1ull, 2ull, 3ull}) {
        LevelSurface s(field, k, a);
        if (s.count_solutions() != s.enumerate_solutions().size()) {
          std::fprintf(stderr, "selftest: count mismatch at p=%llu k=%llu a=%llu\n",
                       static_cast<unsigned long long>(p), static_cast<unsigned long long>(k),
                       static_cast<unsigned long long>(a));
          return kExitAssertion;
        }
      }
    }
  }
  std::printf("selftest: counting formula vs enumeration ok (p <= 19)\n");

  for (u64 p : primes_in_range(5, 101)) {
    for (u64 s = 0; s < p; ++s) {
      i64 expect = s == 0 ? static_cast<i64>(p) - 1 : -1;
      if (shifted_square_sum(s, p) != expect) {
        std::fprintf(stderr, "selftest: shifted square sum wrong at p=%llu s=%llu\n",
                     static_cast<unsigned long long>(p), static_cast<unsigned long long>(s));
        return kExitAssertion;
      }
    }
  }
  std::printf("selftest: shifted-square character sum ok (p <= 101)\n");

  u64 state = 0xfeedface;
  static constexpr Move kAll[] = {Move::M1,  Move::M2,  Move::M3,  Move::T12, Move::T23,
                                  Move::T13, Move::S12, Move::S13, Move::S23};
  for (u64 p : {5ull, 13ull, 29ull}) {
    Fp2 ext{PrimeField(p)};
    for (int i = 0; i < 500; ++i) {
      u64 u = rng_next(state) % ext.group_order();
      u64 v = rng_next(state) % ext.group_order();
      Move m = kAll[rng_next(state) % 9];
      if (!linear_action_check(ext, u, v, m)) {
        std::fprintf(stderr, "selftest: exponent action mismatch at p=%llu\n",
                     static_cast<unsigned long long>(p));
        return kExitAssertion;
      }
    }
  }
  std::printf("selftest: exponent action on the degenerate level ok\n");

  int rc = cmd_fricke_selftest(2000, 97, 7);
  if (rc != kExitOk) return rc;
  std::printf("selftest: all checks passed\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markoff surface graphs mod p: counting, components, spectra, orbit structure"};
  app.require_subcommand(1);

  u64 p = 0, k = 0, a = 3, pmin = 5, pmax = 0;
  u64 dense_cap = 12000, empirical_cap = 199, pairs = 10000, seed = 1;
  int nbins = 60, workers = -1;
  double tol = 1e-8;
  bool signs = false, verify = false, exclude_origin = false;
  std::string gens = "full", out, format = "csv", edges;

  auto* c_count = app.add_subcommand("count", "solution count: closed form vs enumeration");
  c_count->add_option("--p", p, "prime p >= 5")->required();
  c_count->add_option("--k", k, "level");
  c_count->add_option("--a", a, "cubic coefficient (default 3)");

  auto* c_comp = app.add_subcommand("components", "component sizes of one level surface");
  c_comp->add_option("--p", p)->required();
  c_comp->add_option("--k", k);
  c_comp->add_option("--a", a);
  c_comp->add_option("--gens", gens, "dehn|perms|full (default full)");
  c_comp->add_flag("--exclude-origin", exclude_origin, "drop (0,0,0); requires k = 0");
  c_comp->add_option("--out", out);
  c_comp->add_option("--format", format, "csv|json");
  c_comp->add_option("--edges", edges, "write a 'u v' edge list for plotting");

  auto* c_table = app.add_subcommand("components-table", "component sizes for all k, p in range");
  c_table->add_option("--pmin", pmin);
  c_table->add_option("--pmax", pmax)->required();
  c_table->add_option("--a", a);
  c_table->add_option("--gens", gens);
  c_table->add_option("--workers", workers, "default MARKOFF_WORKERS or hardware");
  c_table->add_option("--out", out);
  c_table->add_option("--format", format);

  auto* c_l2 = app.add_subcommand("lambda2", "second-eigenvalue sweep over k=0 Dehn graphs");
  c_l2->add_option("--pmin", pmin);
  c_l2->add_option("--pmax", pmax)->required();
  c_l2->add_option("--a", a);
  c_l2->add_option("--tol", tol, "residual tolerance (default 1e-8)");
  c_l2->add_option("--workers", workers);
  c_l2->add_option("--out", out, "output file; existing converged rows are reused");
  c_l2->add_option("--format", format);

  auto* c_spec = app.add_subcommand("spectrum", "dense spectrum and Kesten-McKay comparison");
  c_spec->add_option("--p", p, "single prime: spectrum + histogram files");
  c_spec->add_option("--pmin", pmin);
  c_spec->add_option("--pmax", pmax, "with --pmin: exceptional-count sweep");
  c_spec->add_option("--a", a);
  c_spec->add_option("--nbins", nbins, "histogram bins (default 60, min 10)");
  c_spec->add_option("--dense-cap", dense_cap, "max vertices for dense solves");
  c_spec->add_option("--workers", workers);
  c_spec->add_option("--out", out, "single: file prefix; sweep: output file");
  c_spec->add_option("--format", format);

  auto* c_cayley = app.add_subcommand("cayley", "orbit structure of the degenerate level");
  c_cayley->add_option("--p", p, "single prime");
  c_cayley->add_option("--pmax", pmax, "or every prime 5..pmax");
  c_cayley->add_flag("--signs", signs, "include double sign changes");
  c_cayley->add_flag("--verify", verify, "check predictions against BFS orbits");
  c_cayley->add_option("--empirical-cap", empirical_cap, "BFS verification cap (default 199)");
  c_cayley->add_option("--out", out);
  c_cayley->add_option("--format", format);

  auto* c_fricke = app.add_subcommand("fricke-selftest", "random checks of the trace identity");
  c_fricke->add_option("--pairs", pairs);
  c_fricke->add_option("--pmax", pmax);
  c_fricke->add_option("--seed", seed);

  auto* c_self = app.add_subcommand("selftest", "quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (c_count->parsed()) return cmd_count(p, k, a);
    if (c_comp->parsed()) return cmd_components(p, k, a, gens, exclude_origin, out, format, edges);
    if (c_table->parsed()) return cmd_components_table(pmin, pmax, a, gens, workers, out, format);
    if (c_l2->parsed()) return cmd_lambda2_sweep(pmin, pmax, a, tol, workers, out, format);
    if (c_spec->parsed()) {
      if (dense_cap > 12000) {
        throw std::invalid_argument("spectrum: --dense-cap is limited to 12000");
      }
      if (p > 0) return cmd_spectrum_single(p, a, nbins, dense_cap, out);
      if (pmax > 0) return cmd_spectrum_sweep(pmin, pmax, a, dense_cap, workers, out, format);
      throw std::invalid_argument("spectrum: need --p or --pmin/--pmax");
    }
    if (c_cayley->parsed()) {
      if (p == 0 && pmax == 0) throw std::invalid_argument("cayley: need --p or --pmax");
      return cmd_cayley(p, pmax, signs, verify, empirical_cap, out, format);
    }
    if (c_fricke->parsed()) return cmd_fricke_selftest(pairs, pmax ? pmax : 97, seed);
    if (c_self->parsed()) return cmd_selftest();
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitAssertion;
  }
}
