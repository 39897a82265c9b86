#pragma once

// Controller scaling benchmark: measures the admission decision
// (description stored + all admitting IRCs computed) for a probe offering
// against a registry holding a growing number of RRCs. The probe is
// deregistered between repetitions, so the RRC set never changes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "choreo/matchmaker.hpp"
#include "choreo/registry.hpp"

namespace choreo {

struct BenchmarkSpec {
  std::vector<int> rrc_counts;  // each a multiple of the template set size
  int repetitions = 20;
  std::string output_path;  // empty = no CSV written
};

struct BenchPoint {
  int rrc_count = 0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
};

// Selection-rule templates cycled over the benchmark RRCs: mixed equality
// and range comparisons over three synthetic properties, AND/OR depth <= 2.
inline const std::vector<std::string>& bench_osr_templates() {
  static const std::vector<std::string> templates = {
      "room = \"A\"",
      "price <= 10",
      "floor > 2 AND room = \"B\"",
      "room = \"D\" OR price < 5",
      "floor >= 1 AND floor <= 6",
      "room != \"C\" AND (price > 2 OR floor = 3)",
      "room = \"A\" OR room = \"B\" OR price >= 7",
  };
  return templates;
}

inline Recipe bench_recipe() {
  Recipe r;
  r.id = "bench-flow";
  r.ingredients.push_back({"source",
                           "bench:Node",
                           {{"cfg", "bench:Value"}},
                           {{"reading", "bench:Value"}}});
  r.ingredients.push_back({"target",
                           "bench:Node",
                           {{"reading", "bench:Value"}},
                           {{"status", "bench:Value"}}});
  r.interactions.push_back({"source", "reading", "target", "reading"});
  return r;
}

// Probe satisfying 5 of the 7 rule templates.
inline OfferingDescription bench_probe() {
  json doc = {{"localId", "bench-probe"},
              {"category", "bench:Node"},
              {"endpoints", json::array()},
              {"inputData", {{{"name", "reading"}, {"valueType", "bench:Value"}}}},
              {"outputData", {{{"name", "reading"}, {"valueType", "bench:Value"}}}},
              {"room", "A"},
              {"price", 6},
              {"floor", 3}};
  return offering_from_json(doc);
}

// Registry with `count` RRCs over the benchmark recipe, rule templates
// cycled per RRC across both ingredients.
inline Registry make_bench_registry(int count, const TypeGraph& graph) {
  Registry reg;
  reg.put_recipe(bench_recipe(), graph);
  const auto& templates = bench_osr_templates();
  for (int i = 0; i < count; ++i) {
    Registry::IrcSpec spec;
    spec.osr = parse_osr(templates[i % templates.size()]);
    reg.create_rrc("bench-flow", {{"source", spec}, {"target", spec}});
  }
  return reg;
}

inline double median_of(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  std::size_t n = samples.size();
  if (n == 0) return 0.0;
  return n % 2 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2.0;
}

inline double percentile_of(std::vector<double> samples, double pct) {
  std::sort(samples.begin(), samples.end());
  if (samples.empty()) return 0.0;
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(pct / 100.0 * static_cast<double>(samples.size())));
  if (rank == 0) rank = 1;
  return samples[rank - 1];
}

inline void write_bench_csv(const std::string& path,
                            const std::vector<BenchPoint>& points) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Config, "cannot write benchmark CSV: " + path);
  out << "rrcCount,medianMs,p95Ms\n";
  for (const BenchPoint& p : points)
    out << p.rrc_count << "," << p.median_ms << "," << p.p95_ms << "\n";
}

inline std::vector<BenchPoint> run_benchmark(const BenchmarkSpec& spec) {
  TypeGraph graph;  // matching degrades to URI equality, as in the fixtures
  std::vector<BenchPoint> points;
  for (int count : spec.rrc_counts) {
    Registry reg = make_bench_registry(count, graph);
    std::vector<double> samples;
    samples.reserve(spec.repetitions);
    volatile std::size_t sink = 0;
    // Warm-up round, unmeasured.
    {
      const OfferingDescription& probe = reg.put_offering(bench_probe());
      sink += find_matching_ircs(probe, reg, graph).size();
      reg.remove_offering(probe.local_id);
    }
    for (int rep = 0; rep < spec.repetitions; ++rep) {
      auto start = std::chrono::steady_clock::now();
      const OfferingDescription& probe = reg.put_offering(bench_probe());
      auto ircs = find_matching_ircs(probe, reg, graph);
      auto stop = std::chrono::steady_clock::now();
      sink += ircs.size();
      reg.remove_offering(probe.local_id);
      samples.push_back(
          std::chrono::duration<double, std::milli>(stop - start).count());
    }
    points.push_back({count, median_of(samples), percentile_of(samples, 95.0)});
  }
  if (!spec.output_path.empty()) write_bench_csv(spec.output_path, points);
  return points;
}

inline std::vector<int> bench_range(int max_count, int step = 7) {
  std::vector<int> counts;
  for (int c = step; c <= max_count; c += step) counts.push_back(c);
  return counts;
}

// ---------------------------------------------------------------------------
// Least-squares polynomial fits (used to check the scaling trend)

struct PolyFit {
  std::vector<double> coefficients;  // highest degree first
  double residual_norm = 0.0;

  double operator()(double x) const {
    double y = 0.0;
    for (double c : coefficients) y = y * x + c;
    return y;
  }
};

// Ordinary least squares via normal equations in long double; adequate for
// degree <= 2 over the benchmark ranges.
inline PolyFit polyfit(const std::vector<double>& xs, const std::vector<double>& ys,
                       int degree) {
  const int n = degree + 1;
  std::vector<std::vector<long double>> ata(n, std::vector<long double>(n, 0.0L));
  std::vector<long double> atb(n, 0.0L);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    std::vector<long double> row(n);
    long double p = 1.0L;
    for (int j = degree; j >= 0; --j) {
      row[j] = p;
      p *= xs[k];
    }
    for (int i = 0; i < n; ++i) {
      atb[i] += row[i] * ys[k];
      for (int j = 0; j < n; ++j) ata[i][j] += row[i] * row[j];
    }
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs((double)ata[r][col]) > std::fabs((double)ata[pivot][col]))
        pivot = r;
    std::swap(ata[col], ata[pivot]);
    std::swap(atb[col], atb[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == col || ata[col][col] == 0.0L) continue;
      long double f = ata[r][col] / ata[col][col];
      for (int c = col; c < n; ++c) ata[r][c] -= f * ata[col][c];
      atb[r] -= f * atb[col];
    }
  }
  PolyFit fit;
  fit.coefficients.resize(n);
  for (int i = 0; i < n; ++i)
    fit.coefficients[i] =
        ata[i][i] == 0.0L ? 0.0 : static_cast<double>(atb[i] / ata[i][i]);
  long double ss = 0.0L;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    long double d = ys[k] - fit(xs[k]);
    ss += d * d;
  }
  fit.residual_norm = std::sqrt(static_cast<double>(ss));
  return fit;
}

// Quadratic fit constrained to a nonnegative leading coefficient: falls back
// to the best linear fit when the unconstrained optimum curves downward.
inline PolyFit polyfit_quadratic_nonneg(const std::vector<double>& xs,
                                        const std::vector<double>& ys) {
  PolyFit quad = polyfit(xs, ys, 2);
  if (quad.coefficients[0] >= 0.0) return quad;
  PolyFit lin = polyfit(xs, ys, 1);
  lin.coefficients.insert(lin.coefficients.begin(), 0.0);
  return lin;
}

}  // namespace choreo
