#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperanf/engine.hpp"

// Statistics derived from a neighbourhood function: distance cdf and
// density, average distance, variance, spid, effective diameter (point,
// interpolated and interval forms), precision planning, and aggregation of
// repeated runs.

namespace hyperanf {

struct DistanceCdf {
  std::vector<double> values;  // H(0..T), non-decreasing, H(T) = 1
};

struct DistanceDistribution {
  std::vector<double> density;  // h(t) = H(t) - H(t-1)
  double mean = 0.0;            // average distance
  double variance = 0.0;
  double spid = 0.0;  // variance / mean; 0 when mean = 0
};

// H(t) = N(t) / N(T). Input must be non-empty, non-decreasing, last > 0.
inline DistanceCdf cdf_from_nf(std::span<const double> nf) {
  if (nf.empty()) throw std::invalid_argument("cdf: empty neighbourhood function");
  const double last = nf.back();
  if (!(last > 0.0))
    throw std::invalid_argument("cdf: neighbourhood function is all zero");
  DistanceCdf cdf;
  cdf.values.reserve(nf.size());
  for (double v : nf) cdf.values.push_back(v / last);
  return cdf;
}

inline DistanceDistribution distribution_from_cdf(const DistanceCdf& cdf) {
  DistanceDistribution dist;
  dist.density.reserve(cdf.values.size());
  double prev = 0.0;
  double mean = 0.0, second = 0.0;
  for (std::size_t t = 0; t < cdf.values.size(); ++t) {
    const double h = cdf.values[t] - prev;
    prev = cdf.values[t];
    dist.density.push_back(h);
    mean += static_cast<double>(t) * h;
    second += static_cast<double>(t) * static_cast<double>(t) * h;
  }
  dist.mean = mean;
  dist.variance = std::max(0.0, second - mean * mean);
  dist.spid = mean > 0.0 ? dist.variance / mean : 0.0;
  return dist;
}

// Smallest t with H(t) >= alpha; the interpolated variant solves for the
// crossing on the linear interpolation of N(t). Ties (flat segment at the
// crossing) resolve to t-1.
inline double effective_diameter(std::span<const double> nf, double alpha = 0.9,
                                 bool interpolated = false) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("effective diameter: alpha must be in (0, 1]");
  if (nf.empty()) throw std::invalid_argument("effective diameter: empty input");
  const double target = alpha * nf.back();
  std::size_t t = 0;
  while (t + 1 < nf.size() && nf[t] < target) ++t;
  if (!interpolated || t == 0) return static_cast<double>(t);
  const double rise = nf[t] - nf[t - 1];
  if (rise <= 0.0) return static_cast<double>(t - 1);
  return static_cast<double>(t - 1) + (target - nf[t - 1]) / rise;
}

struct DiameterInterval {
  std::optional<std::uint64_t> lo, hi;
  double confidence = 1.0;  // 1 - 3 delta
  std::string note;
};

// Interval form: lo is the largest t with N(t)/M <= alpha(1-2eps), hi the
// smallest t with N(t)/M >= alpha(1+2eps). When alpha(1+2eps) > 1 no upper
// bound exists (the cdf is flat near 1) and hi is reported undefined.
inline DiameterInterval diameter_interval(std::span<const double> nf,
                                          double alpha, double epsilon,
                                          double delta) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("diameter interval: alpha must be in (0, 1]");
  if (epsilon < 0.0 || delta < 0.0 || delta >= 1.0)
    throw std::invalid_argument("diameter interval: bad epsilon/delta");
  if (nf.empty()) throw std::invalid_argument("diameter interval: empty input");
  DiameterInterval out;
  out.confidence = 1.0 - 3.0 * delta;
  const double max = nf.back();
  const double lo_threshold = alpha * (1.0 - 2.0 * epsilon);
  const double hi_threshold = alpha * (1.0 + 2.0 * epsilon);
  for (std::size_t t = 0; t < nf.size(); ++t)
    if (nf[t] / max <= lo_threshold) out.lo = t;
  if (hi_threshold > 1.0) {
    out.note =
        "upper bound undefined: alpha(1+2eps) exceeds 1, no point of the cdf "
        "can reach it";
    return out;
  }
  for (std::size_t t = 0; t < nf.size(); ++t) {
    if (nf[t] / max >= hi_threshold) {
      out.hi = t;
      break;
    }
  }
  return out;
}

// --- Precision planning ------------------------------------------------------

constexpr double kRsdConstant = 1.06;  // relative standard deviation <= 1.06/sqrt(m)

struct PrecisionSpec {
  std::uint64_t m = 0;
  double eta = 0.0;  // guaranteed relative standard deviation bound
  std::optional<double> epsilon, delta;

  double chebyshev_confidence(double eps) const {
    return std::max(0.0, 1.0 - eta * eta / (eps * eps));
  }
  double vp_confidence(double eps) const {
    return std::max(0.0, 1.0 - 4.0 * eta * eta / (9.0 * eps * eps));
  }
  double ksigma_error(double k) const { return k * eta; }
  static double ksigma_confidence(double k) { return 1.0 - 4.0 / (9.0 * k * k); }

  // Register memory for an n-node run: m registers of ceil(log2 log2 n)
  // bits per node.
  double memory_bits(std::uint64_t n) const {
    const double reg_bits = std::ceil(std::log2(std::log2(static_cast<double>(n))));
    return static_cast<double>(m) * reg_bits * static_cast<double>(n);
  }
  double memory_gib(std::uint64_t n) const {
    return memory_bits(n) / 8.0 / (1024.0 * 1024.0 * 1024.0);
  }
};

namespace detail {
inline std::uint64_t next_power_of_two(double x) {
  std::uint64_t m = 16;
  while (static_cast<double>(m) < x) m <<= 1;
  return m;
}
}  // namespace detail

inline PrecisionSpec precision_from_m(std::uint64_t m) {
  if (m < 16 || (m & (m - 1)) != 0)
    throw std::invalid_argument("precision: m must be a power of two >= 16");
  PrecisionSpec spec;
  spec.m = m;
  spec.eta = kRsdConstant / std::sqrt(static_cast<double>(m));
  return spec;
}

inline PrecisionSpec precision_from_eta(double eta) {
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("precision: eta must be in (0, 1)");
  PrecisionSpec spec = precision_from_m(
      detail::next_power_of_two(1.12 / (eta * eta)));
  return spec;
}

// Smallest power-of-two m whose Chebyshev bound reaches error epsilon with
// failure probability delta.
inline PrecisionSpec precision_from_error(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("precision: epsilon and delta must be in (0, 1)");
  const double eta = epsilon * std::sqrt(delta);
  if (eta >= 1.0) throw std::invalid_argument("precision: infeasible inputs");
  PrecisionSpec spec = precision_from_eta(eta);
  spec.epsilon = epsilon;
  spec.delta = delta;
  return spec;
}

// --- Multi-run aggregation ---------------------------------------------------

struct RunSummary {
  std::uint64_t seed = 0;
  double avg_distance = 0.0;
  double spid = 0.0;
  double ied = 0.0;  // interpolated effective diameter
};

struct MultiRunReport {
  std::uint64_t n = 0;
  unsigned m = 0;
  double alpha = 0.9;
  std::vector<RunSummary> per_run;
  RunSummary mean, stddev;            // seed fields unused
  std::vector<double> mean_nf;        // pointwise mean, short runs padded
};

// Derived statistics per run with empirical mean and sample standard
// deviation across runs. All runs must share the graph and m.
inline MultiRunReport aggregate_runs(const std::vector<NfEstimate>& runs,
                                     double alpha = 0.9) {
  if (runs.size() < 2)
    throw std::invalid_argument("aggregate: need at least two runs");
  for (const auto& run : runs)
    if (run.n != runs.front().n || run.m != runs.front().m)
      throw std::invalid_argument("aggregate: runs disagree on graph or m");
  MultiRunReport report;
  report.n = runs.front().n;
  report.m = runs.front().m;
  report.alpha = alpha;

  std::size_t longest = 0;
  for (const auto& run : runs) longest = std::max(longest, run.values.size());
  report.mean_nf.assign(longest, 0.0);

  for (const auto& run : runs) {
    const auto dist = distribution_from_cdf(cdf_from_nf(run.values));
    RunSummary s;
    s.seed = run.seed;
    s.avg_distance = dist.mean;
    s.spid = dist.spid;
    s.ied = effective_diameter(run.values, alpha, true);
    report.per_run.push_back(s);
    for (std::size_t t = 0; t < longest; ++t)
      report.mean_nf[t] +=
          t < run.values.size() ? run.values[t] : run.values.back();
  }
  const double r = static_cast<double>(runs.size());
  for (double& v : report.mean_nf) v /= r;

  auto moments = [&](auto field) {
    double mean = 0.0;
    for (const auto& s : report.per_run) mean += field(s);
    mean /= r;
    double ss = 0.0;
    for (const auto& s : report.per_run) {
      const double d = field(s) - mean;
      ss += d * d;
    }
    return std::pair<double, double>(mean, std::sqrt(ss / (r - 1.0)));
  };
  auto [ad_mean, ad_sd] = moments([](const RunSummary& s) { return s.avg_distance; });
  auto [spid_mean, spid_sd] = moments([](const RunSummary& s) { return s.spid; });
  auto [ied_mean, ied_sd] = moments([](const RunSummary& s) { return s.ied; });
  report.mean.avg_distance = ad_mean;
  report.mean.spid = spid_mean;
  report.mean.ied = ied_mean;
  report.stddev.avg_distance = ad_sd;
  report.stddev.spid = spid_sd;
  report.stddev.ied = ied_sd;
  return report;
}

}  // namespace hyperanf
