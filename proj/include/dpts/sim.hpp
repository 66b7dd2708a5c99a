// Copyright 2026 The dpts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Monte-Carlo harness: draws datasets from the fixed-design Gaussian model
// y_i = alpha + beta x_i + e_i, runs configured estimators and confidence
// intervals over many trials, and aggregates error quantiles, variances and
// coverage.
//
// Reproducibility contract: every trial consumes RNG substreams derived
// deterministically from (seed, trial index, lane) — lane 0 generates the
// dataset, lane 2j+1 drives estimator j's point estimate and lane 2j+2 its
// confidence interval. Reports are therefore bit-identical across reruns,
// trial execution orders and thread counts.

#ifndef DPTS_SIM_HPP_
#define DPTS_SIM_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dpts/core.hpp"
#include "dpts/estimators.hpp"
#include "dpts/intervals.hpp"
#include "dpts/rng.hpp"

namespace dpts {

enum class XDesign { equally_spaced, two_point, custom };

inline const char* x_design_name(XDesign d) {
  switch (d) {
    case XDesign::equally_spaced: return "equally_spaced";
    case XDesign::two_point: return "two_point";
    case XDesign::custom: return "custom";
  }
  return "?";
}

// One estimator (plus optional confidence interval) to run each trial.
struct EstimatorSpec {
  std::string label;
  Estimator estimator = Estimator::theil_sen;
  bool with_ci = false;  // DP variants only
  double eps = 0.0;
  double range = 0.0;
  double theta = 0.0;
  double p = 0.1;
  int k = 1;
};

struct SimConfig {
  std::size_t n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double sigma_e = 1.0;
  XDesign design = XDesign::equally_spaced;
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::vector<double> x_custom;
  long trials = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<EstimatorSpec> estimators;

  // The fixed predictor values of this design.
  std::vector<double> x_values() const {
    std::vector<double> x;
    switch (design) {
      case XDesign::equally_spaced: {
        if (n < 2) throw std::invalid_argument("sim: n must be >= 2");
        x.resize(n);
        for (std::size_t i = 0; i < n; ++i)
          x[i] = x_lo + (x_hi - x_lo) * static_cast<double>(i) /
                            static_cast<double>(n - 1);
        break;
      }
      case XDesign::two_point: {
        if (n < 2) throw std::invalid_argument("sim: n must be >= 2");
        x.assign(n / 2, x_lo);
        x.resize(n, x_hi);
        break;
      }
      case XDesign::custom:
        x = x_custom;
        if (x.size() != n)
          throw std::invalid_argument("sim: custom design size != n");
        break;
    }
    bool spread = false;
    for (double v : x) spread = spread || v != x.front();
    if (!spread) throw std::invalid_argument("sim: x values are all equal");
    return x;
  }

  // Population variance of the fixed x design (the x's are constants in the
  // model, so no sample correction).
  double sigma_x2() const {
    const std::vector<double> x = x_values();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    return var / static_cast<double>(x.size());
  }

  void validate() const {
    if (trials < 1) throw std::invalid_argument("sim: trials must be >= 1");
    if (threads < 1) throw std::invalid_argument("sim: threads must be >= 1");
    if (!(sigma_e >= 0.0) || !std::isfinite(sigma_e))
      throw std::invalid_argument("sim: sigma_e must be finite and >= 0");
    if (estimators.empty())
      throw std::invalid_argument("sim: no estimators configured");
    x_values();
  }
};

// Draws one dataset: fixed x per design, e_i = sigma_e * Box-Muller normal.
inline Dataset generate_dataset(const SimConfig& config, Rng& rng) {
  const std::vector<double> x = config.x_values();
  Dataset data;
  data.reserve(x.size());
  for (double xi : x) {
    const double e = config.sigma_e * rng.normal();
    data.push_back({xi, config.alpha + config.beta * xi + e});
  }
  return data;
}

// Per-estimator aggregate over all trials. Per-trial records are retained so
// quantiles and exceedance counts can be recomputed exactly.
struct EstimatorReport {
  EstimatorSpec spec;
  long trials = 0;
  long failures = 0;      // estimator threw (counted, not propagated)
  long ci_failures = 0;
  std::vector<double> estimates;   // successful trials, in trial order
  std::vector<double> abs_errors;  // |beta_hat - beta|, same order
  std::vector<double> ci_lower, ci_upper;  // successful CI trials
  long ci_covered = 0;
  double wall_seconds = 0.0;  // in-memory only; never serialized

  double coverage() const {
    const long runs = static_cast<long>(ci_lower.size());
    return runs == 0 ? 0.0
                     : static_cast<double>(ci_covered) /
                           static_cast<double>(runs);
  }

  double mean_ci_width() const {
    if (ci_lower.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < ci_lower.size(); ++i)
      acc += ci_upper[i] - ci_lower[i];
    return acc / static_cast<double>(ci_lower.size());
  }

  // Sample variance of sqrt(n) * (beta_hat - beta).
  double variance_sqrt_n_error(std::size_t n, double beta) const {
    if (estimates.size() < 2) return 0.0;
    const double scale = std::sqrt(static_cast<double>(n));
    double mean = 0.0;
    for (double est : estimates) mean += scale * (est - beta);
    mean /= static_cast<double>(estimates.size());
    double acc = 0.0;
    for (double est : estimates) {
      const double d = scale * (est - beta) - mean;
      acc += d * d;
    }
    return acc / static_cast<double>(estimates.size() - 1);
  }
};

struct SimReport {
  SimConfig config;
  double sigma_x2 = 0.0;
  std::vector<EstimatorReport> estimators;
};

// Empirical (1-p) quantile of the absolute errors, lower-quantile
// convention: sorted[ceil((1-p) * T) - 1], so p = 1 returns the minimum and
// p -> 0 the maximum.
inline double empirical_convergence(std::vector<double> abs_errors, double p) {
  if (abs_errors.empty())
    throw std::invalid_argument("empirical_convergence: no trials");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("empirical_convergence: p must be in [0, 1]");
  std::sort(abs_errors.begin(), abs_errors.end());
  const double target = std::ceil((1.0 - p) * static_cast<double>(
                                                  abs_errors.size()));
  const std::size_t idx = target < 1.0 ? 0 : static_cast<std::size_t>(target) - 1;
  return abs_errors[std::min(idx, abs_errors.size() - 1)];
}

inline double empirical_convergence(const EstimatorReport& report, double p) {
  return empirical_convergence(report.abs_errors, p);
}

namespace detail {

struct TrialRecord {
  bool ok = false;
  double estimate = 0.0;
  bool ci_run = false;
  bool ci_ok = false;
  double ci_lower = 0.0, ci_upper = 0.0;
};

inline CiVariant ci_variant_for(const EstimatorSpec& spec) {
  if (spec.estimator == Estimator::dp_theil_sen) return CiVariant::theil_sen;
  return spec.k <= 1 ? CiVariant::half : CiVariant::k_half;
}

inline TrialRecord run_one(const SimConfig& config, const EstimatorSpec& spec,
                           const Dataset& data, long trial, std::size_t j) {
  const std::uint64_t base = static_cast<std::uint64_t>(trial) * 64;
  TrialRecord rec;
  try {
    Rng rng = Rng::substream(config.seed, base + 1 + 2 * j);
    FitResult fit;
    switch (spec.estimator) {
      case Estimator::ols: fit = ols_fit(data); break;
      case Estimator::theil_sen: fit = theil_sen(data); break;
      case Estimator::theil_sen_half: fit = theil_sen_half(data); break;
      case Estimator::dp_theil_sen:
        fit = dp_theil_sen(data, spec.eps, spec.range, spec.theta, rng);
        break;
      case Estimator::dp_theil_sen_k_half:
        fit = dp_theil_sen_k_half(data, spec.eps, spec.k, spec.range,
                                  spec.theta, rng);
        break;
    }
    rec.ok = true;
    rec.estimate = fit.beta;
  } catch (const std::exception&) {
    rec.ok = false;
  }
  if (spec.with_ci) {
    rec.ci_run = true;
    try {
      Rng rng = Rng::substream(config.seed, base + 2 + 2 * j);
      const ConfidenceInterval ci =
          dp_theil_sen_ci(data, spec.eps, spec.p, spec.range, spec.theta,
                          ci_variant_for(spec), spec.k, rng);
      rec.ci_ok = true;
      rec.ci_lower = ci.lower;
      rec.ci_upper = ci.upper;
    } catch (const std::exception&) {
      rec.ci_ok = false;
    }
  }
  return rec;
}

}  // namespace detail

// Runs the full trial grid. Trials are independent and may execute on
// config.threads workers; records land in per-trial slots, so the report is
// identical for any thread count.
inline SimReport run_trials(const SimConfig& config) {
  config.validate();
  const std::size_t specs = config.estimators.size();
  std::vector<std::vector<detail::TrialRecord>> records(
      specs, std::vector<detail::TrialRecord>(
                 static_cast<std::size_t>(config.trials)));

  const auto worker = [&](long first, long last) {
    for (long trial = first; trial < last; ++trial) {
      Rng data_rng = Rng::substream(
          config.seed, static_cast<std::uint64_t>(trial) * 64);
      const Dataset data = generate_dataset(config, data_rng);
      for (std::size_t j = 0; j < specs; ++j)
        records[j][static_cast<std::size_t>(trial)] =
            detail::run_one(config, config.estimators[j], data, trial, j);
    }
  };

  if (config.threads <= 1) {
    worker(0, config.trials);
  } else {
    std::vector<std::thread> pool;
    const long chunk =
        (config.trials + config.threads - 1) / config.threads;
    for (int w = 0; w < config.threads; ++w) {
      const long first = w * chunk;
      const long last = std::min<long>(config.trials, first + chunk);
      if (first >= last) break;
      pool.emplace_back(worker, first, last);
    }
    for (std::thread& t : pool) t.join();
  }

  SimReport report;
  report.config = config;
  report.sigma_x2 = config.sigma_x2();
  report.estimators.resize(specs);
  for (std::size_t j = 0; j < specs; ++j) {
    EstimatorReport& er = report.estimators[j];
    er.spec = config.estimators[j];
    er.trials = config.trials;
    for (const detail::TrialRecord& rec : records[j]) {
      if (rec.ok) {
        er.estimates.push_back(rec.estimate);
        er.abs_errors.push_back(std::fabs(rec.estimate - config.beta));
      } else {
        ++er.failures;
      }
      if (rec.ci_run) {
        if (rec.ci_ok) {
          er.ci_lower.push_back(rec.ci_lower);
          er.ci_upper.push_back(rec.ci_upper);
          if (rec.ci_lower <= config.beta && config.beta <= rec.ci_upper)
            ++er.ci_covered;
        } else {
          ++er.ci_failures;
        }
      }
    }
  }
  return report;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace detail

inline const char* kReportCsvHeader =
    "n,alpha,beta,sigma_e,design,x_lo,x_hi,trials,seed,label,estimator,eps,"
    "range,theta,k,p,metric,value";

// Long-format report rows: one (configuration, metric, value) per line.
// Deliberately excludes wall time so reruns with the same seed are
// byte-identical.
inline void write_report_csv(const SimReport& report, std::ostream& os,
                             bool with_header = true) {
  const SimConfig& c = report.config;
  if (with_header) os << kReportCsvHeader << "\n";
  const auto fd = detail::format_double;
  for (const EstimatorReport& er : report.estimators) {
    const std::string prefix =
        std::to_string(c.n) + "," + fd(c.alpha) + "," + fd(c.beta) + "," +
        fd(c.sigma_e) + "," + x_design_name(c.design) + "," + fd(c.x_lo) +
        "," + fd(c.x_hi) + "," + std::to_string(c.trials) + "," +
        std::to_string(c.seed) + "," + er.spec.label + "," +
        estimator_name(er.spec.estimator) + "," + fd(er.spec.eps) + "," +
        fd(er.spec.range) + "," + fd(er.spec.theta) + "," +
        std::to_string(er.spec.k) + "," + fd(er.spec.p) + ",";
    const auto row = [&](const std::string& metric, const std::string& value) {
      os << prefix << metric << "," << value << "\n";
    };
    row("trials_ok", std::to_string(static_cast<long>(er.estimates.size())));
    row("failures", std::to_string(er.failures));
    if (!er.abs_errors.empty()) {
      row("err_quantile_1mp", fd(empirical_convergence(er, er.spec.p)));
      row("median_abs_err", fd(empirical_convergence(er, 0.5)));
      row("var_sqrt_n_err",
          fd(er.variance_sqrt_n_error(c.n, c.beta)));
    }
    if (er.spec.with_ci) {
      row("ci_ok", std::to_string(static_cast<long>(er.ci_lower.size())));
      row("ci_failures", std::to_string(er.ci_failures));
      if (!er.ci_lower.empty()) {
        row("ci_coverage", fd(er.coverage()));
        row("ci_mean_width", fd(er.mean_ci_width()));
      }
    }
  }
}

// Human-oriented synopsis (may include timings; not part of the stable
// output surface).
inline std::string report_summary(const SimReport& report) {
  std::ostringstream os;
  os << "simulation: n=" << report.config.n << " beta=" << report.config.beta
     << " sigma_e=" << report.config.sigma_e
     << " design=" << x_design_name(report.config.design)
     << " sigma_x2=" << report.sigma_x2 << " trials=" << report.config.trials
     << " seed=" << report.config.seed << "\n";
  for (const EstimatorReport& er : report.estimators) {
    os << "  " << er.spec.label << ": ok=" << er.estimates.size()
       << " failures=" << er.failures;
    if (!er.abs_errors.empty()) {
      os << " err_q(1-p)=" << empirical_convergence(er, er.spec.p)
         << " var_sqrt_n=" << er.variance_sqrt_n_error(report.config.n,
                                                       report.config.beta);
    }
    if (er.spec.with_ci) {
      os << " ci_ok=" << er.ci_lower.size()
         << " ci_failures=" << er.ci_failures
         << " coverage=" << er.coverage()
         << " mean_width=" << er.mean_ci_width();
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace dpts

#endif  // DPTS_SIM_HPP_
