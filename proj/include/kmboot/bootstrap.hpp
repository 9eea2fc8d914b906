#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kmboot/estimators.hpp"
#include "kmboot/functionals.hpp"

namespace kmboot {

// Identifies a reproducible family of resamples. The same (seed, B,
// stream_id) always yields bit-identical resample index sequences,
// independently of worker scheduling.
struct ResamplePlan {
  std::uint64_t seed = 0;
  std::size_t replicate_count = 1;  // B
  std::uint64_t stream_id = 0;
};

enum class StatisticKind { mrl_sup, lorenz_sup, gini_abs, custom };

struct BootstrapDistribution {
  std::vector<double> statistics;  // surviving replicates, in replicate order
  StatisticKind kind = StatisticKind::custom;
  ResamplePlan plan;
  std::size_t replicates_dropped = 0;  // statistics.size() + dropped == B
};

// n records drawn with replacement from the original pairs; deterministic
// given (plan, replicate_index).
ObservedSample resample(const ObservedSample& sample, const ResamplePlan& plan,
                        std::size_t replicate_index);

// Refit of every estimator on the resample.
SurvivalFit bootstrap_fit(const ObservedSample& sample, const ResamplePlan& plan,
                          std::size_t replicate_index);

// Covariance surface of the refit, same plug-in formula as gamma_hat.
double gamma_star(const ObservedSample& sample, const ResamplePlan& plan,
                  std::size_t replicate_index, double u, double v);

// Exact sup over [t1, t2] of the absolute difference between two
// mean-residual-lifetime curves; the difference is piecewise linear between
// jump points, so evaluating at the jump points and their left limits is
// exact.
double mrl_sup_distance(const MrlCurve& a, const MrlCurve& b, double t1, double t2);

// sqrt(n) * sup |mrl(boot) - mrl(original)| over [t1, t2]. Throws when either
// survival estimate is zero at t2.
double sup_statistic_mrl(const SurvivalFit& original, const SurvivalFit& boot,
                         double t1, double t2);

// Upper empirical quantile: the ceil(B * (1 - alpha))-th order statistic.
double quantile(const BootstrapDistribution& dist, double alpha);

// Replicate parallelism cap: KMBOOT_THREADS when set, hardware concurrency
// otherwise. Results never depend on the cap.
unsigned thread_cap();
unsigned resolve_threads(unsigned requested);

// Runs body(0..count-1) on up to `threads` workers (0 = resolve from the
// environment); rethrows the first body exception after joining.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

// Evaluates one statistic per replicate in parallel and collects the
// non-dropped values in replicate order.
BootstrapDistribution conditional_distribution(
    StatisticKind kind, const ResamplePlan& plan, unsigned threads,
    const std::function<std::optional<double>(std::size_t)>& statistic);

}  // namespace kmboot
