#include "kmboot/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "kmboot/covariance.hpp"
#include "kmboot/rng.hpp"

namespace kmboot {

ObservedSample resample(const ObservedSample& sample, const ResamplePlan& plan,
                        std::size_t replicate_index) {
  if (replicate_index >= plan.replicate_count)
    throw std::invalid_argument("resample: replicate index out of range");
  validate(sample);
  RandomStream rng(plan.seed, plan.stream_id, replicate_index);
  const std::size_t n = sample.size();
  ObservedSample out;
  out.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.records.push_back(sample.records[rng.below(n)]);
  return out;
}

SurvivalFit bootstrap_fit(const ObservedSample& sample, const ResamplePlan& plan,
                          std::size_t replicate_index) {
  return km_fit(resolve_ties(resample(sample, plan, replicate_index)));
}

double gamma_star(const ObservedSample& sample, const ResamplePlan& plan,
                  std::size_t replicate_index, double u, double v) {
  return gamma_hat(bootstrap_fit(sample, plan, replicate_index), u, v);
}

namespace {

void merge_candidates(std::vector<double>& cand, const MrlCurve& curve, double t1,
                      double t2) {
  for (double b : curve.survival().breakpoints())
    if (b > t1 && b <= t2) cand.push_back(b);
  const double t_hat = curve.largest_time();
  if (t_hat > t1 && t_hat <= t2) cand.push_back(t_hat);
}

}  // namespace

double mrl_sup_distance(const MrlCurve& a, const MrlCurve& b, double t1, double t2) {
  std::vector<double> cand;
  merge_candidates(cand, a, t1, t2);
  merge_candidates(cand, b, t1, t2);
  cand.push_back(t2);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  double sup = std::fabs(a(t1) - b(t1));
  for (double t : cand) {
    sup = std::max(sup, std::fabs(a(t) - b(t)));
    if (t > 0.0) sup = std::max(sup, std::fabs(a.left_limit(t) - b.left_limit(t)));
  }
  return sup;
}

double sup_statistic_mrl(const SurvivalFit& original, const SurvivalFit& boot,
                         double t1, double t2) {
  if (!(t1 >= 0.0) || !(t1 <= t2))
    throw std::invalid_argument("sup_statistic_mrl: need 0 <= t1 <= t2");
  if (!(original.km(t2) > 0.0) || !(boot.km(t2) > 0.0))
    throw std::runtime_error("band undefined: estimator support exceeded");
  const MrlCurve ca(original), cb(boot);
  return std::sqrt(static_cast<double>(original.n)) * mrl_sup_distance(ca, cb, t1, t2);
}

double quantile(const BootstrapDistribution& dist, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("quantile: alpha must be in (0, 1)");
  if (dist.statistics.empty())
    throw std::invalid_argument("quantile: empty distribution");
  std::vector<double> sorted = dist.statistics;
  std::sort(sorted.begin(), sorted.end());
  const double B = static_cast<double>(sorted.size());
  // Guard against B * (1 - alpha) landing an ulp above an exact integer.
  std::size_t k = static_cast<std::size_t>(std::ceil(B * (1.0 - alpha) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

unsigned thread_cap() {
  if (const char* env = std::getenv("KMBOOT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min(v, 256L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

unsigned resolve_threads(unsigned requested) {
  const unsigned cap = thread_cap();
  return requested == 0 ? cap : std::min(requested, cap);
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(resolve_threads(threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

BootstrapDistribution conditional_distribution(
    StatisticKind kind, const ResamplePlan& plan, unsigned threads,
    const std::function<std::optional<double>(std::size_t)>& statistic) {
  if (plan.replicate_count == 0)
    throw std::invalid_argument("bootstrap: replicate count must be >= 1");
  std::vector<double> slots(plan.replicate_count,
                            std::numeric_limits<double>::quiet_NaN());
  parallel_for(plan.replicate_count, threads, [&](std::size_t i) {
    if (const auto v = statistic(i)) slots[i] = *v;
  });

  BootstrapDistribution dist;
  dist.kind = kind;
  dist.plan = plan;
  dist.statistics.reserve(plan.replicate_count);
  for (double v : slots) {
    if (std::isnan(v))
      ++dist.replicates_dropped;
    else
      dist.statistics.push_back(v);
  }
  return dist;
}

}  // namespace kmboot
