#include "kmboot/bands.hpp"

#include <algorithm>
#include <cmath>

namespace kmboot {

namespace {

void check_band_args(double alpha, const ResamplePlan& plan) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must be in (0, 1)");
  if (plan.replicate_count == 0)
    throw std::invalid_argument("replicate count must be >= 1");
}

}  // namespace

double lorenz_sup_distance(const LorenzCurve& a, const LorenzCurve& b) {
  std::vector<double> nodes = a.curve.xs();
  nodes.insert(nodes.end(), b.curve.xs().begin(), b.curve.xs().end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  double sup = 0.0;
  for (double p : nodes) sup = std::max(sup, std::fabs(a(p) - b(p)));
  return sup;
}

ConfidenceBand mrl_band(const ObservedSample& sample, double t1, double t2,
                        double alpha, const ResamplePlan& plan, unsigned threads) {
  if (!(t1 >= 0.0) || !(t1 <= t2))
    throw std::invalid_argument("mrl_band: need 0 <= t1 <= t2");
  check_band_args(alpha, plan);

  const SurvivalFit fit = km_fit(sample);
  if (!(fit.km(t2) > 0.0))
    throw std::invalid_argument("t2 exceeds estimator support");
  const MrlCurve center(fit);
  const double root_n = std::sqrt(static_cast<double>(fit.n));

  const BootstrapDistribution dist = conditional_distribution(
      StatisticKind::mrl_sup, plan, threads,
      [&](std::size_t i) -> std::optional<double> {
        const SurvivalFit boot = bootstrap_fit(sample, plan, i);
        if (!(boot.km(t2) > 0.0)) return std::nullopt;  // support exceeded
        return root_n * mrl_sup_distance(center, MrlCurve(boot), t1, t2);
      });
  if (dist.statistics.empty())
    throw DegenerateBootstrapError("bootstrap degenerate: all replicates dropped");

  ConfidenceBand band;
  band.kind = BandKind::mrl;
  band.alpha = alpha;
  band.half_width = quantile(dist, alpha) / root_n;
  band.replicates_used = dist.statistics.size();
  band.replicates_dropped = dist.replicates_dropped;
  band.tail_mass_redistributed = tail_defect(fit) > 0.0;

  band.grid.push_back(t1);
  for (double b : fit.km.breakpoints())
    if (b > t1 && b < t2) band.grid.push_back(b);
  if (fit.largest_time > t1 && fit.largest_time < t2)
    band.grid.push_back(fit.largest_time);
  if (t2 > t1) band.grid.push_back(t2);
  std::sort(band.grid.begin(), band.grid.end());
  band.grid.erase(std::unique(band.grid.begin(), band.grid.end()), band.grid.end());

  for (double t : band.grid) {
    const double c = center(t);
    band.center.push_back(c);
    double lo = c - band.half_width;
    if (lo < 0.0) {
      lo = 0.0;  // the target is non-negative
      band.lower_clipped = true;
    }
    band.lower.push_back(lo);
    band.upper.push_back(c + band.half_width);
  }
  return band;
}

ConfidenceBand lorenz_band(const ObservedSample& sample, double alpha,
                           const ResamplePlan& plan, std::size_t p_grid_points,
                           unsigned threads) {
  check_band_args(alpha, plan);
  if (p_grid_points < 2)
    throw std::invalid_argument("lorenz_band: grid needs at least 2 points");

  const SurvivalFit fit = km_fit(sample);
  const LorenzCurve center = lorenz(fit);
  const double root_n = std::sqrt(static_cast<double>(fit.n));

  const BootstrapDistribution dist = conditional_distribution(
      StatisticKind::lorenz_sup, plan, threads,
      [&](std::size_t i) -> std::optional<double> {
        const LorenzCurve boot = lorenz(bootstrap_fit(sample, plan, i));
        return root_n * lorenz_sup_distance(center, boot);
      });

  ConfidenceBand band;
  band.kind = BandKind::lorenz;
  band.alpha = alpha;
  band.half_width = quantile(dist, alpha) / root_n;
  band.replicates_used = dist.statistics.size();
  band.replicates_dropped = dist.replicates_dropped;
  band.tail_mass_redistributed = center.tail_mass_redistributed;

  for (std::size_t k = 0; k < p_grid_points; ++k) {
    const double p = static_cast<double>(k) / static_cast<double>(p_grid_points - 1);
    const double c = center(p);
    band.grid.push_back(p);
    band.center.push_back(c);
    double lo = c - band.half_width;
    if (lo < 0.0) {
      lo = 0.0;
      band.lower_clipped = true;
    }
    band.lower.push_back(lo);
    band.upper.push_back(std::min(1.0, c + band.half_width));
  }
  return band;
}

ConfidenceInterval gini_interval(const ObservedSample& sample, double alpha,
                                 const ResamplePlan& plan, unsigned threads) {
  check_band_args(alpha, plan);

  const SurvivalFit fit = km_fit(sample);
  const double estimate = gini(fit);
  const double root_n = std::sqrt(static_cast<double>(fit.n));

  const BootstrapDistribution dist = conditional_distribution(
      StatisticKind::gini_abs, plan, threads,
      [&](std::size_t i) -> std::optional<double> {
        return root_n * std::fabs(gini(bootstrap_fit(sample, plan, i)) - estimate);
      });

  ConfidenceInterval ci;
  ci.estimate = estimate;
  ci.alpha = alpha;
  ci.half_width = quantile(dist, alpha) / root_n;
  ci.lower = std::max(0.0, estimate - ci.half_width);
  ci.upper = std::min(1.0, estimate + ci.half_width);
  ci.replicates_used = dist.statistics.size();
  ci.replicates_dropped = dist.replicates_dropped;
  ci.tail_mass_redistributed = tail_defect(fit) > 0.0;
  return ci;
}

double suggest_t2(const SurvivalFit& fit, double survival_threshold) {
  if (fit.km.terminal_value() >= survival_threshold) return fit.largest_time;
  double best = 0.0;
  for (std::size_t k = 0; k < fit.km.jump_count(); ++k)
    if (fit.km.values()[k] >= survival_threshold) best = fit.km.breakpoints()[k];
  return best;
}

}  // namespace kmboot
