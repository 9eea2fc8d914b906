#pragma once

#include "kmboot/estimators.hpp"
#include "kmboot/step_function.hpp"

namespace kmboot {

// Mean residual lifetime of a fitted survival curve:
// t -> (integral of S over [t, T]) / S(t), defined while S(t) > 0.
// Integrals stop at the largest observation.
class MrlCurve {
 public:
  explicit MrlCurve(const SurvivalFit& fit);

  double operator()(double t) const;
  double left_limit(double t) const;  // t > 0

  // Right end of the domain: first time the survival estimate hits zero,
  // or +inf when it never does.
  double t_max() const;
  double largest_time() const { return t_hat_; }
  const StepFunction& survival() const { return km_; }

 private:
  double tail_area(double t) const;

  StepFunction km_;
  PiecewiseLinear cumulative_;
  double total_ = 0.0;
  double t_hat_ = 0.0;
};

double mrl(const SurvivalFit& fit, double t);

// Product-limit mean. When the largest observation is censored, the
// remaining survival mass is treated as an atom there, which is exactly the
// integral of the survival curve up to the largest observation.
double mean(const SurvivalFit& fit);

// Normalized cumulative-share curve of the fitted distribution, exact
// piecewise linear in the cumulative probability p.
struct LorenzCurve {
  double mean = 0.0;
  PiecewiseLinear curve;
  // True when the largest observation was censored and its residual mass was
  // redistributed as an atom so that the curve reaches 1 at p = 1.
  bool tail_mass_redistributed = false;

  double operator()(double p) const { return curve(p); }
};

LorenzCurve lorenz(const SurvivalFit& fit);

// 1 - 2 * integral of the Lorenz curve, in [0, 1].
double gini(const SurvivalFit& fit);

}  // namespace kmboot
