#pragma once

#include "kmboot/estimators.hpp"
#include "kmboot/step_function.hpp"

namespace kmboot {

// Variance function of the cumulative-hazard estimate:
// t -> sum over event jumps u <= t of (hazard jump at u) / H(u-),
// with H(u-) read off the at-risk counts.
StepFunction sigma2_hat(const SurvivalFit& fit);

// Plug-in covariance surface (u, v) -> S(u) * sigma2(u ^ v) * S(v).
class CovarianceSurface {
 public:
  explicit CovarianceSurface(const SurvivalFit& fit);

  double operator()(double u, double v) const;

  const StepFunction& km() const { return km_; }
  const StepFunction& sigma2() const { return sigma2_; }

 private:
  StepFunction km_;
  StepFunction sigma2_;
};

double gamma_hat(const SurvivalFit& fit, double u, double v);

// Plug-in estimate of -integral over (t, end] of dS / G_-^power, a
// diagnostic for the censoring conditions (power 1 and 3). Jumps where the
// censoring estimate's left limit is zero are skipped and flagged rather
// than thrown.
struct CensoringDiagnostic {
  double value = 0.0;
  bool zero_denominator = false;
};

CensoringDiagnostic censoring_diagnostic(const SurvivalFit& fit, double t, int power);

// Plug-in asymptotic covariance of the mean-residual-lifetime process at
// (r, s): double integral of the covariance surface over [r v s, T]^2
// scaled by 1/(S(r)S(s)), minus sigma2(r v s) * mrl(r) * mrl(s). Exact over
// the breakpoint grid. Exposed for studentization experiments.
double mrl_asymptotic_covariance(const SurvivalFit& fit, double r, double s);

}  // namespace kmboot
