#include "kmboot/covariance.hpp"

#include <algorithm>
#include <stdexcept>

#include "kmboot/functionals.hpp"

namespace kmboot {

StepFunction sigma2_hat(const SurvivalFit& fit) {
  std::vector<double> ts, vs;
  ts.reserve(fit.na.jump_count());
  vs.reserve(fit.na.jump_count());
  double acc = 0.0;
  const double dn = static_cast<double>(fit.n);
  for (std::size_t k = 0; k < fit.na.jump_count(); ++k) {
    const double u = fit.na.breakpoints()[k];
    const double h_left = fit.at_risk.left_limit(u) / dn;
    acc += fit.na.jump(k) / h_left;
    ts.push_back(u);
    vs.push_back(acc);
  }
  return StepFunction(0.0, std::move(ts), std::move(vs));
}

CovarianceSurface::CovarianceSurface(const SurvivalFit& fit)
    : km_(fit.km), sigma2_(sigma2_hat(fit)) {}

double CovarianceSurface::operator()(double u, double v) const {
  // grouped so the result is bitwise symmetric in (u, v)
  return (km_(u) * km_(v)) * sigma2_(std::min(u, v));
}

double gamma_hat(const SurvivalFit& fit, double u, double v) {
  return CovarianceSurface(fit)(u, v);
}

CensoringDiagnostic censoring_diagnostic(const SurvivalFit& fit, double t, int power) {
  if (power != 1 && power != 3)
    throw std::invalid_argument("censoring_diagnostic: power must be 1 or 3");
  if (!(t >= 0.0)) throw std::invalid_argument("censoring_diagnostic: t must be >= 0");
  CensoringDiagnostic out;
  for (std::size_t k = 0; k < fit.km.jump_count(); ++k) {
    const double u = fit.km.breakpoints()[k];
    if (u <= t) continue;
    const double g = fit.censor_km.left_limit(u);
    if (g == 0.0) {
      out.zero_denominator = true;  // condition likely violated
      continue;
    }
    const double denom = power == 1 ? g : g * g * g;
    out.value -= fit.km.jump(k) / denom;
  }
  return out;
}

double mrl_asymptotic_covariance(const SurvivalFit& fit, double r, double s) {
  if (!(fit.km(r) > 0.0) || !(fit.km(s) > 0.0))
    throw std::runtime_error("estimate undefined beyond support of fit");
  const double m = std::max(r, s);
  const double end = fit.largest_time;
  const CovarianceSurface gamma(fit);

  // The surface is constant on cells of the event-time grid, so the cell sum
  // is the exact double integral.
  std::vector<double> grid{m};
  for (double b : fit.km.breakpoints())
    if (b > m && b < end) grid.push_back(b);
  if (end > m) grid.push_back(end);

  double dbl = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double du = grid[i + 1] - grid[i];
    for (std::size_t j = 0; j + 1 < grid.size(); ++j)
      dbl += gamma(grid[i], grid[j]) * du * (grid[j + 1] - grid[j]);
  }

  const double g_r = mrl(fit, r);
  const double g_s = mrl(fit, s);
  return dbl / (fit.km(r) * fit.km(s)) - gamma.sigma2()(m) * g_r * g_s;
}

}  // namespace kmboot
