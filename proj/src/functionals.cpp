#include "kmboot/functionals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kmboot {

MrlCurve::MrlCurve(const SurvivalFit& fit)
    : km_(fit.km),
      cumulative_(antiderivative(fit.km, 0.0, fit.largest_time)),
      t_hat_(fit.largest_time) {
  total_ = cumulative_(t_hat_);
}

double MrlCurve::tail_area(double t) const {
  const double tail = total_ - cumulative_(t);  // cumulative_ clamps beyond T
  return tail > 0.0 ? tail : 0.0;
}

double MrlCurve::operator()(double t) const {
  const double s = km_(t);
  if (!(s > 0.0)) throw std::runtime_error("MRL undefined beyond support");
  return tail_area(t) / s;
}

double MrlCurve::left_limit(double t) const {
  const double s = km_.left_limit(t);
  if (!(s > 0.0)) throw std::runtime_error("MRL undefined beyond support");
  return tail_area(t) / s;
}

double MrlCurve::t_max() const {
  if (km_.terminal_value() > 0.0) return std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < km_.jump_count(); ++k)
    if (km_.values()[k] == 0.0) return km_.breakpoints()[k];
  return 0.0;  // unreachable for a valid fit
}

double mrl(const SurvivalFit& fit, double t) { return MrlCurve(fit)(t); }

double mean(const SurvivalFit& fit) {
  return lebesgue_integral(fit.km, 0.0, fit.largest_time);
}

LorenzCurve lorenz(const SurvivalFit& fit) {
  // Atoms of the fitted distribution; a censored tail is folded into an atom
  // at the largest observation so the total mass is 1.
  std::vector<double> times, masses;
  for (std::size_t k = 0; k < fit.km.jump_count(); ++k) {
    times.push_back(fit.km.breakpoints()[k]);
    masses.push_back(-fit.km.jump(k));
  }
  const double defect = tail_defect(fit);
  bool redistributed = false;
  if (defect > 0.0) {
    redistributed = true;
    if (!times.empty() && times.back() == fit.largest_time)
      masses.back() += defect;
    else {
      times.push_back(fit.largest_time);
      masses.push_back(defect);
    }
  }

  std::vector<double> ps{0.0}, ls{0.0};
  double cum_mass = 0.0;
  double cum_value = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    cum_mass += masses[k];
    cum_value += times[k] * masses[k];
    ps.push_back(cum_mass);
    ls.push_back(cum_value);
  }
  const double mu = cum_value;  // positive: all times are positive
  ps.back() = 1.0;              // cumulative mass is 1 up to rounding
  for (double& y : ls) y /= mu;

  LorenzCurve out;
  out.mean = mu;
  out.curve = PiecewiseLinear(std::move(ps), std::move(ls));
  out.tail_mass_redistributed = redistributed;
  return out;
}

double gini(const SurvivalFit& fit) {
  const LorenzCurve L = lorenz(fit);
  return 1.0 - 2.0 * L.curve.integral(0.0, 1.0);
}

}  // namespace kmboot
