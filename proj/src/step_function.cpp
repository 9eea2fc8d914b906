#include "kmboot/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kmboot {

PiecewiseLinear::PiecewiseLinear() : xs_{0.0}, ys_{0.0} {}

PiecewiseLinear::PiecewiseLinear(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.empty() || xs_.size() != ys_.size())
    throw std::invalid_argument("PiecewiseLinear: node vectors empty or mismatched");
  for (std::size_t k = 0; k + 1 < xs_.size(); ++k)
    if (!(xs_[k] < xs_[k + 1]))
      throw std::invalid_argument("PiecewiseLinear: nodes not strictly increasing");
  for (double x : xs_)
    if (!std::isfinite(x)) throw std::invalid_argument("PiecewiseLinear: non-finite node");
}

double PiecewiseLinear::operator()(double x) const {
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs_.begin()) - 1;
  const double w = (x - xs_[j]) / (xs_[j + 1] - xs_[j]);
  return ys_[j] + w * (ys_[j + 1] - ys_[j]);
}

double PiecewiseLinear::integral(double lo, double hi) const {
  if (!(lo <= hi)) throw std::invalid_argument("PiecewiseLinear::integral: lo > hi");
  double acc = 0.0;
  double x = lo;
  double fx = (*this)(lo);
  for (std::size_t k = 0; k < xs_.size(); ++k) {
    if (xs_[k] <= lo) continue;
    if (xs_[k] >= hi) break;
    acc += (xs_[k] - x) * 0.5 * (fx + ys_[k]);
    x = xs_[k];
    fx = ys_[k];
  }
  acc += (hi - x) * 0.5 * (fx + (*this)(hi));
  return acc;
}

StepFunction::StepFunction(double constant) : initial_(constant) {}

StepFunction::StepFunction(double initial_value, std::vector<double> breakpoints,
                           std::vector<double> values)
    : initial_(initial_value),
      breakpoints_(std::move(breakpoints)),
      values_(std::move(values)) {
  if (breakpoints_.size() != values_.size())
    throw std::invalid_argument("StepFunction: breakpoints/values size mismatch");
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (!std::isfinite(breakpoints_[k]) || breakpoints_[k] < 0.0)
      throw std::invalid_argument("StepFunction: breakpoints must be finite and >= 0");
    if (k > 0 && !(breakpoints_[k - 1] < breakpoints_[k]))
      throw std::invalid_argument("StepFunction: breakpoints not strictly increasing");
  }
}

double StepFunction::operator()(double t) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  if (it == breakpoints_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepFunction::left_limit(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("StepFunction::left_limit: t must be > 0");
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
  if (it == breakpoints_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepFunction::value_before(std::size_t k) const {
  return k == 0 ? initial_ : values_[k - 1];
}

double StepFunction::jump(std::size_t k) const { return values_[k] - value_before(k); }

double StepFunction::terminal_value() const {
  return values_.empty() ? initial_ : values_.back();
}

double StepFunction::largest_breakpoint() const {
  return breakpoints_.empty() ? 0.0 : breakpoints_.back();
}

double stieltjes_integral(const StepFunction& a, const StepFunction& b, double s) {
  return stieltjes_integral([&a](double t) { return a(t); }, b, s);
}

double lebesgue_integral(const StepFunction& f, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("lebesgue_integral: lo > hi");
  const auto& bp = f.breakpoints();
  double acc = 0.0;
  double x = lo;
  double v = f(lo);
  auto it = std::upper_bound(bp.begin(), bp.end(), lo);
  for (; it != bp.end() && *it < hi; ++it) {
    const std::size_t k = static_cast<std::size_t>(it - bp.begin());
    acc += v * (*it - x);
    x = *it;
    v = f.values()[k];
  }
  acc += v * (hi - x);
  return acc;
}

PiecewiseLinear antiderivative(const StepFunction& f, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("antiderivative: lo > hi");
  std::vector<double> xs{lo}, ys{0.0};
  if (hi > lo) {
    const auto& bp = f.breakpoints();
    double x = lo;
    double v = f(lo);
    double acc = 0.0;
    auto it = std::upper_bound(bp.begin(), bp.end(), lo);
    for (; it != bp.end() && *it < hi; ++it) {
      const std::size_t k = static_cast<std::size_t>(it - bp.begin());
      acc += v * (*it - x);
      xs.push_back(*it);
      ys.push_back(acc);
      x = *it;
      v = f.values()[k];
    }
    acc += v * (hi - x);
    xs.push_back(hi);
    ys.push_back(acc);
  }
  return PiecewiseLinear(std::move(xs), std::move(ys));
}

double generalized_inverse(const StepFunction& F, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("generalized_inverse: p must be > 0");
  if (F.initial_value() >= p) return 0.0;
  const auto& vals = F.values();
  for (std::size_t k = 0; k < vals.size(); ++k)
    if (vals[k] >= p) return F.breakpoints()[k];
  throw std::runtime_error("generalized_inverse: mass deficit");
}

}  // namespace kmboot
