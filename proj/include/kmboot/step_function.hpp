#pragma once

#include <cstddef>
#include <vector>

namespace kmboot {

// Continuous piecewise-linear function through the nodes (xs, ys), with
// constant extrapolation outside [xs.front(), xs.back()].
class PiecewiseLinear {
 public:
  PiecewiseLinear();
  PiecewiseLinear(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  // Exact integral over [lo, hi] of the extrapolated function.
  double integral(double lo, double hi) const;

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

// Right-continuous step function on [0, inf): initial_value on
// [0, breakpoints[0]) and values[k] on [breakpoints[k], breakpoints[k+1]).
// Breakpoint times compare bitwise; fitted estimators reuse observed times
// verbatim, so bootstrap ties are exact by construction.
class StepFunction {
 public:
  StepFunction() = default;  // identically zero
  explicit StepFunction(double constant);
  StepFunction(double initial_value, std::vector<double> breakpoints,
               std::vector<double> values);

  double operator()(double t) const;
  // Limit from the left; defined for t > 0 only.
  double left_limit(double t) const;

  double initial_value() const { return initial_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t jump_count() const { return breakpoints_.size(); }

  // Value on the segment just before breakpoint k.
  double value_before(std::size_t k) const;
  double jump(std::size_t k) const;
  // Value on the final segment.
  double terminal_value() const;
  // 0 when the function is constant.
  double largest_breakpoint() const;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  double initial_ = 0.0;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

// Sum of integrand(t) * (jump of b at t) over the discontinuities of b in
// (0, s]. The integrand is evaluated at the jump itself (right-continuous
// value); pass the left-limit transform explicitly where the predictable
// version is meant, e.g.
//   stieltjes_integral([&](double t) { return f.left_limit(t); }, b, s).
template <class F>
double stieltjes_integral(F&& integrand, const StepFunction& b, double s) {
  double acc = 0.0;
  const auto& bp = b.breakpoints();
  for (std::size_t k = 0; k < bp.size(); ++k) {
    if (bp[k] > s) break;
    if (bp[k] > 0.0) acc += integrand(bp[k]) * b.jump(k);
  }
  return acc;
}

double stieltjes_integral(const StepFunction& a, const StepFunction& b, double s);

// Exact du-integral of f over [lo, hi]; requires lo <= hi.
double lebesgue_integral(const StepFunction& f, double lo, double hi);

// t -> integral of f over [lo, t], represented exactly on [lo, hi].
PiecewiseLinear antiderivative(const StepFunction& f, double lo, double hi);

// inf{u >= 0 : F(u) >= p} for a non-decreasing step function F with values
// in [0, 1]; throws "mass deficit" when p exceeds sup F.
double generalized_inverse(const StepFunction& F, double p);

}  // namespace kmboot
