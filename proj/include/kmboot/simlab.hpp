#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kmboot/bands.hpp"
#include "kmboot/bootstrap.hpp"
#include "kmboot/estimators.hpp"

namespace kmboot::sim {

// Parametric law for synthetic survival or censoring times.
struct Law {
  enum class Kind { uniform, exponential, weibull, point_mass, none };

  Kind kind = Kind::none;
  double a = 0.0;  // uniform: lower; exponential: rate; weibull: shape; point_mass: atom
  double b = 0.0;  // uniform: upper; weibull: scale

  static Law uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
  static Law exponential(double rate) { return {Kind::exponential, rate, 0.0}; }
  static Law weibull(double shape, double scale) { return {Kind::weibull, shape, scale}; }
  static Law point_mass(double atom) { return {Kind::point_mass, atom, 0.0}; }
  static Law none() { return {Kind::none, 0.0, 0.0}; }
};

void validate(const Law& law, bool is_censoring);

// Survival times drawn from `survival`, censoring times independently from
// `censoring` (Kind::none means no censoring).
struct DataModel {
  Law survival;
  Law censoring;
};

// Closed-form quantities of a law (none where marked otherwise).
double survival(const Law& law, double t);
double density(const Law& law, double t);          // continuous laws only
double law_quantile(const Law& law, double p);
double support_end(const Law& law);                // +inf for exp/weibull
double true_mean(const Law& law);
double true_mrl(const Law& law, double t);
double true_lorenz(const Law& law, double p);
double true_gini(const Law& law);
// Kink points of the true mean-residual-lifetime curve (piecewise linear for
// uniform/exponential/point_mass; empty for smooth laws).
std::vector<double> mrl_kinks(const Law& law);
bool mrl_is_piecewise_linear(const Law& law);

// Adaptive Simpson quadrature, tolerance around 1e-8.
double true_sigma2(const DataModel& model, double t);
double true_gamma(const DataModel& model, double u, double v);
// -integral of dS / G_-^power over the survival support; +inf when the
// censoring support ends before the survival support.
double condition_integral(const DataModel& model, int power);
// P(T <= C).
double event_fraction(const DataModel& model);

ObservedSample generate(const DataModel& model, std::size_t n, std::uint64_t seed);

// One experiment's raw outcomes plus derived statistics. Summaries are
// recomputable from the named series; pass/fail thresholds live in notes,
// not in the engine.
struct ExperimentReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  std::vector<std::pair<std::string, std::vector<double>>> series;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> notes;
};

enum class CoverageTarget { mrl_band, lorenz_band, gini_interval };

struct CoverageSetup {
  DataModel model;
  std::size_t n = 100;
  std::size_t replicates = 100;  // bootstrap B
  double alpha = 0.05;
  CoverageTarget target = CoverageTarget::mrl_band;
  double t1 = 0.0;               // mrl band only
  double t2 = 0.5;
  std::size_t lorenz_grid = 201;
  std::size_t repetitions = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

// Proportion of repetitions whose band/interval contains the closed-form
// truth simultaneously, with binomial standard error.
ExperimentReport coverage_experiment(const CoverageSetup& setup);

struct GammaSweepSetup {
  DataModel model;
  std::vector<std::size_t> n_list;
  std::size_t replicates = 100;     // bootstrap B per n
  std::size_t truth_repetitions = 11;
  std::size_t grid_points = 21;
  double grid_end = 0.0;            // 0 = support end (or the 99.5% quantile)
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

// Per n: median grid-sup distance of the plug-in covariance surface to the
// quadrature truth, and median over replicates of the grid-sup distance of
// the bootstrap surface to the plug-in one.
ExperimentReport gamma_consistency_sweep(const GammaSweepSetup& setup);

// Monte Carlo check of the two maximal-inequality bounds: frequencies of
// {sup S*/S > 1/beta} against beta and of {inf H*_-/H_- < beta} against
// (e/beta) exp(-1/beta), each allowed 3 binomial sigmas of slack.
ExperimentReport gill_bound_check(const ObservedSample& sample,
                                  const ResamplePlan& plan,
                                  const std::vector<double>& beta_list,
                                  unsigned threads = 0);

// Random jump-process pairs (h non-increasing with h(0) = 1, Z zero at 0):
// asserts sup h|Z| <= 2 sup |integral h dZ| at every evaluation point.
ExperimentReport jump_inequality_check(std::size_t trials, std::uint64_t seed,
                                       std::size_t max_jumps = 20);

}  // namespace kmboot::sim
