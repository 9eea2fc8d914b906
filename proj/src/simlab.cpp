#include "kmboot/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kmboot/covariance.hpp"
#include "kmboot/functionals.hpp"
#include "kmboot/rng.hpp"

namespace kmboot::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double simpson_piece(double h, double fa, double fm, double fb) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double m,
                   double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_piece(m - a, fa, flm, fm);
  const double right = simpson_piece(b - m, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-8) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  return simpson_rec(f, a, m, b, fa, fm, fb, simpson_piece(b - a, fa, fm, fb),
                     tol, 48);
}

// Integral of f over [a, inf) via the substitution u = a + x / (1 - x).
double integral_to_inf(const std::function<double(double)>& f, double a,
                       double tol = 1e-8) {
  return adaptive_simpson(
      [&](double x) {
        if (x >= 1.0) return 0.0;
        const double om = 1.0 - x;
        return f(a + x / om) / (om * om);
      },
      0.0, 1.0, tol);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

// P(C >= u) read from the left limit of the censoring survival function.
double censor_left(const DataModel& model, double u) {
  switch (model.censoring.kind) {
    case Law::Kind::none: return 1.0;
    case Law::Kind::point_mass: return u <= model.censoring.a ? 1.0 : 0.0;
    default: return survival(model.censoring, u);
  }
}

std::string describe(const Law& law) {
  std::ostringstream os;
  switch (law.kind) {
    case Law::Kind::uniform: os << "uniform(" << law.a << "," << law.b << ")"; break;
    case Law::Kind::exponential: os << "exponential(" << law.a << ")"; break;
    case Law::Kind::weibull: os << "weibull(" << law.a << "," << law.b << ")"; break;
    case Law::Kind::point_mass: os << "point_mass(" << law.a << ")"; break;
    case Law::Kind::none: os << "none"; break;
  }
  return os.str();
}

std::string describe(const DataModel& model) {
  return "T~" + describe(model.survival) + " C~" + describe(model.censoring);
}

}  // namespace

void validate(const Law& law, bool is_censoring) {
  switch (law.kind) {
    case Law::Kind::uniform:
      if (!(law.a >= 0.0) || !(law.b > law.a))
        throw std::invalid_argument("uniform law needs 0 <= a < b");
      break;
    case Law::Kind::exponential:
      if (!(law.a > 0.0)) throw std::invalid_argument("exponential rate must be > 0");
      break;
    case Law::Kind::weibull:
      if (!(law.a > 0.0) || !(law.b > 0.0))
        throw std::invalid_argument("weibull shape and scale must be > 0");
      break;
    case Law::Kind::point_mass:
      if (!(law.a > 0.0)) throw std::invalid_argument("point mass must sit at a positive time");
      break;
    case Law::Kind::none:
      if (!is_censoring)
        throw std::invalid_argument("survival law may not be 'none'");
      break;
  }
}

double survival(const Law& law, double t) {
  switch (law.kind) {
    case Law::Kind::uniform:
      if (t <= law.a) return 1.0;
      if (t >= law.b) return 0.0;
      return (law.b - t) / (law.b - law.a);
    case Law::Kind::exponential:
      return t <= 0.0 ? 1.0 : std::exp(-law.a * t);
    case Law::Kind::weibull:
      return t <= 0.0 ? 1.0 : std::exp(-std::pow(t / law.b, law.a));
    case Law::Kind::point_mass:
      return t < law.a ? 1.0 : 0.0;
    case Law::Kind::none:
      return 1.0;
  }
  return 1.0;
}

double density(const Law& law, double t) {
  switch (law.kind) {
    case Law::Kind::uniform:
      return (t >= law.a && t <= law.b) ? 1.0 / (law.b - law.a) : 0.0;
    case Law::Kind::exponential:
      return t < 0.0 ? 0.0 : law.a * std::exp(-law.a * t);
    case Law::Kind::weibull: {
      if (t < 0.0) return 0.0;
      if (t == 0.0) return law.a == 1.0 ? 1.0 / law.b : 0.0;
      const double z = t / law.b;
      return law.a / law.b * std::pow(z, law.a - 1.0) * std::exp(-std::pow(z, law.a));
    }
    case Law::Kind::point_mass:
      return 0.0;  // the atom carries no Lebesgue density
    default:
      throw std::invalid_argument("density: law is not continuous");
  }
}

double law_quantile(const Law& law, double p) {
  switch (law.kind) {
    case Law::Kind::uniform: return law.a + (law.b - law.a) * p;
    case Law::Kind::exponential: return -std::log1p(-p) / law.a;
    case Law::Kind::weibull: return law.b * std::pow(-std::log1p(-p), 1.0 / law.a);
    case Law::Kind::point_mass: return law.a;
    case Law::Kind::none: return kInf;
  }
  return 0.0;
}

double support_end(const Law& law) {
  switch (law.kind) {
    case Law::Kind::uniform: return law.b;
    case Law::Kind::point_mass: return law.a;
    default: return kInf;
  }
}

double true_mean(const Law& law) {
  switch (law.kind) {
    case Law::Kind::uniform: return 0.5 * (law.a + law.b);
    case Law::Kind::exponential: return 1.0 / law.a;
    case Law::Kind::weibull: return law.b * std::tgamma(1.0 + 1.0 / law.a);
    case Law::Kind::point_mass: return law.a;
    case Law::Kind::none: break;
  }
  throw std::invalid_argument("true_mean: unavailable");
}

double true_mrl(const Law& law, double t) {
  switch (law.kind) {
    case Law::Kind::uniform:
      if (t < law.a) return true_mean(law) - t;
      if (t < law.b) return 0.5 * (law.b - t);
      return 0.0;
    case Law::Kind::exponential:
      return 1.0 / law.a;
    case Law::Kind::point_mass:
      return t < law.a ? law.a - t : 0.0;
    case Law::Kind::weibull: {
      const double s = survival(law, t);
      if (!(s > 0.0)) return 0.0;
      return integral_to_inf([&](double u) { return survival(law, u); }, t) / s;
    }
    case Law::Kind::none: break;
  }
  throw std::invalid_argument("true_mrl: unavailable");
}

std::vector<double> mrl_kinks(const Law& law) {
  if (law.kind == Law::Kind::uniform && law.a > 0.0) return {law.a};
  return {};
}

bool mrl_is_piecewise_linear(const Law& law) {
  return law.kind != Law::Kind::weibull;
}

double true_lorenz(const Law& law, double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  switch (law.kind) {
    case Law::Kind::uniform:
      return (law.a * p + 0.5 * (law.b - law.a) * p * p) / true_mean(law);
    case Law::Kind::exponential:
      return p + (1.0 - p) * std::log1p(-p);
    case Law::Kind::point_mass:
      return p;
    case Law::Kind::weibull:
      return adaptive_simpson([&](double u) { return law_quantile(law, u); }, 0.0,
                              p) /
             true_mean(law);
    case Law::Kind::none: break;
  }
  throw std::invalid_argument("true_lorenz: unavailable");
}

double true_gini(const Law& law) {
  switch (law.kind) {
    case Law::Kind::uniform: return (law.b - law.a) / (3.0 * (law.a + law.b));
    case Law::Kind::exponential: return 0.5;
    case Law::Kind::weibull: return 1.0 - std::pow(2.0, -1.0 / law.a);
    case Law::Kind::point_mass: return 0.0;
    case Law::Kind::none: break;
  }
  throw std::invalid_argument("true_gini: unavailable");
}

double true_sigma2(const DataModel& model, double t) {
  if (t <= 0.0) return 0.0;
  auto integrand = [&](double u) {
    const double s = survival(model.survival, u);
    const double g = censor_left(model, u);
    if (!(s > 0.0) || !(g > 0.0)) return 0.0;
    return density(model.survival, u) / (s * s * g);
  };
  return adaptive_simpson(integrand, 0.0, t);
}

double true_gamma(const DataModel& model, double u, double v) {
  const double su = survival(model.survival, u);
  const double sv = survival(model.survival, v);
  if (!(su > 0.0) || !(sv > 0.0)) return 0.0;
  return su * sv * true_sigma2(model, std::min(u, v));
}

double condition_integral(const DataModel& model, int power) {
  if (power != 1 && power != 3)
    throw std::invalid_argument("condition_integral: power must be 1 or 3");
  const double tau = support_end(model.survival);
  if (model.censoring.kind == Law::Kind::none) return 1.0;
  if (support_end(model.censoring) < tau) return kInf;
  auto integrand = [&](double u) {
    const double g = censor_left(model, u);
    if (!(g > 0.0)) return 0.0;
    const double denom = power == 1 ? g : g * g * g;
    return density(model.survival, u) / denom;
  };
  if (std::isfinite(tau)) return adaptive_simpson(integrand, 0.0, tau);
  return integral_to_inf(integrand, 0.0);
}

double event_fraction(const DataModel& model) {
  if (model.survival.kind == Law::Kind::point_mass) {
    const double a = model.survival.a;
    switch (model.censoring.kind) {
      case Law::Kind::none: return 1.0;
      case Law::Kind::point_mass: return a <= model.censoring.a ? 1.0 : 0.0;
      default: return survival(model.censoring, a);  // P(C >= a), C continuous
    }
  }
  if (model.censoring.kind == Law::Kind::none) return 1.0;
  if (model.censoring.kind == Law::Kind::point_mass) {
    const double c = model.censoring.a;
    return 1.0 - survival(model.survival, c);  // P(T <= c)
  }
  auto integrand = [&](double u) {
    return density(model.survival, u) * survival(model.censoring, u);
  };
  const double tau = support_end(model.survival);
  if (std::isfinite(tau)) return adaptive_simpson(integrand, 0.0, tau);
  return integral_to_inf(integrand, 0.0);
}

namespace {

double draw(const Law& law, RandomStream& rng) {
  switch (law.kind) {
    case Law::Kind::uniform: return law.a + (law.b - law.a) * rng.unit_open();
    case Law::Kind::exponential: return -std::log1p(-rng.unit_open()) / law.a;
    case Law::Kind::weibull:
      return law.b * std::pow(-std::log1p(-rng.unit_open()), 1.0 / law.a);
    case Law::Kind::point_mass: return law.a;
    case Law::Kind::none: break;
  }
  throw std::invalid_argument("draw: law has no sampler");
}

}  // namespace

ObservedSample generate(const DataModel& model, std::size_t n, std::uint64_t seed) {
  validate(model.survival, false);
  validate(model.censoring, true);
  if (n == 0) throw std::invalid_argument("generate: n must be >= 1");
  RandomStream rng(seed);
  ObservedSample sample;
  sample.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = draw(model.survival, rng);
    const double c =
        model.censoring.kind == Law::Kind::none ? kInf : draw(model.censoring, rng);
    sample.records.push_back(
        {std::min(t, c), t <= c ? Status::event : Status::censored});
  }
  return sample;
}

namespace {

bool mrl_truth_covered(const SurvivalFit& fit, const Law& law, double t1,
                       double t2, double half_width) {
  const MrlCurve curve(fit);
  std::vector<double> cand{t1, t2};
  for (double b : fit.km.breakpoints())
    if (b > t1 && b <= t2) cand.push_back(b);
  if (fit.largest_time > t1 && fit.largest_time <= t2)
    cand.push_back(fit.largest_time);
  for (double k : mrl_kinks(law))
    if (k > t1 && k < t2) cand.push_back(k);
  if (!mrl_is_piecewise_linear(law)) {
    for (int i = 1; i < 256; ++i)
      cand.push_back(t1 + (t2 - t1) * static_cast<double>(i) / 256.0);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  double sup = 0.0;
  for (double t : cand) {
    sup = std::max(sup, std::fabs(curve(t) - true_mrl(law, t)));
    if (t > t1 && t > 0.0)
      sup = std::max(sup, std::fabs(curve.left_limit(t) - true_mrl(law, t)));
  }
  return sup <= half_width;
}

bool lorenz_truth_covered(const SurvivalFit& fit, const Law& law,
                          double half_width) {
  const LorenzCurve L = lorenz(fit);
  std::vector<double> cand = L.curve.xs();
  for (int i = 0; i <= 1024; ++i)
    cand.push_back(static_cast<double>(i) / 1024.0);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  double sup = 0.0;
  for (double p : cand) sup = std::max(sup, std::fabs(L(p) - true_lorenz(law, p)));
  return sup <= half_width;
}

}  // namespace

ExperimentReport coverage_experiment(const CoverageSetup& setup) {
  if (setup.model.survival.kind == Law::Kind::none)
    throw std::invalid_argument("truth unavailable for requested functional");
  validate(setup.model.survival, false);
  validate(setup.model.censoring, true);
  if (setup.repetitions == 0)
    throw std::invalid_argument("coverage_experiment: repetitions must be >= 1");

  std::vector<double> covered(setup.repetitions, 0.0);
  std::atomic<std::size_t> failures{0};

  parallel_for(setup.repetitions, setup.threads, [&](std::size_t r) {
    const ObservedSample sample =
        generate(setup.model, setup.n, mix_seed(setup.seed, 101, r));
    const ResamplePlan plan{mix_seed(setup.seed, 202, r), setup.replicates, 0};
    try {
      switch (setup.target) {
        case CoverageTarget::mrl_band: {
          const ConfidenceBand band =
              mrl_band(sample, setup.t1, setup.t2, setup.alpha, plan, 1);
          covered[r] = mrl_truth_covered(km_fit(sample), setup.model.survival,
                                         setup.t1, setup.t2, band.half_width)
                           ? 1.0
                           : 0.0;
          break;
        }
        case CoverageTarget::lorenz_band: {
          const ConfidenceBand band =
              lorenz_band(sample, setup.alpha, plan, setup.lorenz_grid, 1);
          covered[r] = lorenz_truth_covered(km_fit(sample), setup.model.survival,
                                            band.half_width)
                           ? 1.0
                           : 0.0;
          break;
        }
        case CoverageTarget::gini_interval: {
          const ConfidenceInterval ci = gini_interval(sample, setup.alpha, plan, 1);
          covered[r] = std::fabs(ci.estimate - true_gini(setup.model.survival)) <=
                               ci.half_width
                           ? 1.0
                           : 0.0;
          break;
        }
      }
    } catch (const DegenerateBootstrapError&) {
      failures.fetch_add(1);
    } catch (const std::invalid_argument&) {
      failures.fetch_add(1);  // e.g. t2 beyond this sample's support
    }
  });

  double hits = 0.0;
  for (double c : covered) hits += c;
  const double reps = static_cast<double>(setup.repetitions);
  const double coverage = hits / reps;
  const double se = std::sqrt(coverage * (1.0 - coverage) / reps);

  ExperimentReport report;
  {
    std::ostringstream os;
    os << "coverage:"
       << (setup.target == CoverageTarget::mrl_band
               ? "mrl"
               : setup.target == CoverageTarget::lorenz_band ? "lorenz" : "gini")
       << " " << describe(setup.model) << " n=" << setup.n << " B="
       << setup.replicates << " alpha=" << setup.alpha;
    report.scenario = os.str();
  }
  report.seed = setup.seed;
  report.replications = setup.repetitions;
  report.series.emplace_back("covered", std::move(covered));
  report.summary.emplace_back("coverage", coverage);
  report.summary.emplace_back("standard_error", se);
  report.summary.emplace_back("nominal", 1.0 - setup.alpha);
  report.summary.emplace_back("failed_repetitions",
                              static_cast<double>(failures.load()));
  report.notes.push_back("covered = band contains the closed-form truth at every checked point");
  return report;
}

ExperimentReport gamma_consistency_sweep(const GammaSweepSetup& setup) {
  validate(setup.model.survival, false);
  validate(setup.model.censoring, true);
  if (setup.n_list.empty())
    throw std::invalid_argument("gamma_consistency_sweep: empty n list");
  if (setup.grid_points < 2)
    throw std::invalid_argument("gamma_consistency_sweep: need at least 2 grid points");

  const double end = setup.grid_end > 0.0
                         ? setup.grid_end
                         : (std::isfinite(support_end(setup.model.survival))
                                ? support_end(setup.model.survival)
                                : law_quantile(setup.model.survival, 0.995));
  const std::size_t G = setup.grid_points;
  std::vector<double> grid(G);
  for (std::size_t i = 0; i < G; ++i)
    grid[i] = end * static_cast<double>(i) / static_cast<double>(G - 1);

  // Quadrature truth, integrated segment by segment while S stays positive.
  std::vector<double> s_true(G), sig_true(G, 0.0);
  for (std::size_t i = 0; i < G; ++i) s_true[i] = survival(setup.model.survival, grid[i]);
  auto integrand = [&](double u) {
    const double s = survival(setup.model.survival, u);
    const double g = censor_left(setup.model, u);
    if (!(s > 0.0) || !(g > 0.0)) return 0.0;
    return density(setup.model.survival, u) / (s * s * g);
  };
  for (std::size_t i = 1; i < G && s_true[i] > 0.0; ++i)
    sig_true[i] = sig_true[i - 1] + adaptive_simpson(integrand, grid[i - 1], grid[i]);

  auto gamma_true = [&](std::size_t i, std::size_t j) {
    if (!(s_true[i] > 0.0) || !(s_true[j] > 0.0)) return 0.0;
    return s_true[i] * s_true[j] * sig_true[std::min(i, j)];
  };

  auto surface_at_grid = [&](const SurvivalFit& fit, std::vector<double>& s_out,
                             std::vector<double>& sig_out) {
    const CovarianceSurface surface(fit);
    s_out.resize(G);
    sig_out.resize(G);
    for (std::size_t i = 0; i < G; ++i) {
      s_out[i] = surface.km()(grid[i]);
      sig_out[i] = surface.sigma2()(grid[i]);
    }
  };
  auto grid_sup = [&](const std::vector<double>& sa, const std::vector<double>& siga,
                      const auto& other) {
    double sup = 0.0;
    for (std::size_t i = 0; i < G; ++i)
      for (std::size_t j = i; j < G; ++j) {
        const double mine = sa[i] * siga[std::min(i, j)] * sa[j];
        sup = std::max(sup, std::fabs(mine - other(i, j)));
      }
    return sup;
  };

  ExperimentReport report;
  report.scenario = "gamma_sweep " + describe(setup.model);
  report.seed = setup.seed;

  for (std::size_t idx = 0; idx < setup.n_list.size(); ++idx) {
    const std::size_t n = setup.n_list[idx];
    const std::uint64_t stream = 300 + 2 * idx;

    std::vector<double> truth_sup(setup.truth_repetitions, 0.0);
    parallel_for(setup.truth_repetitions, setup.threads, [&](std::size_t r) {
      const SurvivalFit fit =
          km_fit(generate(setup.model, n, mix_seed(setup.seed, stream, r)));
      std::vector<double> s_hat, sig_hat;
      surface_at_grid(fit, s_hat, sig_hat);
      truth_sup[r] = grid_sup(s_hat, sig_hat, gamma_true);
    });

    const ObservedSample anchor =
        generate(setup.model, n, mix_seed(setup.seed, stream, 0));
    const SurvivalFit anchor_fit = km_fit(anchor);
    std::vector<double> s0, sig0;
    surface_at_grid(anchor_fit, s0, sig0);
    auto gamma_hat0 = [&](std::size_t i, std::size_t j) {
      return s0[i] * sig0[std::min(i, j)] * s0[j];
    };

    const ResamplePlan plan{mix_seed(setup.seed, stream + 1, 0), setup.replicates, 0};
    std::vector<double> boot_sup(setup.replicates, 0.0);
    parallel_for(setup.replicates, setup.threads, [&](std::size_t b) {
      const SurvivalFit boot = bootstrap_fit(anchor, plan, b);
      std::vector<double> sb, sigb;
      surface_at_grid(boot, sb, sigb);
      boot_sup[b] = grid_sup(sb, sigb, gamma_hat0);
    });

    const std::string tag = "n=" + std::to_string(n);
    report.summary.emplace_back("truth_sup_median[" + tag + "]", median(truth_sup));
    report.summary.emplace_back("boot_sup_median[" + tag + "]", median(boot_sup));
    report.replications += truth_sup.size() + boot_sup.size();
    report.series.emplace_back("truth_sup[" + tag + "]", std::move(truth_sup));
    report.series.emplace_back("boot_sup[" + tag + "]", std::move(boot_sup));
  }
  report.notes.push_back(
      "medians of grid-sup distances should shrink as n grows");
  return report;
}

ExperimentReport gill_bound_check(const ObservedSample& sample,
                                  const ResamplePlan& plan,
                                  const std::vector<double>& beta_list,
                                  unsigned threads) {
  for (double beta : beta_list)
    if (!(beta > 0.0 && beta < 1.0))
      throw std::invalid_argument("gill_bound_check: beta values must lie in (0, 1)");

  const SurvivalFit fit = km_fit(sample);
  const std::size_t B = plan.replicate_count;
  std::vector<double> sup_ratio(B, 1.0), min_ratio(B, 1.0);

  parallel_for(B, threads, [&](std::size_t b) {
    const SurvivalFit boot = bootstrap_fit(sample, plan, b);
    const double t_star = boot.largest_time;

    double sup = 1.0;  // ratio at time 0
    auto survival_ratio = [&](double t) {
      if (!(t > 0.0) || t > t_star) return;
      const double s0 = fit.km(t);
      const double s1 = boot.km(t);
      if (s0 > 0.0)
        sup = std::max(sup, s1 / s0);
      else if (s1 > 0.0)
        sup = kInf;
    };
    for (double t : fit.km.breakpoints()) survival_ratio(t);
    for (double t : boot.km.breakpoints()) survival_ratio(t);
    sup_ratio[b] = sup;

    // inf over (0, t_star] of H*(t-) / H(t-): left limits step at observed
    // times strictly below t_star.
    double lo = 1.0;
    auto risk_ratio = [&](double t) {
      if (!(t > 0.0) || t >= t_star) return;
      lo = std::min(lo, boot.emp_surv(t) / fit.emp_surv(t));
    };
    for (double t : fit.emp_surv.breakpoints()) risk_ratio(t);
    for (double t : boot.emp_surv.breakpoints()) risk_ratio(t);
    min_ratio[b] = lo;
  });

  ExperimentReport report;
  report.scenario = "gill_bounds n=" + std::to_string(sample.size()) +
                    " B=" + std::to_string(B);
  report.seed = plan.seed;
  report.replications = B;

  const double dB = static_cast<double>(B);
  for (double beta : beta_list) {
    double f1 = 0.0, f2 = 0.0;
    for (std::size_t b = 0; b < B; ++b) {
      if (sup_ratio[b] > 1.0 / beta) f1 += 1.0;
      if (min_ratio[b] < beta) f2 += 1.0;
    }
    f1 /= dB;
    f2 /= dB;
    const double bound1 = beta;
    const double bound2 = std::min(1.0, std::exp(1.0) / beta * std::exp(-1.0 / beta));
    const double sig1 = std::sqrt(bound1 * (1.0 - bound1) / dB);
    const double sig2 = std::sqrt(bound2 * (1.0 - bound2) / dB);
    std::ostringstream tag;
    tag << "beta=" << beta;
    report.summary.emplace_back("survival_ratio_freq[" + tag.str() + "]", f1);
    report.summary.emplace_back("survival_ratio_bound[" + tag.str() + "]", bound1);
    report.summary.emplace_back("survival_ratio_pass[" + tag.str() + "]",
                                f1 <= bound1 + 3.0 * sig1 ? 1.0 : 0.0);
    report.summary.emplace_back("risk_ratio_freq[" + tag.str() + "]", f2);
    report.summary.emplace_back("risk_ratio_bound[" + tag.str() + "]", bound2);
    report.summary.emplace_back("risk_ratio_pass[" + tag.str() + "]",
                                f2 <= bound2 + 3.0 * sig2 ? 1.0 : 0.0);
  }
  report.series.emplace_back("sup_survival_ratio", std::move(sup_ratio));
  report.series.emplace_back("min_risk_ratio", std::move(min_ratio));
  report.notes.push_back(
      "pass iff frequency <= bound + 3 sqrt(bound (1-bound) / B)");
  return report;
}

ExperimentReport jump_inequality_check(std::size_t trials, std::uint64_t seed,
                                       std::size_t max_jumps) {
  if (trials == 0)
    throw std::invalid_argument("jump_inequality_check: trials must be >= 1");
  if (max_jumps == 0) max_jumps = 1;

  std::vector<double> excess(trials);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream rng(seed, 7001, trial);

    // h: cumulative products of open-uniform factors at random times, so it
    // is positive, non-increasing and starts at 1.
    const std::size_t nh = 1 + rng.below(max_jumps);
    std::vector<double> ht;
    for (std::size_t k = 0; k < nh; ++k) ht.push_back(rng.unit_open());
    std::sort(ht.begin(), ht.end());
    ht.erase(std::unique(ht.begin(), ht.end()), ht.end());
    std::vector<double> hv(ht.size());
    double h = 1.0;
    for (std::size_t k = 0; k < ht.size(); ++k) {
      h *= rng.unit_open();
      hv[k] = h;
    }

    // Z: signed jumps, sometimes sharing a time with h.
    const std::size_t nz = 1 + rng.below(max_jumps);
    std::vector<std::pair<double, double>> zj;
    for (std::size_t k = 0; k < nz; ++k) {
      const double t =
          rng.below(10) < 3 ? ht[rng.below(ht.size())] : rng.unit_open();
      zj.emplace_back(t, rng.uniform(-1.0, 1.0));
    }
    std::sort(zj.begin(), zj.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double h_cur = 1.0, z_cur = 0.0, integral = 0.0;
    double sup_lhs = 0.0, sup_int = 0.0, worst = -kInf;
    std::size_t ih = 0, iz = 0;
    while (ih < ht.size() || iz < zj.size()) {
      double t = kInf;
      if (ih < ht.size()) t = ht[ih];
      if (iz < zj.size()) t = std::min(t, zj[iz].first);
      if (ih < ht.size() && ht[ih] == t) {
        h_cur = hv[ih];
        ++ih;
      }
      while (iz < zj.size() && zj[iz].first == t) {
        z_cur += zj[iz].second;
        integral += h_cur * zj[iz].second;
        ++iz;
      }
      sup_lhs = std::max(sup_lhs, h_cur * std::fabs(z_cur));
      sup_int = std::max(sup_int, std::fabs(integral));
      worst = std::max(worst, sup_lhs - 2.0 * sup_int);
    }
    excess[trial] = worst;
  }

  std::size_t violations = 0;
  double max_excess = -kInf;
  for (double e : excess) {
    if (e > 1e-10) ++violations;
    max_excess = std::max(max_excess, e);
  }

  ExperimentReport report;
  report.scenario = "jump_inequality trials=" + std::to_string(trials);
  report.seed = seed;
  report.replications = trials;
  report.summary.emplace_back("violations", static_cast<double>(violations));
  report.summary.emplace_back("max_excess", max_excess);
  report.series.emplace_back("excess", std::move(excess));
  report.notes.push_back("excess = sup h|Z| - 2 sup |int h dZ|; must stay <= 0");
  return report;
}

}  // namespace kmboot::sim
