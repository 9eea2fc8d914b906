#pragma once

#include <stdexcept>
#include <vector>

#include "kmboot/bootstrap.hpp"

namespace kmboot {

enum class BandKind { mrl, lorenz };

// Signals that every bootstrap replicate was dropped; mapped to its own exit
// code by the CLI.
class DegenerateBootstrapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simultaneous confidence band with constant half-width q / sqrt(n).
struct ConfidenceBand {
  BandKind kind = BandKind::mrl;
  std::vector<double> grid;    // times (mrl) or probabilities (lorenz)
  std::vector<double> center;
  std::vector<double> lower;
  std::vector<double> upper;
  double alpha = 0.0;
  double half_width = 0.0;     // bootstrap quantile with 1/sqrt(n) applied
  std::size_t replicates_used = 0;
  std::size_t replicates_dropped = 0;
  bool lower_clipped = false;
  bool tail_mass_redistributed = false;
};

struct ConfidenceInterval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.0;
  double half_width = 0.0;
  std::size_t replicates_used = 0;
  std::size_t replicates_dropped = 0;
  bool tail_mass_redistributed = false;
};

// Band for the mean residual lifetime over [t1, t2]. Replicates whose
// survival estimate hits zero at or before t2 are dropped and counted; the
// lower edge is clipped at zero.
ConfidenceBand mrl_band(const ObservedSample& sample, double t1, double t2,
                        double alpha, const ResamplePlan& plan,
                        unsigned threads = 0);

// Band for the Lorenz curve on [0, 1], clipped to [0, 1]; the per-replicate
// sup is exact over the union of the two curves' node sets.
ConfidenceBand lorenz_band(const ObservedSample& sample, double alpha,
                           const ResamplePlan& plan,
                           std::size_t p_grid_points = 201,
                           unsigned threads = 0);

ConfidenceInterval gini_interval(const ObservedSample& sample, double alpha,
                                 const ResamplePlan& plan,
                                 unsigned threads = 0);

// Largest observed time at which the survival estimate still sits at or
// above the threshold; a data-driven default for t2.
double suggest_t2(const SurvivalFit& fit, double survival_threshold = 0.05);

// Exact sup over the union of node sets of two piecewise-linear Lorenz
// curves.
double lorenz_sup_distance(const LorenzCurve& a, const LorenzCurve& b);

}  // namespace kmboot
