#pragma once

#include <cstddef>
#include <vector>

#include "kmboot/step_function.hpp"

namespace kmboot {

enum class Status : unsigned char { censored = 0, event = 1 };

struct Observation {
  double time = 0.0;
  Status status = Status::event;

  friend bool operator==(const Observation&, const Observation&) = default;
};

// Right-censored sample: pairs (X_i, delta_i) with strictly positive times.
struct ObservedSample {
  std::vector<Observation> records;

  std::size_t size() const { return records.size(); }

  friend bool operator==(const ObservedSample&, const ObservedSample&) = default;
};

// Throws std::invalid_argument on an empty sample or non-positive times.
void validate(const ObservedSample& sample);

bool has_duplicate_times(const ObservedSample& sample);

// Stable sort by time with events ordered strictly before censorings at tied
// times. Identity on tie-free data already sorted by time.
ObservedSample resolve_ties(ObservedSample sample);

// Joint fit of all step-function estimators from one sorted pass.
struct SurvivalFit {
  StepFunction km;         // product-limit survival estimate
  StepFunction na;         // cumulative hazard estimate
  StepFunction censor_km;  // product-limit estimate of the censoring survival
  StepFunction emp_surv;   // empirical survival of the observed times
  StepFunction at_risk;    // count of observations with time > t; its left
                           // limit at u is the at-risk size #{i : X_i >= u}
  double largest_time = 0.0;
  std::size_t n = 0;
};

SurvivalFit km_fit(const ObservedSample& sample);

inline double largest_time(const SurvivalFit& fit) { return fit.largest_time; }

// Survival mass remaining at the largest observation; positive exactly when
// the (tie-resolved) last record is censored.
inline double tail_defect(const SurvivalFit& fit) { return fit.km.terminal_value(); }

}  // namespace kmboot
