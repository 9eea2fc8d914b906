#include "kmboot/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kmboot {

void validate(const ObservedSample& sample) {
  if (sample.records.empty()) throw std::invalid_argument("empty sample");
  for (const auto& r : sample.records)
    if (!std::isfinite(r.time) || !(r.time > 0.0))
      throw std::invalid_argument("observation times must be strictly positive");
}

bool has_duplicate_times(const ObservedSample& sample) {
  std::vector<double> times;
  times.reserve(sample.size());
  for (const auto& r : sample.records) times.push_back(r.time);
  std::sort(times.begin(), times.end());
  return std::adjacent_find(times.begin(), times.end()) != times.end();
}

ObservedSample resolve_ties(ObservedSample sample) {
  std::stable_sort(sample.records.begin(), sample.records.end(),
                   [](const Observation& a, const Observation& b) {
                     if (a.time != b.time) return a.time < b.time;
                     return static_cast<int>(a.status) > static_cast<int>(b.status);
                   });
  return sample;
}

SurvivalFit km_fit(const ObservedSample& sample) {
  validate(sample);
  const ObservedSample sorted = resolve_ties(sample);
  const std::size_t n = sorted.size();
  const double dn = static_cast<double>(n);

  std::vector<double> t_km, v_km, t_na, v_na, t_g, v_g, t_all, v_h, v_risk;
  double surv = 1.0;
  double haz = 0.0;
  double cens = 1.0;
  std::size_t remaining = n;
  std::size_t events_seen = 0;
  std::size_t censored_seen = 0;

  std::size_t i = 0;
  while (i < n) {
    const double t = sorted.records[i].time;
    std::size_t d = 0, c = 0;
    for (; i < n && sorted.records[i].time == t; ++i) {
      if (sorted.records[i].status == Status::event) ++d;
      else ++c;
    }
    const std::size_t at_risk = remaining;
    remaining -= d + c;

    if (d > 0) {
      // While no censoring has occurred strictly earlier, the product
      // telescopes to (at_risk - d) / n; the closed form keeps the
      // no-censoring reduction to 1 - ECDF bit-exact.
      if (censored_seen == 0)
        surv = static_cast<double>(at_risk - d) / dn;
      else
        surv *= 1.0 - static_cast<double>(d) / static_cast<double>(at_risk);
      haz += static_cast<double>(d) / static_cast<double>(at_risk);
      t_km.push_back(t);
      v_km.push_back(surv);
      t_na.push_back(t);
      v_na.push_back(haz);
    }
    if (c > 0) {
      if (events_seen == 0 && d == 0)
        cens = static_cast<double>(at_risk - c) / dn;
      else
        cens *= 1.0 - static_cast<double>(c) / static_cast<double>(at_risk - d);
      t_g.push_back(t);
      v_g.push_back(cens);
    }
    events_seen += d;
    censored_seen += c;

    t_all.push_back(t);
    v_h.push_back(static_cast<double>(remaining) / dn);
    v_risk.push_back(static_cast<double>(remaining));
  }

  SurvivalFit fit;
  fit.km = StepFunction(1.0, std::move(t_km), std::move(v_km));
  fit.na = StepFunction(0.0, std::move(t_na), std::move(v_na));
  fit.censor_km = StepFunction(1.0, std::move(t_g), std::move(v_g));
  fit.emp_surv = StepFunction(1.0, t_all, std::move(v_h));
  fit.at_risk = StepFunction(dn, std::move(t_all), std::move(v_risk));
  fit.largest_time = sorted.records.back().time;
  fit.n = n;
  return fit;
}

}  // namespace kmboot
