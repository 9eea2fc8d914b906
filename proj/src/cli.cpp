#include "kmboot/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "kmboot/bands.hpp"
#include "kmboot/bootstrap.hpp"
#include "kmboot/covariance.hpp"
#include "kmboot/functionals.hpp"
#include "kmboot/rng.hpp"

namespace kmboot::cli {

using nlohmann::json;

namespace {

std::string trim(std::string s) {
  const auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

double parse_double(const std::string& field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw std::invalid_argument("line " + std::to_string(line_no) +
                                ": malformed number '" + field + "'");
  return value;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

json table_json(const StepFunction& f) {
  json rows = json::array();
  const auto& bp = f.breakpoints();
  for (std::size_t k = 0; k < bp.size(); ++k) {
    rows.push_back({{"t", bp[k]},
                    {"value", f.values()[k]},
                    {"value_left", f.value_before(k)}});
  }
  return json{{"initial_value", f.initial_value()}, {"rows", rows}};
}

json band_json(const ConfidenceBand& band, double root_n) {
  return json{
      {"kind", band.kind == BandKind::mrl ? "mrl" : "lorenz"},
      {"grid", band.grid},
      {"center", band.center},
      {"lower", band.lower},
      {"upper", band.upper},
      {"half_width", band.half_width},
      {"q", band.half_width * root_n},
      {"replicates_used", band.replicates_used},
      {"replicates_dropped", band.replicates_dropped},
      {"lower_clipped", band.lower_clipped},
      {"tail_mass_redistributed", band.tail_mass_redistributed},
  };
}

json report_json(const sim::ExperimentReport& report) {
  json series = json::object();
  for (const auto& [name, values] : report.series) series[name] = values;
  json summary = json::object();
  for (const auto& [name, value] : report.summary) summary[name] = value;
  return json{{"scenario", report.scenario},
              {"seed", report.seed},
              {"replications", report.replications},
              {"series", series},
              {"summary", summary},
              {"notes", report.notes}};
}

sim::Law parse_law(const std::string& text, bool is_censoring) {
  std::istringstream is(text);
  std::string name;
  is >> name;
  std::vector<double> args;
  double x = 0.0;
  while (is >> x) args.push_back(x);

  sim::Law law;
  if (name == "uniform" && args.size() == 2) law = sim::Law::uniform(args[0], args[1]);
  else if (name == "exponential" && args.size() == 1) law = sim::Law::exponential(args[0]);
  else if (name == "weibull" && args.size() == 2) law = sim::Law::weibull(args[0], args[1]);
  else if (name == "point_mass" && args.size() == 1) law = sim::Law::point_mass(args[0]);
  else if (name == "none" && args.empty()) law = sim::Law::none();
  else throw std::invalid_argument("scenario: bad law '" + text + "'");
  sim::validate(law, is_censoring);
  return law;
}

template <class T>
std::vector<T> parse_list(const std::string& text, std::size_t line_no) {
  std::vector<T> out;
  std::string item;
  std::istringstream is(text);
  while (is >> item) {
    if (!item.empty() && item.back() == ',') item.pop_back();
    if (item.empty()) continue;
    out.push_back(static_cast<T>(parse_double(item, line_no)));
  }
  if (out.empty())
    throw std::invalid_argument("line " + std::to_string(line_no) + ": empty list");
  return out;
}

}  // namespace

ObservedSample ingest(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);

  ObservedSample sample;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!header_seen) {
      if (text != "time,status")
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": expected header 'time,status'");
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected exactly two fields");
    const std::string time_field = trim(text.substr(0, comma));
    const std::string status_field = trim(text.substr(comma + 1));
    const double time = parse_double(time_field, line_no);
    if (!(time > 0.0))
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": times must be strictly positive");
    Status status;
    if (status_field == "1") status = Status::event;
    else if (status_field == "0") status = Status::censored;
    else
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": unknown status '" + status_field + "'");
    sample.records.push_back({time, status});
  }
  if (!header_seen) throw std::invalid_argument("empty file: " + path);
  if (sample.records.empty())
    throw std::invalid_argument("no data rows in " + path);
  if (warnings && has_duplicate_times(sample))
    warnings->push_back("duplicate observation times present; ties resolved events-first");
  return sample;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);

  Scenario sc;
  bool have_experiment = false;
  bool have_survival = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    std::string key = trim(text.substr(0, eq));
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    const std::string value = trim(text.substr(eq + 1));

    if (key == "experiment") { sc.experiment = value; have_experiment = true; }
    else if (key == "survival") { sc.model.survival = parse_law(value, false); have_survival = true; }
    else if (key == "censoring") sc.model.censoring = parse_law(value, true);
    else if (key == "n") sc.n = static_cast<std::size_t>(parse_double(value, line_no));
    else if (key == "b") sc.replicates = static_cast<std::size_t>(parse_double(value, line_no));
    else if (key == "alpha") sc.alpha = parse_double(value, line_no);
    else if (key == "band") sc.band = value;
    else if (key == "t1") sc.t1 = parse_double(value, line_no);
    else if (key == "t2") sc.t2 = parse_double(value, line_no);
    else if (key == "reps") sc.repetitions = static_cast<std::size_t>(parse_double(value, line_no));
    else if (key == "seed") sc.seed = static_cast<std::uint64_t>(parse_double(value, line_no));
    else if (key == "n_list") sc.n_list = parse_list<std::size_t>(value, line_no);
    else if (key == "beta") sc.beta_list = parse_list<double>(value, line_no);
    else if (key == "trials") sc.trials = static_cast<std::size_t>(parse_double(value, line_no));
    else if (key == "grid_points") sc.grid_points = static_cast<std::size_t>(parse_double(value, line_no));
    else if (key == "truth_reps") sc.truth_repetitions = static_cast<std::size_t>(parse_double(value, line_no));
    else if (key == "lorenz_grid") sc.lorenz_grid = static_cast<std::size_t>(parse_double(value, line_no));
    else
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": unknown scenario key '" + key + "'");
  }
  if (!have_experiment) throw std::invalid_argument("scenario: missing 'experiment'");
  if (!have_survival && sc.experiment != "jump_inequality")
    throw std::invalid_argument("scenario: missing 'survival'");
  return sc;
}

namespace {

json execute_fit(const ObservedSample& sample, std::vector<std::string>& warnings) {
  const SurvivalFit fit = km_fit(sample);
  if (tail_defect(fit) > 0.0)
    warnings.push_back("largest observation censored; survival estimate stays positive");
  return json{{"n", fit.n},
              {"largest_time", fit.largest_time},
              {"tail_mass", tail_defect(fit)},
              {"tables",
               {{"km", table_json(fit.km)},
                {"na", table_json(fit.na)},
                {"censor_km", table_json(fit.censor_km)},
                {"sigma2", table_json(sigma2_hat(fit))}}}};
}

json execute_band(const RunConfig& config, const ObservedSample& sample,
                  std::uint64_t seed, std::vector<std::string>& warnings) {
  const ResamplePlan plan{seed, config.replicates, 0};
  ConfidenceBand band;
  json extra = json::object();
  if (config.band_kind == "mrl") {
    double t2 = 0.0;
    bool t2_auto = false;
    if (config.t2) {
      t2 = *config.t2;
    } else {
      t2 = suggest_t2(km_fit(sample), config.t2_threshold);
      t2_auto = true;
      warnings.push_back("t2 chosen automatically: " + json(t2).dump());
    }
    band = mrl_band(sample, config.t1, t2, config.alpha, plan, config.threads);
    extra["t1"] = config.t1;
    extra["t2"] = t2;
    extra["t2_auto"] = t2_auto;
  } else if (config.band_kind == "lorenz") {
    band = lorenz_band(sample, config.alpha, plan, config.grid_points,
                       config.threads);
  } else {
    throw std::invalid_argument("unknown band kind '" + config.band_kind + "'");
  }
  if (band.replicates_dropped > 0)
    warnings.push_back(std::to_string(band.replicates_dropped) + " of " +
                       std::to_string(config.replicates) +
                       " replicates dropped (estimator support exceeded)");
  if (band.tail_mass_redistributed)
    warnings.push_back("largest observation censored; tail mass treated as an atom there");
  if (band.lower_clipped) warnings.push_back("lower band edge clipped at 0");

  json result = band_json(band, std::sqrt(static_cast<double>(sample.size())));
  result.update(extra);
  return result;
}

json execute_gini(const RunConfig& config, const ObservedSample& sample,
                  std::uint64_t seed, std::vector<std::string>& warnings) {
  const ResamplePlan plan{seed, config.replicates, 0};
  const ConfidenceInterval ci =
      gini_interval(sample, config.alpha, plan, config.threads);
  if (ci.tail_mass_redistributed)
    warnings.push_back("largest observation censored; tail mass treated as an atom there");
  return json{{"estimate", ci.estimate},
              {"lower", ci.lower},
              {"upper", ci.upper},
              {"half_width", ci.half_width},
              {"replicates_used", ci.replicates_used},
              {"replicates_dropped", ci.replicates_dropped},
              {"tail_mass_redistributed", ci.tail_mass_redistributed}};
}

json execute_conditions(const ObservedSample& sample,
                        std::vector<std::string>& warnings) {
  const SurvivalFit fit = km_fit(sample);
  json diagnostics = json::array();
  for (int power : {1, 3}) {
    const CensoringDiagnostic d = censoring_diagnostic(fit, 0.0, power);
    if (d.zero_denominator)
      warnings.push_back("power " + std::to_string(power) +
                         ": zero censoring mass at a contributing jump; condition likely violated");
    diagnostics.push_back({{"power", power},
                           {"value", d.value},
                           {"zero_denominator", d.zero_denominator}});
  }
  return json{{"t", 0.0}, {"diagnostics", diagnostics}};
}

struct SimulateOutcome {
  json result;
  std::optional<std::size_t> n;
  std::optional<double> alpha;
  std::optional<std::size_t> replicates;
};

SimulateOutcome execute_simulate(const RunConfig& config, std::uint64_t seed) {
  const Scenario sc = parse_scenario(config.input_path);
  const std::uint64_t run_seed = sc.seed.value_or(seed);
  SimulateOutcome out;

  if (sc.experiment == "coverage") {
    sim::CoverageSetup setup;
    setup.model = sc.model;
    setup.n = sc.n;
    setup.replicates = sc.replicates;
    setup.alpha = sc.alpha;
    setup.t1 = sc.t1;
    setup.t2 = sc.t2;
    setup.lorenz_grid = sc.lorenz_grid;
    setup.repetitions = sc.repetitions;
    setup.seed = run_seed;
    setup.threads = config.threads;
    if (sc.band == "mrl") setup.target = sim::CoverageTarget::mrl_band;
    else if (sc.band == "lorenz") setup.target = sim::CoverageTarget::lorenz_band;
    else if (sc.band == "gini") setup.target = sim::CoverageTarget::gini_interval;
    else throw std::invalid_argument("scenario: unknown band '" + sc.band + "'");
    out.result = report_json(sim::coverage_experiment(setup));
    out.n = sc.n;
    out.alpha = sc.alpha;
    out.replicates = sc.replicates;
  } else if (sc.experiment == "gamma_sweep") {
    sim::GammaSweepSetup setup;
    setup.model = sc.model;
    setup.n_list = sc.n_list.empty() ? std::vector<std::size_t>{100, 400, 1600}
                                     : sc.n_list;
    setup.replicates = sc.replicates;
    setup.truth_repetitions = sc.truth_repetitions;
    setup.grid_points = sc.grid_points;
    setup.seed = run_seed;
    setup.threads = config.threads;
    out.result = report_json(sim::gamma_consistency_sweep(setup));
    out.replicates = sc.replicates;
  } else if (sc.experiment == "gill_bounds") {
    const ObservedSample sample = sim::generate(sc.model, sc.n, run_seed);
    const ResamplePlan plan{kmboot::mix_seed(run_seed, 11, 0), sc.replicates, 0};
    const std::vector<double> betas =
        sc.beta_list.empty() ? std::vector<double>{0.2, 0.5, 0.8} : sc.beta_list;
    out.result = report_json(sim::gill_bound_check(sample, plan, betas, config.threads));
    out.n = sc.n;
    out.replicates = sc.replicates;
  } else if (sc.experiment == "jump_inequality") {
    out.result = report_json(sim::jump_inequality_check(sc.trials, run_seed));
  } else if (sc.experiment == "event_fraction") {
    const ObservedSample sample = sim::generate(sc.model, sc.n, run_seed);
    double events = 0.0;
    for (const auto& r : sample.records)
      if (r.status == Status::event) events += 1.0;
    const double freq = events / static_cast<double>(sample.size());
    const double truth = sim::event_fraction(sc.model);
    const double sigma = std::sqrt(truth * (1.0 - truth) / static_cast<double>(sc.n));
    out.result = json{{"scenario", "event_fraction"},
                      {"seed", run_seed},
                      {"empirical", freq},
                      {"expected", truth},
                      {"mc_sigma", sigma},
                      {"within_4_sigma", std::fabs(freq - truth) <= 4.0 * sigma}};
    out.n = sc.n;
  } else {
    throw std::invalid_argument("scenario: unknown experiment '" + sc.experiment + "'");
  }
  if (out.result.contains("seed")) out.result["seed"] = run_seed;
  return out;
}

}  // namespace

json execute(const RunConfig& config) {
  if (config.format != "json" && config.format != "csv")
    throw std::invalid_argument("unknown output format '" + config.format + "'");
  if (config.command == "simulate" && config.format == "csv")
    throw std::invalid_argument("simulate reports are JSON only");

  const bool randomized = config.command == "band" || config.command == "gini" ||
                          config.command == "simulate";
  const std::uint64_t seed =
      config.seed ? *config.seed : (randomized ? fresh_seed() : 0);

  std::vector<std::string> warnings;
  json doc;
  doc["command"] = config.command;
  doc["seed"] = seed;
  doc["n"] = nullptr;
  doc["alpha"] = nullptr;
  doc["B"] = nullptr;
  doc["B_dropped"] = nullptr;

  if (config.command == "fit" || config.command == "band" ||
      config.command == "gini" || config.command == "check-conditions") {
    const ObservedSample sample = ingest(config.input_path, &warnings);
    doc["n"] = sample.size();
    if (config.command == "fit") {
      doc["result"] = execute_fit(sample, warnings);
    } else if (config.command == "band") {
      doc["result"] = execute_band(config, sample, seed, warnings);
      doc["alpha"] = config.alpha;
      doc["B"] = config.replicates;
      doc["B_dropped"] = doc["result"]["replicates_dropped"];
    } else if (config.command == "gini") {
      doc["result"] = execute_gini(config, sample, seed, warnings);
      doc["alpha"] = config.alpha;
      doc["B"] = config.replicates;
      doc["B_dropped"] = doc["result"]["replicates_dropped"];
    } else {
      doc["result"] = execute_conditions(sample, warnings);
    }
  } else if (config.command == "simulate") {
    SimulateOutcome out = execute_simulate(config, seed);
    doc["result"] = std::move(out.result);
    if (out.n) doc["n"] = *out.n;
    if (out.alpha) doc["alpha"] = *out.alpha;
    if (out.replicates) doc["B"] = *out.replicates;
    if (doc["result"].contains("seed")) doc["seed"] = doc["result"]["seed"];
  } else {
    throw std::invalid_argument("unknown command '" + config.command + "'");
  }
  doc["warnings"] = warnings;
  return doc;
}

std::string to_csv(const json& output) {
  const std::string command = output.at("command");
  std::ostringstream os;
  const auto num = [](const json& v) { return v.dump(); };

  if (command == "fit") {
    os << "function,t,value,value_left\n";
    for (const auto& [name, table] : output.at("result").at("tables").items()) {
      os << name << ",0," << num(table.at("initial_value")) << ","
         << num(table.at("initial_value")) << "\n";
      for (const auto& row : table.at("rows"))
        os << name << "," << num(row.at("t")) << "," << num(row.at("value")) << ","
           << num(row.at("value_left")) << "\n";
    }
  } else if (command == "band") {
    const auto& r = output.at("result");
    os << "grid,center,lower,upper\n";
    for (std::size_t i = 0; i < r.at("grid").size(); ++i)
      os << num(r.at("grid")[i]) << "," << num(r.at("center")[i]) << ","
         << num(r.at("lower")[i]) << "," << num(r.at("upper")[i]) << "\n";
  } else if (command == "gini") {
    const auto& r = output.at("result");
    os << "estimate,lower,upper,alpha,half_width\n";
    os << num(r.at("estimate")) << "," << num(r.at("lower")) << ","
       << num(r.at("upper")) << "," << num(output.at("alpha")) << ","
       << num(r.at("half_width")) << "\n";
  } else if (command == "check-conditions") {
    os << "power,value,zero_denominator\n";
    for (const auto& d : output.at("result").at("diagnostics"))
      os << num(d.at("power")) << "," << num(d.at("value")) << ","
         << (d.at("zero_denominator").get<bool>() ? "1" : "0") << "\n";
  } else {
    throw std::invalid_argument("no CSV rendering for command '" + command + "'");
  }
  return os.str();
}

namespace {

void write_payload(const std::string& output_path, const std::string& payload) {
  if (output_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + output_path);
  out << payload;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    const json doc = execute(config);
    const std::string payload =
        config.format == "csv" ? to_csv(doc) : doc.dump(2) + "\n";
    write_payload(config.output_path, payload);
    return 0;
  } catch (const DegenerateBootstrapError& e) {
    const json err{{"error", {{"code", "degenerate_bootstrap"}, {"message", e.what()}}}};
    try { write_payload(config.output_path, err.dump(2) + "\n"); } catch (...) {}
    return 3;
  } catch (const std::exception& e) {
    const json err{{"error", {{"code", "validation"}, {"message", e.what()}}}};
    try { write_payload(config.output_path, err.dump(2) + "\n"); } catch (...) {}
    return 2;
  }
}

}  // namespace kmboot::cli
