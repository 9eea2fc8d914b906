#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "testutil.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kmboot/cli.hpp"
#include "kmboot/covariance.hpp"
#include "kmboot/step_function.hpp"

using json = nlohmann::json;
using kmboot::cli::RunConfig;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "cli_test_" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kReferenceCsv = "time,status\n1,1\n2,0\n3,1\n";

// Minimal structural validator for the subset of JSON Schema the shipped
// schema uses: type (string or list), required, properties, items, enum.
bool matches_type(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

void assert_schema(const json& value, const json& schema) {
  if (schema.contains("type")) {
    const auto& t = schema["type"];
    bool ok = false;
    if (t.is_string()) ok = matches_type(value, t.get<std::string>());
    else
      for (const auto& alt : t) ok = ok || matches_type(value, alt.get<std::string>());
    REQUIRE_MESSAGE(ok, "value ", value.dump(), " has wrong type for ", t.dump());
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& alt : schema["enum"]) ok = ok || value == alt;
    REQUIRE_MESSAGE(ok, "value not in enum: ", value.dump());
  }
  if (schema.contains("required"))
    for (const auto& key : schema["required"])
      REQUIRE_MESSAGE(value.contains(key.get<std::string>()), "missing key ",
                      key.get<std::string>());
  if (schema.contains("properties") && value.is_object())
    for (const auto& [key, sub] : schema["properties"].items())
      if (value.contains(key)) assert_schema(value.at(key), sub);
  if (schema.contains("items") && value.is_array())
    for (const auto& item : value) assert_schema(item, schema["items"]);
}

json load_schema() {
  std::ifstream in(std::string(KMBOOT_SOURCE_DIR) + "/schemas/output.schema.json");
  REQUIRE(in.good());
  return json::parse(in);
}

kmboot::StepFunction table_to_step(const json& table) {
  std::vector<double> bp, vals;
  for (const auto& row : table.at("rows")) {
    bp.push_back(row.at("t").get<double>());
    vals.push_back(row.at("value").get<double>());
  }
  return kmboot::StepFunction(table.at("initial_value").get<double>(), bp, vals);
}

}  // namespace

TEST_CASE("ingest parses the reference sample") {
  const auto path = write_temp("ref.csv", kReferenceCsv);
  std::vector<std::string> warnings;
  const auto sample = kmboot::cli::ingest(path, &warnings);
  REQUIRE(sample.size() == 3);
  CHECK(sample.records[0].time == 1.0);
  CHECK(sample.records[0].status == kmboot::Status::event);
  CHECK(sample.records[1].status == kmboot::Status::censored);
  CHECK(warnings.empty());
  std::remove(path.c_str());
}

TEST_CASE("ingest diagnostics carry line numbers") {
  const auto nonpositive = write_temp("bad1.csv", "time,status\n0,1\n");
  CHECK_THROWS_WITH_AS(kmboot::cli::ingest(nonpositive),
                       doctest::Contains("line 2"), std::invalid_argument);
  std::remove(nonpositive.c_str());

  const auto unknown = write_temp("bad2.csv", "time,status\n1,2\n");
  CHECK_THROWS_WITH_AS(kmboot::cli::ingest(unknown),
                       doctest::Contains("unknown status"), std::invalid_argument);
  std::remove(unknown.c_str());

  const auto empty = write_temp("bad3.csv", "");
  CHECK_THROWS_WITH_AS(kmboot::cli::ingest(empty), doctest::Contains("empty"),
                       std::invalid_argument);
  std::remove(empty.c_str());

  const auto malformed = write_temp("bad4.csv", "time,status\n1,1,9\n");
  CHECK_THROWS_AS(kmboot::cli::ingest(malformed), std::invalid_argument);
  std::remove(malformed.c_str());
}

TEST_CASE("ingest warns about duplicate times and skips comments") {
  const auto path = write_temp("dup.csv", "# comment\ntime,status\n1,1\n1,0\n\n2,1\n");
  std::vector<std::string> warnings;
  const auto sample = kmboot::cli::ingest(path, &warnings);
  CHECK(sample.size() == 3);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("duplicate") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("fit output carries the reference values and round-trips exactly") {
  const auto path = write_temp("fit.csv", kReferenceCsv);
  RunConfig config;
  config.command = "fit";
  config.input_path = path;
  const json doc = kmboot::cli::execute(config);

  CHECK(doc.at("command") == "fit");
  CHECK(doc.at("n") == 3);
  const json& km = doc.at("result").at("tables").at("km");
  CHECK(km.at("initial_value") == 1.0);
  REQUIRE(km.at("rows").size() == 2);
  CHECK(km.at("rows")[0].at("t") == 1.0);
  CHECK(km.at("rows")[0].at("value").get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(km.at("rows")[1].at("t") == 3.0);
  CHECK(km.at("rows")[1].at("value") == 0.0);

  // serialize/parse round trip reconstructs every table bit for bit
  const json reparsed = json::parse(doc.dump());
  const auto fit = kmboot::km_fit(kmboot::cli::ingest(path));
  CHECK(table_to_step(reparsed.at("result").at("tables").at("km")) == fit.km);
  CHECK(table_to_step(reparsed.at("result").at("tables").at("na")) == fit.na);
  CHECK(table_to_step(reparsed.at("result").at("tables").at("censor_km")) ==
        fit.censor_km);
  CHECK(table_to_step(reparsed.at("result").at("tables").at("sigma2")) ==
        kmboot::sigma2_hat(fit));
  std::remove(path.c_str());
}

TEST_CASE("check-conditions reproduces the hand value") {
  const auto path = write_temp("cond.csv", kReferenceCsv);
  RunConfig config;
  config.command = "check-conditions";
  config.input_path = path;
  const json doc = kmboot::cli::execute(config);
  const json& diags = doc.at("result").at("diagnostics");
  REQUIRE(diags.size() == 2);
  CHECK(diags[0].at("power") == 1);
  CHECK(diags[0].at("value").get<double>() == doctest::Approx(5.0 / 3.0));
  CHECK(diags[0].at("zero_denominator") == false);
  CHECK(diags[1].at("power") == 3);
  std::remove(path.c_str());
}

TEST_CASE("outputs validate against the shipped schema") {
  const json schema = load_schema();
  const auto data = write_temp("schema.csv",
                               "time,status\n0.2,1\n0.5,0\n0.7,1\n0.9,1\n1.4,0\n1.7,1\n");
  const auto scenario =
      write_temp("schema.scn", "experiment = jump_inequality\ntrials = 50\nseed = 5\n");

  for (const std::string command : {"fit", "band", "gini", "check-conditions", "simulate"}) {
    RunConfig config;
    config.command = command;
    config.input_path = command == "simulate" ? scenario : data;
    config.replicates = 20;
    config.seed = 99;
    if (command == "band") config.t2 = 0.8;
    const json doc = kmboot::cli::execute(config);
    assert_schema(doc, schema);
  }
  std::remove(data.c_str());
  std::remove(scenario.c_str());
}

TEST_CASE("band command output is byte-identical across runs and thread caps") {
  const auto path = write_temp(
      "det.csv", "time,status\n0.2,1\n0.5,0\n0.7,1\n0.9,1\n1.4,0\n1.7,1\n2.0,1\n");
  RunConfig config;
  config.command = "band";
  config.input_path = path;
  config.seed = 7;
  config.alpha = 0.05;
  config.replicates = 200;
  config.t1 = 0.0;
  config.t2 = 0.9;

  config.threads = 1;
  const std::string a = kmboot::cli::execute(config).dump(2);
  config.threads = 4;
  const std::string b = kmboot::cli::execute(config).dump(2);
  CHECK(a == b);
  std::remove(path.c_str());
}

TEST_CASE("automatic t2 is reported") {
  const auto path = write_temp("auto.csv", kReferenceCsv);
  RunConfig config;
  config.command = "band";
  config.input_path = path;
  config.seed = 3;
  config.replicates = 10;
  // t2 left unset: suggestion uses the survival threshold
  const json doc = kmboot::cli::execute(config);
  CHECK(doc.at("result").at("t2_auto") == true);
  CHECK(doc.at("result").at("t2").get<double>() == 1.0);
  bool mentioned = false;
  for (const auto& w : doc.at("warnings"))
    mentioned = mentioned || w.get<std::string>().find("t2") != std::string::npos;
  CHECK(mentioned);
  std::remove(path.c_str());
}

TEST_CASE("gini command reports the interval") {
  const auto path = write_temp("gini.csv", "time,status\n1,1\n2,1\n4,1\n8,1\n");
  RunConfig config;
  config.command = "gini";
  config.input_path = path;
  config.seed = 11;
  config.replicates = 50;
  const json doc = kmboot::cli::execute(config);
  const json& r = doc.at("result");
  CHECK(r.at("lower").get<double>() <= r.at("estimate").get<double>());
  CHECK(r.at("estimate").get<double>() <= r.at("upper").get<double>());
  CHECK(doc.at("B") == 50);
  std::remove(path.c_str());
}

TEST_CASE("a missing seed is generated and reported") {
  const auto path = write_temp("seedless.csv", kReferenceCsv);
  RunConfig config;
  config.command = "gini";
  config.input_path = path;
  config.replicates = 5;
  const json doc = kmboot::cli::execute(config);
  CHECK(doc.at("seed").is_number());
  // deterministic commands report seed 0
  config.command = "fit";
  CHECK(kmboot::cli::execute(config).at("seed") == 0);
  std::remove(path.c_str());
}

TEST_CASE("csv rendering") {
  const auto path = write_temp("csv.csv", kReferenceCsv);
  RunConfig config;
  config.command = "fit";
  config.input_path = path;
  config.format = "csv";
  const std::string text = kmboot::cli::to_csv(kmboot::cli::execute(config));
  CHECK(text.find("function,t,value,value_left") == 0);
  CHECK(text.find("km,0,1.0,1.0") != std::string::npos);
  CHECK(text.find("km,3.0,0.0,") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("run maps failures to exit codes and error documents") {
  RunConfig config;
  config.command = "fit";
  config.input_path = "does_not_exist.csv";
  config.output_path = "cli_test_error.json";
  CHECK(kmboot::cli::run(config) == 2);
  const json err = json::parse(slurp("cli_test_error.json"));
  CHECK(err.at("error").at("code") == "validation");
  std::remove("cli_test_error.json");

  // t2 beyond the estimator support is a validation failure
  const auto path = write_temp("exit.csv", "time,status\n1,1\n2,1\n");
  config.input_path = path;
  config.command = "band";
  config.seed = 1;
  config.replicates = 5;
  config.t2 = 2.0;
  config.output_path = "cli_test_error2.json";
  CHECK(kmboot::cli::run(config) == 2);
  std::remove("cli_test_error2.json");
  std::remove(path.c_str());
}

TEST_CASE("degenerate bootstrap exits with code 3") {
  const auto path = write_temp("deg.csv", "time,status\n1,1\n2,0\n");
  RunConfig config;
  config.command = "band";
  config.input_path = path;
  config.replicates = 1;
  config.t1 = 0.0;
  config.t2 = 1.5;
  config.output_path = "cli_test_deg.json";
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    config.seed = seed;
    const int code = kmboot::cli::run(config);
    if (code == 0) continue;
    CHECK(code == 3);
    const json err = json::parse(slurp("cli_test_deg.json"));
    CHECK(err.at("error").at("code") == "degenerate_bootstrap");
    std::remove("cli_test_deg.json");
    std::remove(path.c_str());
    return;
  }
  FAIL("no degenerate seed found");
}

TEST_CASE("scenario files drive the simulator") {
  const auto scenario = write_temp("scn.cfg",
                                   "experiment = event_fraction\n"
                                   "survival = uniform 0 1\n"
                                   "censoring = uniform 0 2\n"
                                   "n = 2000\n"
                                   "seed = 21\n");
  RunConfig config;
  config.command = "simulate";
  config.input_path = scenario;
  const json doc = kmboot::cli::execute(config);
  CHECK(doc.at("seed") == 21);
  CHECK(doc.at("result").at("within_4_sigma") == true);
  CHECK(doc.at("result").at("expected").get<double>() == doctest::Approx(0.75));
  std::remove(scenario.c_str());

  const auto bad = write_temp("scn_bad.cfg", "experiment = coverage\nunknown_key = 3\n");
  CHECK_THROWS_WITH_AS(
      [&] {
        RunConfig c;
        c.command = "simulate";
        c.input_path = bad;
        kmboot::cli::execute(c);
      }(),
      doctest::Contains("unknown scenario key"), std::invalid_argument);
  std::remove(bad.c_str());
}

TEST_CASE("simulate scenarios are reproducible byte for byte") {
  const auto scenario = write_temp("scn_rep.cfg",
                                   "experiment = coverage\n"
                                   "band = gini\n"
                                   "survival = uniform 0 1\n"
                                   "censoring = none\n"
                                   "n = 40\nB = 30\nalpha = 0.05\nreps = 10\nseed = 17\n");
  RunConfig config;
  config.command = "simulate";
  config.input_path = scenario;
  config.threads = 1;
  const std::string a = kmboot::cli::execute(config).dump();
  config.threads = 3;
  const std::string b = kmboot::cli::execute(config).dump();
  CHECK(a == b);
  std::remove(scenario.c_str());
}
