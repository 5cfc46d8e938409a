#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "qdarwin/experiment.hpp"
#include "qdarwin/registers.hpp"

namespace qdarwin::harness {

const std::vector<std::string>& scenario_catalog() {
  static const std::vector<std::string> names{"fig1_zurek",  "fig3_dissipative_pips", "fig4_alpha_sweep",
                                              "fig5_order_diff", "fig6_kqubit",       "table1",
                                              "attractor_report"};
  return names;
}

namespace {

std::string catalog_list() {
  std::string s;
  for (const auto& n : scenario_catalog()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
  return s;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(s, &used);
  } catch (...) {
    return false;
  }
  return used == s.size();
}

// plain numbers or  [c][*]pi[/d]  e.g. "pi/2", "2*pi/3", "0.5pi"
bool parse_angle(std::string s, double& out) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (parse_number(s, out)) return true;
  const auto at = s.find("pi");
  if (at == std::string::npos) return false;
  std::string head = s.substr(0, at), tail = s.substr(at + 2);
  double coef = 1.0, div = 1.0;
  if (!head.empty() && head.back() == '*') head.pop_back();
  if (head == "-") coef = -1.0;
  else if (!head.empty() && !parse_number(head, coef)) return false;
  if (!tail.empty()) {
    if (tail.front() != '/' || !parse_number(tail.substr(1), div) || div == 0.0) return false;
  }
  out = coef * pi / div;
  return true;
}

[[noreturn]] void parse_fail(const YAML::Node& node, const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(node.Mark().line + 1) + ", field '" + key + "': " + why);
}

std::string scalar(const YAML::Node& v, const std::string& key) {
  if (!v.IsScalar()) parse_fail(v, key, "expected a scalar");
  return trim(v.Scalar());
}

double as_real(const YAML::Node& v, const std::string& key) {
  double x;
  if (!parse_number(scalar(v, key), x) || !std::isfinite(x)) parse_fail(v, key, "expected a number");
  return x;
}

double as_angle(const YAML::Node& v, const std::string& key) {
  double x;
  if (!parse_angle(scalar(v, key), x) || !std::isfinite(x)) parse_fail(v, key, "expected an angle (number or e.g. pi/2)");
  return x;
}

long as_int(const YAML::Node& v, const std::string& key) {
  const std::string s = scalar(v, key);
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(s, &used);
  } catch (...) {
    parse_fail(v, key, "expected an integer");
  }
  if (used != s.size()) parse_fail(v, key, "expected an integer");
  return x;
}

std::uint64_t as_u64(const YAML::Node& v, const std::string& key) {
  const std::string s = scalar(v, key);
  std::size_t used = 0;
  std::uint64_t x = 0;
  if (s.empty() || s[0] == '-') parse_fail(v, key, "expected an unsigned integer");
  try {
    x = std::stoull(s, &used);
  } catch (...) {
    parse_fail(v, key, "expected an unsigned integer");
  }
  if (used != s.size()) parse_fail(v, key, "expected an unsigned integer");
  return x;
}

template <class T, class F>
std::vector<T> as_list(const YAML::Node& v, const std::string& key, F&& each) {
  if (!v.IsSequence()) parse_fail(v, key, "expected a list");
  std::vector<T> out;
  for (const auto& item : v) out.push_back(T(each(item, key)));
  return out;
}

void range(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::RangeError, what);
}

}  // namespace

ExperimentConfig default_config(const std::string& scenario) {
  const auto& cat = scenario_catalog();
  if (std::find(cat.begin(), cat.end(), scenario) == cat.end())
    throw Error(ErrorCode::ConfigInvalid, "unknown scenario '" + scenario + "'; available: " + catalog_list());
  ExperimentConfig c;
  c.scenario = scenario;
  if (scenario == "fig1_zurek") {
    c.n = 8;
    c.gate = GateSpec{pi / 2, 0.0, 0.0, 0.0, OperatorOrder::Total};
  } else if (scenario == "attractor_report") {
    c.n = 2;
  }
  return c;
}

void check_config(const ExperimentConfig& c) {
  const auto& cat = scenario_catalog();
  if (std::find(cat.begin(), cat.end(), c.scenario) == cat.end())
    throw Error(ErrorCode::ConfigInvalid, "unknown scenario '" + c.scenario + "'; available: " + catalog_list());
  range(c.k >= 1 && c.n >= 1, "k and n must be >= 1");
  range(c.k + c.n <= kMaxQubits, "k+n must not exceed " + std::to_string(kMaxQubits));
  try {
    validate(c.gate);
  } catch (const Error& e) {
    throw Error(ErrorCode::RangeError, e.what());
  }
  try {
    parse_initial_family(c.initial);
  } catch (const Error&) {
    throw Error(ErrorCode::ConfigInvalid, "field 'initial': unknown family '" + c.initial + "'");
  }
  if (c.probabilities != "uniform" && c.probabilities != "linear")
    throw Error(ErrorCode::ConfigInvalid, "field 'probabilities': expected uniform or linear");
  range(c.a_squared >= 0.0 && c.a_squared <= 1.0, "a_squared must lie in [0,1]");
  range(c.max_iterations >= 1, "max_iterations must be >= 1");
  range(c.checkpoint_stride >= 1, "checkpoint_stride must be >= 1");
  range(c.epsilon > 0.0, "epsilon must be > 0");
  range(c.iterations >= 0, "iterations must be >= 0");
  range(c.orderings >= 1, "orderings must be >= 1");
  range(c.plateau_tolerance > 0.0 && c.plateau_tolerance < 1.0, "plateau_tolerance must lie in (0,1)");
  range(c.threads >= 1, "threads must be >= 1");
  range(c.sweep_points >= 1, "sweep_points must be >= 1");
  range(!c.schedule.empty(), "schedule must not be empty");
  for (long s : c.schedule) range(s >= 0, "schedule entries must be >= 0");
  range(std::is_sorted(c.schedule.begin(), c.schedule.end()), "schedule must be ascending");
  range(c.n_min >= 1 && c.n_min <= c.n_max && c.n_max + 1 <= kMaxQubits, "table rows need 1 <= n_min <= n_max <= 11");
  range(c.iterated_max_n >= 0, "iterated_max_n must be >= 0");
  range(!c.ks.empty(), "ks must not be empty");
  for (int k : c.ks) range(k >= 1 && k + c.n <= kMaxQubits, "ks entries must satisfy 1 <= k, k+n <= 12");
  if (c.scenario == "attractor_report") range(c.k + c.n <= 6, "attractor_report needs k+n <= 6");
  if (c.out.empty()) throw Error(ErrorCode::ConfigInvalid, "field 'out' must not be empty");
}

ExperimentConfig validate_config(std::string_view raw, const std::string& scenario) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(raw));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull() && !scenario.empty()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw Error(ErrorCode::ParseError, "line 1: expected key: value pairs");
  if (scenario.empty() && !root["scenario"])
    throw Error(ErrorCode::ConfigInvalid, "field 'scenario' is required; available: " + catalog_list());
  ExperimentConfig c = default_config(scenario.empty() ? scalar(root["scenario"], "scenario") : scenario);

  static const std::set<std::string> known{
      "scenario", "k", "n", "phi", "alpha", "alpha1", "alpha2", "gamma", "order", "initial", "a_squared",
      "probabilities", "max_iterations", "checkpoint_stride", "epsilon", "iterations", "orderings", "seed",
      "plateau_tolerance", "out", "format", "threads", "sweep_points", "schedule", "n_min", "n_max",
      "iterated_max_n", "ks"};
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    if (!known.count(key)) throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(kv.first.Mark().line + 1) + ": unknown field '" + key + "'");
  }
  if (root["alpha"] && (root["alpha1"] || root["alpha2"]))
    throw Error(ErrorCode::ConfigInvalid, "field 'alpha' conflicts with alpha1/alpha2");

  auto get = [&](const char* key) { return root[key]; };
  if (auto v = get("k")) c.k = int(as_int(v, "k"));
  if (auto v = get("n")) c.n = int(as_int(v, "n"));
  if (auto v = get("phi")) c.gate.phi = as_angle(v, "phi");
  if (auto v = get("alpha")) c.gate.alpha1 = c.gate.alpha2 = as_angle(v, "alpha");
  if (auto v = get("alpha1")) c.gate.alpha1 = as_angle(v, "alpha1");
  if (auto v = get("alpha2")) c.gate.alpha2 = as_angle(v, "alpha2");
  if (auto v = get("gamma")) c.gate.gamma = as_angle(v, "gamma");
  if (auto v = get("order")) {
    const std::string o = scalar(v, "order");
    if (o == "Tot" || o == "tot" || o == "total") c.gate.order = OperatorOrder::Total;
    else if (o == "Reversed" || o == "reversed") c.gate.order = OperatorOrder::Reversed;
    else parse_fail(v, "order", "expected Tot or Reversed");
  }
  if (auto v = get("initial")) c.initial = scalar(v, "initial");
  if (auto v = get("a_squared")) c.a_squared = as_real(v, "a_squared");
  if (auto v = get("probabilities")) c.probabilities = scalar(v, "probabilities");
  if (auto v = get("max_iterations")) c.max_iterations = as_int(v, "max_iterations");
  if (auto v = get("checkpoint_stride")) c.checkpoint_stride = as_int(v, "checkpoint_stride");
  if (auto v = get("epsilon")) c.epsilon = as_real(v, "epsilon");
  if (auto v = get("iterations")) c.iterations = as_int(v, "iterations");
  if (auto v = get("orderings")) c.orderings = int(as_int(v, "orderings"));
  if (auto v = get("seed")) c.seed = as_u64(v, "seed");
  if (auto v = get("plateau_tolerance")) c.plateau_tolerance = as_real(v, "plateau_tolerance");
  if (auto v = get("out")) c.out = scalar(v, "out");
  if (auto v = get("format")) {
    const std::string f = scalar(v, "format");
    if (f == "csv") c.format = Format::Csv;
    else if (f == "json") c.format = Format::Json;
    else parse_fail(v, "format", "expected csv or json");
  }
  if (auto v = get("threads")) c.threads = int(as_int(v, "threads"));
  if (auto v = get("sweep_points")) c.sweep_points = int(as_int(v, "sweep_points"));
  if (auto v = get("schedule")) c.schedule = as_list<long>(v, "schedule", as_int);
  if (auto v = get("n_min")) c.n_min = int(as_int(v, "n_min"));
  if (auto v = get("n_max")) c.n_max = int(as_int(v, "n_max"));
  if (auto v = get("iterated_max_n")) c.iterated_max_n = int(as_int(v, "iterated_max_n"));
  if (auto v = get("ks")) c.ks = as_list<int>(v, "ks", as_int);
  check_config(c);
  return c;
}

std::string config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["scenario"] = c.scenario;
  j["k"] = c.k;
  j["n"] = c.n;
  j["phi"] = c.gate.phi;
  j["alpha1"] = c.gate.alpha1;
  j["alpha2"] = c.gate.alpha2;
  j["gamma"] = c.gate.gamma;
  j["order"] = order_name(c.gate.order);
  j["initial"] = c.initial;
  j["a_squared"] = c.a_squared;
  j["probabilities"] = c.probabilities;
  j["max_iterations"] = c.max_iterations;
  j["checkpoint_stride"] = c.checkpoint_stride;
  j["epsilon"] = c.epsilon;
  j["iterations"] = c.iterations;
  j["orderings"] = c.orderings;
  j["seed"] = c.seed;
  j["plateau_tolerance"] = c.plateau_tolerance;
  j["out"] = c.out;
  j["format"] = c.format == Format::Csv ? "csv" : "json";
  j["threads"] = c.threads;
  j["sweep_points"] = c.sweep_points;
  j["schedule"] = c.schedule;
  j["n_min"] = c.n_min;
  j["n_max"] = c.n_max;
  j["iterated_max_n"] = c.iterated_max_n;
  j["ks"] = c.ks;
  return j.dump();
}

}  // namespace qdarwin::harness
