#include "zdq/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace zdq {

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& where, const std::string& what) {
  fail(errc::config_error, "config: " + where + ": " + what);
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) config_fail(where, "unknown key \"" + key + "\"");
}

Matrix parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) config_fail(where, "expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) config_fail(where, "expected rows to be arrays");
    rows.push_back(row.get<std::vector<double>>());
  }
  return Matrix::from_rows(rows);
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
    rows.push_back(row);
  }
  return rows;
}

ExperimentConfig parse_json(const json& j) {
  if (!j.is_object()) config_fail("top level", "expected an object");
  reject_unknown(j,
                 {"version", "model", "distortion", "M", "channel", "grid_resolution", "solver",
                  "horizons", "oracle_cap", "seed", "num_runs", "out_dir"},
                 "top level");
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"] != 1)
    config_fail("version", "expected version 1");

  ExperimentConfig cfg;

  if (!j.contains("model")) config_fail("model", "missing");
  const json& jm = j["model"];
  reject_unknown(jm, {"transition", "initial"}, "model");
  if (!jm.contains("transition")) config_fail("model.transition", "missing");
  Matrix p = parse_matrix(jm["transition"], "model.transition");
  Belief initial;
  if (!jm.contains("initial") || (jm["initial"].is_string() && jm["initial"] == "stationary")) {
    cfg.stationary_start = true;
    MarkovModel probe;
    probe.num_states = p.rows;
    probe.transition = p;
    probe.initial = Belief(std::vector<double>(p.rows, 1.0 / p.rows));
    validate(probe);
    initial = stationary_distribution(probe);
  } else if (jm["initial"].is_array()) {
    initial = Belief(jm["initial"].get<std::vector<double>>());
  } else {
    config_fail("model.initial", "expected an array or \"stationary\"");
  }
  cfg.model = make_model(std::move(p), std::move(initial));

  if (!j.contains("M") || !j["M"].is_number_integer() || j["M"].get<int>() < 1)
    config_fail("M", "expected a positive integer");
  cfg.num_symbols = j["M"].get<int>();

  if (!j.contains("distortion") || (j["distortion"].is_string() && j["distortion"] == "hamming")) {
    cfg.distortion = DistortionSpec::hamming(cfg.model.num_states);
  } else if (j["distortion"].is_object()) {
    reject_unknown(j["distortion"], {"matrix"}, "distortion");
    if (!j["distortion"].contains("matrix")) config_fail("distortion", "missing matrix");
    Matrix d = parse_matrix(j["distortion"]["matrix"], "distortion.matrix");
    if (d.rows != cfg.model.num_states)
      config_fail("distortion.matrix", "row count must equal the number of source states");
    cfg.distortion = DistortionSpec::from_matrix(std::move(d));
  } else {
    config_fail("distortion", "expected \"hamming\" or {\"matrix\": ...}");
  }

  if (j.contains("channel")) {
    const json& jc = j["channel"];
    if (jc.is_string() && jc == "noiseless") {
      cfg.channel.reset();
    } else if (jc.is_object() && jc.contains("bsc")) {
      reject_unknown(jc, {"bsc"}, "channel");
      if (cfg.num_symbols != 2) config_fail("channel.bsc", "bsc needs M = 2");
      cfg.channel = Channel::bsc(jc["bsc"].get<double>());
    } else if (jc.is_object() && jc.contains("matrix")) {
      reject_unknown(jc, {"matrix"}, "channel");
      Matrix t = parse_matrix(jc["matrix"], "channel.matrix");
      if (t.rows != cfg.num_symbols)
        config_fail("channel.matrix", "row count must equal M");
      cfg.channel = Channel::from_matrix(std::move(t));
    } else {
      config_fail("channel", "expected \"noiseless\", {\"bsc\": eps} or {\"matrix\": ...}");
    }
  }

  if (j.contains("grid_resolution")) {
    cfg.grid_resolution = j["grid_resolution"].get<int>();
    if (cfg.grid_resolution < 1) config_fail("grid_resolution", "must be at least 1");
  }

  if (j.contains("solver")) {
    const json& js = j["solver"];
    reject_unknown(js, {"method", "tol", "max_iters", "damping", "vd_max_k", "action_cap",
                        "tree_cap"},
                   "solver");
    if (js.contains("method")) {
      std::string method = js["method"].get<std::string>();
      if (method == "rvi") cfg.method = AverageCostMethod::rvi;
      else if (method == "vanishing_discount") cfg.method = AverageCostMethod::vanishing_discount;
      else config_fail("solver.method", "expected \"rvi\" or \"vanishing_discount\"");
    }
    if (js.contains("tol")) cfg.solver.tol = js["tol"].get<double>();
    if (cfg.solver.tol <= 0.0) config_fail("solver.tol", "must be positive");
    if (js.contains("max_iters")) cfg.solver.max_iters = js["max_iters"].get<int>();
    if (js.contains("damping")) cfg.solver.damping = js["damping"].get<double>();
    if (cfg.solver.damping <= 0.0 || cfg.solver.damping > 1.0)
      config_fail("solver.damping", "must lie in (0,1]");
    if (js.contains("vd_max_k")) cfg.solver.vd_max_k = js["vd_max_k"].get<int>();
    if (js.contains("action_cap")) cfg.solver.action_cap = js["action_cap"].get<std::int64_t>();
    if (js.contains("tree_cap")) cfg.solver.tree_cap = js["tree_cap"].get<std::int64_t>();
  }

  if (j.contains("horizons")) {
    cfg.horizons = j["horizons"].get<std::vector<int>>();
    for (int t : cfg.horizons)
      if (t < 1) config_fail("horizons", "entries must be at least 1");
  }
  if (j.contains("oracle_cap")) cfg.oracle_cap = j["oracle_cap"].get<std::int64_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("num_runs")) {
    cfg.num_runs = j["num_runs"].get<int>();
    if (cfg.num_runs < 1) config_fail("num_runs", "must be at least 1");
  }
  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  return cfg;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset -> line number for the message.
    size_t line = 1;
    for (size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    fail(errc::config_error, "config: parse error at line " + std::to_string(line) + ": " + e.what());
  }
  try {
    return parse_json(j);
  } catch (const json::exception& e) {
    fail(errc::config_error, std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::config_error, "config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json j;
  j["version"] = 1;
  j["model"]["transition"] = matrix_to_json(cfg.model.transition);
  if (cfg.stationary_start) j["model"]["initial"] = "stationary";
  else j["model"]["initial"] = cfg.model.initial.probs;
  j["M"] = cfg.num_symbols;
  j["distortion"]["matrix"] = matrix_to_json(cfg.distortion.d);
  if (cfg.channel) j["channel"]["matrix"] = matrix_to_json(cfg.channel->t);
  else j["channel"] = "noiseless";
  j["grid_resolution"] = cfg.grid_resolution;
  j["solver"]["method"] =
      cfg.method == AverageCostMethod::rvi ? "rvi" : "vanishing_discount";
  j["solver"]["tol"] = cfg.solver.tol;
  j["solver"]["max_iters"] = cfg.solver.max_iters;
  j["solver"]["damping"] = cfg.solver.damping;
  j["solver"]["vd_max_k"] = cfg.solver.vd_max_k;
  j["solver"]["action_cap"] = cfg.solver.action_cap;
  j["solver"]["tree_cap"] = cfg.solver.tree_cap;
  j["horizons"] = cfg.horizons;
  j["oracle_cap"] = cfg.oracle_cap;
  j["seed"] = cfg.seed;
  j["num_runs"] = cfg.num_runs;
  j["out_dir"] = cfg.out_dir;
  return j.dump(2) + "\n";
}

}  // namespace zdq
