#include "zdq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace zdq {

using nlohmann::json;

std::string fmt_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_f12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12f", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::config_error, "cannot write " + path);
  out << body;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::config_error, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void save_triplet(const CanonicalTriplet& t, const std::string& path) {
  json j;
  j["format"] = "zdq-triplet";
  j["version"] = 1;
  j["num_states"] = t.h.grid->num_states();
  j["grid_resolution"] = t.h.grid->resolution();
  j["mode"] = t.mode == DedupMode::partition ? "partition" : "labeled";
  j["gain"] = t.gain;
  j["reference_index"] = t.reference_index;
  j["values"] = t.h.values;
  j["policy"] = t.policy;
  json actions = json::array();
  for (const auto& q : t.actions) {
    json labels = json::array();
    for (int l : q.labels) labels.push_back(l + 1);
    actions.push_back(labels);
  }
  j["actions"] = actions;
  j["M"] = t.actions.empty() ? 0 : t.actions[0].num_symbols;
  write_text_file(path, j.dump(2) + "\n");
}

CanonicalTriplet load_triplet(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    fail(errc::config_error, "triplet file: " + std::string(e.what()));
  }
  if (!j.contains("format") || j["format"] != "zdq-triplet" || j["version"] != 1)
    fail(errc::config_error, "not a version-1 triplet file: " + path);

  CanonicalTriplet t;
  t.h.grid = BeliefGrid::make(j["grid_resolution"].get<int>(), j["num_states"].get<int>());
  t.h.values = j["values"].get<std::vector<double>>();
  t.gain = j["gain"].get<double>();
  t.reference_index = j["reference_index"].get<int>();
  t.policy = j["policy"].get<std::vector<int>>();
  t.mode = j["mode"] == "partition" ? DedupMode::partition : DedupMode::labeled;
  int m = j["M"].get<int>();
  for (const auto& labels : j["actions"]) {
    Quantizer q;
    q.num_symbols = m;
    for (const auto& l : labels) q.labels.push_back(l.get<int>() - 1);
    t.actions.push_back(std::move(q));
  }
  if (static_cast<int>(t.h.values.size()) != t.h.grid->size() ||
      t.policy.size() != t.h.values.size())
    fail(errc::config_error, "triplet file arrays do not match the grid size");
  for (int a : t.policy)
    if (a < 0 || a >= static_cast<int>(t.actions.size()))
      fail(errc::config_error, "triplet policy references a missing action");
  return t;
}

void save_coupling(const CouplingReport& r, const std::string& path) {
  json j;
  j["format"] = "zdq-coupling";
  j["version"] = 1;
  j["num_states"] = r.num_states;
  j["reference_state"] = r.reference_state + 1;
  j["k1"] = r.k1;
  j["d_inf"] = r.d_inf;
  j["k"] = r.k;
  json rows = json::array();
  for (int x = 0; x < r.num_states; ++x) {
    json row = json::array();
    for (int y = 0; y < r.num_states; ++y) row.push_back(r.expected_tau.at(x, y));
    rows.push_back(row);
  }
  j["expected_tau"] = rows;
  write_text_file(path, j.dump(2) + "\n");
}

CouplingReport load_coupling(const std::string& path) {
  json j = json::parse(read_text_file(path));
  if (!j.contains("format") || j["format"] != "zdq-coupling" || j["version"] != 1)
    fail(errc::config_error, "not a version-1 coupling file: " + path);
  CouplingReport r;
  r.num_states = j["num_states"].get<int>();
  r.reference_state = j["reference_state"].get<int>() - 1;
  r.k1 = j["k1"].get<double>();
  r.d_inf = j["d_inf"].get<double>();
  r.k = j["k"].get<double>();
  r.expected_tau = Matrix(r.num_states, r.num_states);
  for (int x = 0; x < r.num_states; ++x)
    for (int y = 0; y < r.num_states; ++y)
      r.expected_tau.at(x, y) = j["expected_tau"][x][y].get<double>();
  return r;
}

std::string tau_matrix_csv(const Matrix& tau) {
  std::string out = "x,y,expected_tau\n";
  for (int x = 0; x < tau.rows; ++x)
    for (int y = 0; y < tau.cols; ++y)
      out += std::to_string(x + 1) + "," + std::to_string(y + 1) + "," +
             fmt_g12(tau.at(x, y)) + "\n";
  return out;
}

std::string trace_csv(const SessionTrace& trace, const std::string& params_comment) {
  std::string out = "# " + params_comment + "\n";
  const int n = trace.encoder_belief.empty() ? 0 : trace.encoder_belief[0].size();
  out += "t,x,q,q_received,xhat,distortion";
  for (int i = 0; i < n; ++i) out += ",belief_" + std::to_string(i + 1);
  out += "\n";
  for (size_t t = 0; t < trace.x.size(); ++t) {
    out += std::to_string(t) + "," + std::to_string(trace.x[t] + 1) + "," +
           std::to_string(trace.q[t] + 1) + "," + std::to_string(trace.q_received[t] + 1) + "," +
           std::to_string(trace.xhat[t] + 1) + "," + fmt_g12(trace.distortion[t]);
    for (int i = 0; i < n; ++i) out += "," + fmt_f12(trace.encoder_belief[t][i]);
    out += "\n";
  }
  return out;
}

}  // namespace zdq
