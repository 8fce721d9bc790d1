// Copyright 2026 The gridgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRIDGAME_SCENARIO_HPP_
#define GRIDGAME_SCENARIO_HPP_

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "gridgame/constrained.hpp"
#include "gridgame/equilibrium.hpp"
#include "gridgame/errors.hpp"
#include "gridgame/leader.hpp"
#include "gridgame/market.hpp"
#include "gridgame/social.hpp"
#include "gridgame/trace.hpp"

// Scenario orchestration: JSON config ingestion, run dispatch, CSV artifact
// persistence, and plot-ready exports.
//
// File contract (all CSV, all deterministic; numbers carry 12 significant
// digits, rounds are plain integers):
//
//   trajectory.csv  round,w_1..w_N,xi,mu1,S,PoA,W_1..W_N,U_1..U_M
//   demands.csv     round,user,d_1..d_N
//   summary.csv     key,value
//
// The summary's terminal_S and terminal_PoA are formatted by the same
// routine as the trajectory cells, so they match the last row exactly as
// strings.

namespace gridgame {

enum class ScenarioKind {
  kBaseline,        // one record at the leaderless equilibrium
  kBasic,           // fixed-sensitivity leader-following
  kDfa,             // varying-sensitivity leader-following
  kProjectedBasic,  // leader ascent under a box
  kProjectedDfa,    // projected gradient ascent under a box
};

inline std::string scenario_kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kBaseline: return "baseline";
    case ScenarioKind::kBasic: return "basic";
    case ScenarioKind::kDfa: return "dfa";
    case ScenarioKind::kProjectedBasic: return "projected-basic";
    case ScenarioKind::kProjectedDfa: return "projected-dfa";
  }
  throw ConfigError("scenario: unrecognized kind value");
}

inline ScenarioKind parse_scenario_kind(const std::string& name) {
  if (name == "baseline") return ScenarioKind::kBaseline;
  if (name == "basic") return ScenarioKind::kBasic;
  if (name == "dfa") return ScenarioKind::kDfa;
  if (name == "projected-basic") return ScenarioKind::kProjectedBasic;
  if (name == "projected-dfa") return ScenarioKind::kProjectedDfa;
  throw ConfigError("scenario: unknown kind '" + name +
                    "'; expected baseline, basic, dfa, projected-basic or "
                    "projected-dfa");
}

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kBaseline;
  MarketConfig market;
  double leader_start = 0.0;
  std::optional<BoxConstraints> box;
  double eps = 1e-8;
  int max_rounds = 10000;
  bool verify_inner = false;
  bool follower_boxes_active = true;
  std::string out_dir;

  friend bool operator==(const ScenarioSpec& a, const ScenarioSpec& b) {
    if (a.box.has_value() != b.box.has_value()) return false;
    if (a.box && !(*a.box == *b.box)) return false;
    return a.kind == b.kind && a.market == b.market &&
           a.leader_start == b.leader_start && a.eps == b.eps &&
           a.max_rounds == b.max_rounds &&
           a.verify_inner == b.verify_inner &&
           a.follower_boxes_active == b.follower_boxes_active &&
           a.out_dir == b.out_dir;
  }
};

struct RunArtifacts {
  std::filesystem::path trajectory_file;
  std::filesystem::path demands_file;
  std::filesystem::path summary_file;
  double terminal_social = std::numeric_limits<double>::quiet_NaN();
  double terminal_poa = std::numeric_limits<double>::quiet_NaN();
  int rounds = 0;
  bool converged = false;
  bool rationality_ok = false;
  bool assumption1_ok = false;
};

// 12 significant digits; the single formatter behind every numeric cell.
inline std::string format_sig12(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

inline void validate_spec(const ScenarioSpec& spec) {
  spec.market.validate();
  const bool projected = spec.kind == ScenarioKind::kProjectedBasic ||
                         spec.kind == ScenarioKind::kProjectedDfa;
  if (projected && !spec.box) {
    throw ConfigError("box: required for projected scenarios");
  }
  if (!projected && spec.box) {
    throw ConfigError("box: only valid for projected scenarios");
  }
  if (spec.box) spec.box->validate(spec.market.num_ucs);
  if (spec.kind != ScenarioKind::kBaseline &&
      !std::isfinite(spec.leader_start)) {
    throw ConfigError("leader_start: must be finite");
  }
  if (!(spec.eps > 0.0)) {
    throw ConfigError("eps: must be > 0");
  }
  if (spec.max_rounds < 1) {
    throw ConfigError("max_rounds: must be >= 1");
  }
}

namespace detail {

using json = nlohmann::json;

inline double number_field(const json& obj, const std::string& key,
                           const std::string& context) {
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConfigError(context + key + ": expected a number");
  }
  return v.get<double>();
}

inline int integer_field(const json& obj, const std::string& key,
                         const std::string& context) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError(context + key + ": expected an integer");
  }
  return v.get<int>();
}

inline Eigen::VectorXd vector_field(const json& obj, const std::string& key,
                                    const std::string& context) {
  const json& v = obj.at(key);
  if (!v.is_array()) {
    throw ConfigError(context + key + ": expected an array of numbers");
  }
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ConfigError(context + key + "[" + std::to_string(i + 1) +
                        "]: expected a number");
    }
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

// Box sides allow null for an unbounded end.
inline Eigen::VectorXd bound_field(const json& obj, const std::string& key,
                                   int n, double unbounded_value) {
  const json& v = obj.at(key);
  if (!v.is_array() || static_cast<int>(v.size()) != n) {
    throw ConfigError("box." + key + ": expected an array of num_ucs=" +
                      std::to_string(n) + " numbers or nulls");
  }
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    if (v[i].is_null()) {
      out[i] = unbounded_value;
    } else if (v[i].is_number()) {
      out[i] = v[i].get<double>();
    } else {
      throw ConfigError("box." + key + "[" + std::to_string(i + 1) +
                        "]: expected a number or null");
    }
  }
  return out;
}

inline void reject_unknown_keys(const json& obj,
                                const std::vector<std::string>& allowed,
                                const std::vector<std::string>& known,
                                const std::string& kind_name,
                                const std::string& context) {
  for (const auto& item : obj.items()) {
    const std::string& key = item.key();
    bool ok = false;
    for (const auto& a : allowed) {
      if (key == a) { ok = true; break; }
    }
    if (ok) continue;
    for (const auto& k : known) {
      if (key == k) {
        throw ConfigError(context + "key '" + key +
                          "' is not used by scenario kind '" + kind_name +
                          "'");
      }
    }
    throw ConfigError(context + "unknown key '" + key + "'");
  }
}

inline void require_keys(const json& obj,
                         const std::vector<std::string>& required,
                         const std::string& context) {
  for (const auto& key : required) {
    if (!obj.contains(key)) {
      throw ConfigError(context + "missing required key '" + key + "'");
    }
  }
}

inline ScenarioSpec spec_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("config root: expected an object");
  }
  require_keys(doc, {"scenario", "market"}, "");
  if (!doc.at("scenario").is_string()) {
    throw ConfigError("scenario: expected a string");
  }
  ScenarioSpec spec;
  spec.kind = parse_scenario_kind(doc.at("scenario").get<std::string>());
  const std::string kind_name = scenario_kind_name(spec.kind);

  std::vector<std::string> allowed = {"scenario", "market", "out"};
  std::vector<std::string> required = {"scenario", "market"};
  switch (spec.kind) {
    case ScenarioKind::kBaseline:
      break;
    case ScenarioKind::kBasic:
    case ScenarioKind::kDfa:
      allowed.insert(allowed.end(),
                     {"leader_start", "eps", "max_rounds", "verify_inner"});
      required.push_back("leader_start");
      break;
    case ScenarioKind::kProjectedBasic:
      allowed.insert(allowed.end(), {"leader_start", "box", "max_rounds",
                                     "follower_boxes_active"});
      required.insert(required.end(), {"leader_start", "box"});
      break;
    case ScenarioKind::kProjectedDfa:
      allowed.insert(allowed.end(), {"leader_start", "box", "max_rounds"});
      required.insert(required.end(), {"leader_start", "box"});
      break;
  }
  const std::vector<std::string> known = {
      "scenario",  "market",       "out",
      "leader_start", "eps",       "max_rounds",
      "verify_inner", "box",       "follower_boxes_active"};
  reject_unknown_keys(doc, allowed, known, kind_name, "");
  require_keys(doc, required, "");

  const json& market = doc.at("market");
  if (!market.is_object()) {
    throw ConfigError("market: expected an object");
  }
  const std::vector<std::string> market_keys = {
      "num_users", "num_ucs",  "alpha",    "beta",
      "demands",   "cost_quad", "cost_lin", "cost_const"};
  reject_unknown_keys(market, market_keys, market_keys, kind_name,
                      "market: ");
  require_keys(market, market_keys, "market: ");
  spec.market.num_users = integer_field(market, "num_users", "market: ");
  spec.market.num_ucs = integer_field(market, "num_ucs", "market: ");
  spec.market.alpha = number_field(market, "alpha", "market: ");
  spec.market.beta = number_field(market, "beta", "market: ");
  spec.market.demands = vector_field(market, "demands", "market: ");
  spec.market.cost_quad = vector_field(market, "cost_quad", "market: ");
  spec.market.cost_lin = vector_field(market, "cost_lin", "market: ");
  spec.market.cost_const = vector_field(market, "cost_const", "market: ");

  if (doc.contains("leader_start")) {
    spec.leader_start = number_field(doc, "leader_start", "");
  }
  if (doc.contains("eps")) {
    spec.eps = number_field(doc, "eps", "");
  }
  if (doc.contains("max_rounds")) {
    spec.max_rounds = integer_field(doc, "max_rounds", "");
  }
  if (doc.contains("verify_inner")) {
    if (!doc.at("verify_inner").is_boolean()) {
      throw ConfigError("verify_inner: expected a boolean");
    }
    spec.verify_inner = doc.at("verify_inner").get<bool>();
  }
  if (doc.contains("follower_boxes_active")) {
    if (!doc.at("follower_boxes_active").is_boolean()) {
      throw ConfigError("follower_boxes_active: expected a boolean");
    }
    spec.follower_boxes_active = doc.at("follower_boxes_active").get<bool>();
  }
  if (doc.contains("box")) {
    const json& box = doc.at("box");
    if (!box.is_object()) {
      throw ConfigError("box: expected an object with 'lo' and 'hi'");
    }
    reject_unknown_keys(box, {"lo", "hi"}, {"lo", "hi"}, kind_name, "box: ");
    require_keys(box, {"lo", "hi"}, "box: ");
    const int n = spec.market.num_ucs;
    BoxConstraints constraints;
    constraints.lo = bound_field(
        box, "lo", n, -std::numeric_limits<double>::infinity());
    constraints.hi = bound_field(
        box, "hi", n, std::numeric_limits<double>::infinity());
    spec.box = std::move(constraints);
  }
  if (doc.contains("out")) {
    if (!doc.at("out").is_string()) {
      throw ConfigError("out: expected a string");
    }
    spec.out_dir = doc.at("out").get<std::string>();
  }
  validate_spec(spec);
  return spec;
}

}  // namespace detail

inline ScenarioSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file " + path.string());
  }
  std::string text{std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>()};
  if (in.bad()) {
    throw IoError("cannot read config file " + path.string());
  }
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("config parse error at line " + std::to_string(line) +
                      ", column " + std::to_string(column) + ": " + e.what());
  }
  try {
    return detail::spec_from_json(doc);
  } catch (const detail::json::exception& e) {
    throw ConfigError(std::string("config structure error: ") + e.what());
  }
}

inline void write_config(const ScenarioSpec& spec,
                         const std::filesystem::path& path) {
  validate_spec(spec);
  nlohmann::ordered_json doc;
  doc["scenario"] = scenario_kind_name(spec.kind);
  nlohmann::ordered_json market;
  market["num_users"] = spec.market.num_users;
  market["num_ucs"] = spec.market.num_ucs;
  market["alpha"] = spec.market.alpha;
  market["beta"] = spec.market.beta;
  auto to_array = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  market["demands"] = to_array(spec.market.demands);
  market["cost_quad"] = to_array(spec.market.cost_quad);
  market["cost_lin"] = to_array(spec.market.cost_lin);
  market["cost_const"] = to_array(spec.market.cost_const);
  doc["market"] = std::move(market);
  if (spec.kind != ScenarioKind::kBaseline) {
    doc["leader_start"] = spec.leader_start;
  }
  if (spec.kind == ScenarioKind::kBasic || spec.kind == ScenarioKind::kDfa) {
    doc["eps"] = spec.eps;
    doc["verify_inner"] = spec.verify_inner;
  }
  if (spec.kind != ScenarioKind::kBaseline) {
    doc["max_rounds"] = spec.max_rounds;
  }
  if (spec.box) {
    nlohmann::ordered_json box;
    auto to_bounds = [](const Eigen::VectorXd& v) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::isinf(v[i])) {
          arr.push_back(nullptr);
        } else {
          arr.push_back(v[i]);
        }
      }
      return arr;
    };
    box["lo"] = to_bounds(spec.box->lo);
    box["hi"] = to_bounds(spec.box->hi);
    doc["box"] = std::move(box);
  }
  if (spec.kind == ScenarioKind::kProjectedBasic) {
    doc["follower_boxes_active"] = spec.follower_boxes_active;
  }
  if (!spec.out_dir.empty()) {
    doc["out"] = spec.out_dir;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::vector<std::vector<std::string>> read_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  if (in.bad()) {
    throw IoError("cannot read " + path.string());
  }
  return rows;
}

inline void write_lines(const std::filesystem::path& path,
                        const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  for (const auto& line : lines) out << line << '\n';
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

inline void write_trace_files(const ScenarioSpec& spec, const Trace& trace,
                              const RunArtifacts& artifacts) {
  const int n = spec.market.num_ucs;
  const int m = spec.market.num_users;
  std::vector<std::string> lines;
  std::string header = "round";
  for (int k = 1; k <= n; ++k) header += ",w_" + std::to_string(k);
  header += ",xi,mu1,S,PoA";
  for (int k = 1; k <= n; ++k) header += ",W_" + std::to_string(k);
  for (int i = 1; i <= m; ++i) header += ",U_" + std::to_string(i);
  lines.push_back(header);
  for (const TraceRecord& record : trace) {
    std::string row = std::to_string(record.round);
    for (int k = 0; k < n; ++k) row += "," + format_sig12(record.prices[k]);
    row += "," + format_sig12(record.xi);
    row += "," + format_sig12(record.mu1);
    row += "," + format_sig12(record.social);
    row += "," + format_sig12(record.poa);
    for (int k = 0; k < n; ++k) {
      row += "," + format_sig12(record.uc_profits[k]);
    }
    for (int i = 0; i < m; ++i) {
      row += "," + format_sig12(record.user_profits[i]);
    }
    lines.push_back(row);
  }
  write_lines(artifacts.trajectory_file, lines);

  lines.clear();
  header = "round,user";
  for (int k = 1; k <= n; ++k) header += ",d_" + std::to_string(k);
  lines.push_back(header);
  for (const TraceRecord& record : trace) {
    for (int i = 0; i < m; ++i) {
      std::string row =
          std::to_string(record.round) + "," + std::to_string(i + 1);
      for (int k = 0; k < n; ++k) {
        row += "," + format_sig12(record.demands(i, k));
      }
      lines.push_back(row);
    }
  }
  write_lines(artifacts.demands_file, lines);
}

inline void write_summary(const ScenarioSpec& spec, const Trace& trace,
                          const RunArtifacts& artifacts,
                          double optimum_value,
                          const Assumption1Report& assumption1) {
  const auto yesno = [](bool b) { return b ? "true" : "false"; };
  std::vector<std::string> lines;
  lines.push_back("key,value");
  lines.push_back("scenario," + scenario_kind_name(spec.kind));
  lines.push_back("leader_uc,1");
  lines.push_back(std::string("converged,") + yesno(artifacts.converged));
  lines.push_back("rounds," + std::to_string(artifacts.rounds));
  if (!trace.empty()) {
    const TraceRecord& last = trace.back();
    for (int k = 0; k < spec.market.num_ucs; ++k) {
      lines.push_back("terminal_w_" + std::to_string(k + 1) + "," +
                      format_sig12(last.prices[k]));
    }
    lines.push_back("terminal_S," + format_sig12(last.social));
    lines.push_back("terminal_PoA," + format_sig12(last.poa));
  }
  lines.push_back("global_optimum_S," + format_sig12(optimum_value));
  lines.push_back(std::string("assumption1_holds,") +
                  yesno(assumption1.holds));
  lines.push_back("assumption1_margin," +
                  format_sig12(assumption1.worst_margin));
  lines.push_back(std::string("rationality_ok,") +
                  yesno(artifacts.rationality_ok));
  if (spec.kind == ScenarioKind::kBasic || spec.kind == ScenarioKind::kDfa) {
    lines.push_back("eps," + format_sig12(spec.eps));
  }
  if (spec.kind != ScenarioKind::kBaseline) {
    lines.push_back("max_rounds," + std::to_string(spec.max_rounds));
  }
  if (spec.kind == ScenarioKind::kProjectedBasic) {
    lines.push_back(std::string("follower_boxes_active,") +
                    yesno(spec.follower_boxes_active));
  }
  write_lines(artifacts.summary_file, lines);
}

}  // namespace detail

// Runs the configured scenario and persists its artifacts in out_dir. On
// non-convergence the partial artifacts are written, flagged in the summary,
// and the error is rethrown.
inline RunArtifacts run_scenario(const ScenarioSpec& spec) {
  validate_spec(spec);
  if (spec.out_dir.empty()) {
    throw ConfigError("out: an output directory is required to run");
  }
  const std::filesystem::path dir(spec.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " +
                  ec.message());
  }
  const MarketConfig& config = spec.market;
  const NashSystem system = build_nash_system(config);
  const SocialOptimum optimum = global_social_optimum(config);
  const Assumption1Report assumption1 = check_assumption1(config);
  const RationalityCertificate certificate =
      rationality_check(config, system);

  Trace trace;
  bool converged = true;
  std::string failure;
  PriceVector last_iterate;
  try {
    switch (spec.kind) {
      case ScenarioKind::kBaseline: {
        const detail::RecordBuilder builder{config, optimum.value};
        trace.push_back(builder.build(0, solve_full_ne(system), 0.0, 0.0));
        break;
      }
      case ScenarioKind::kBasic:
        trace = run_basic(config,
                          leader_extended_prices(system, spec.leader_start),
                          spec.eps, spec.max_rounds, std::nullopt,
                          spec.verify_inner);
        break;
      case ScenarioKind::kDfa:
        trace = run_dfa(config,
                        leader_extended_prices(system, spec.leader_start),
                        spec.eps, spec.max_rounds, spec.verify_inner);
        break;
      case ScenarioKind::kProjectedBasic:
        trace = run_projected_basic(
            config, *spec.box,
            leader_extended_prices(system, spec.leader_start),
            spec.max_rounds, 1e-8, spec.follower_boxes_active);
        break;
      case ScenarioKind::kProjectedDfa:
        trace = run_projected_dfa(
            config, *spec.box,
            leader_extended_prices(system, spec.leader_start),
            spec.max_rounds);
        break;
    }
  } catch (const NonConvergenceError& e) {
    trace = e.trace;
    converged = false;
    failure = e.what();
    last_iterate = e.last_iterate;
  }

  RunArtifacts artifacts;
  artifacts.trajectory_file = dir / "trajectory.csv";
  artifacts.demands_file = dir / "demands.csv";
  artifacts.summary_file = dir / "summary.csv";
  artifacts.converged = converged;
  artifacts.rounds = static_cast<int>(trace.size());
  artifacts.rationality_ok = certificate.all_ok;
  artifacts.assumption1_ok = assumption1.holds;
  if (!trace.empty()) {
    artifacts.terminal_social = trace.back().social;
    artifacts.terminal_poa = trace.back().poa;
  }
  detail::write_trace_files(spec, trace, artifacts);
  detail::write_summary(spec, trace, artifacts, optimum.value, assumption1);
  if (!converged) {
    throw NonConvergenceError(
        failure + "; partial artifacts written to " + dir.string(),
        last_iterate, std::move(trace));
  }
  return artifacts;
}

// Reconstructs the artifact handles of a completed run directory.
inline RunArtifacts artifacts_from_dir(const std::filesystem::path& dir) {
  RunArtifacts artifacts;
  artifacts.trajectory_file = dir / "trajectory.csv";
  artifacts.demands_file = dir / "demands.csv";
  artifacts.summary_file = dir / "summary.csv";
  if (!std::filesystem::exists(artifacts.trajectory_file)) {
    throw IoError("no trajectory.csv under " + dir.string());
  }
  for (const auto& row : detail::read_csv(artifacts.summary_file)) {
    if (row.size() != 2) continue;
    const std::string& key = row[0];
    const std::string& value = row[1];
    if (key == "terminal_S") artifacts.terminal_social = std::stod(value);
    if (key == "terminal_PoA") artifacts.terminal_poa = std::stod(value);
    if (key == "rounds") artifacts.rounds = std::stoi(value);
    if (key == "converged") artifacts.converged = value == "true";
    if (key == "rationality_ok") artifacts.rationality_ok = value == "true";
    if (key == "assumption1_holds") {
      artifacts.assumption1_ok = value == "true";
    }
  }
  return artifacts;
}

// Writes plot-ready per-series tables next to the trajectory, copying cell
// strings verbatim. The demands series emits one table per user; the others
// emit a single round-indexed table.
inline std::vector<std::filesystem::path> export_plot_data(
    const RunArtifacts& artifacts, const std::string& which) {
  const std::filesystem::path dir = artifacts.trajectory_file.parent_path();
  std::vector<std::filesystem::path> written;

  if (which == "demands") {
    const auto rows = detail::read_csv(artifacts.demands_file);
    if (rows.empty()) {
      throw IoError("demands file is empty: " +
                    artifacts.demands_file.string());
    }
    std::vector<std::string> users;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const std::string& user = rows[r].at(1);
      bool seen = false;
      for (const auto& u : users) {
        if (u == user) { seen = true; break; }
      }
      if (!seen) users.push_back(user);
    }
    std::string header = "round";
    for (std::size_t c = 2; c < rows[0].size(); ++c) {
      header += "," + rows[0][c];
    }
    for (const std::string& user : users) {
      std::vector<std::string> lines = {header};
      for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].at(1) != user) continue;
        std::string line = rows[r][0];
        for (std::size_t c = 2; c < rows[r].size(); ++c) {
          line += "," + rows[r][c];
        }
        lines.push_back(line);
      }
      const std::filesystem::path path = dir / ("demands_user_" + user +
                                                ".csv");
      detail::write_lines(path, lines);
      written.push_back(path);
    }
    return written;
  }

  std::string prefix;
  std::string filename;
  if (which == "prices") {
    prefix = "w_";
    filename = "prices.csv";
  } else if (which == "profits") {
    prefix = "W_";
    filename = "profits.csv";
  } else if (which == "user-profits") {
    prefix = "U_";
    filename = "user_profits.csv";
  } else if (which == "poa") {
    prefix = "PoA";
    filename = "poa.csv";
  } else {
    throw ConfigError("series: unknown name '" + which +
                      "'; expected prices, profits, user-profits, poa or "
                      "demands");
  }
  const auto rows = detail::read_csv(artifacts.trajectory_file);
  if (rows.empty()) {
    throw IoError("trajectory file is empty: " +
                  artifacts.trajectory_file.string());
  }
  std::vector<std::size_t> columns;
  for (std::size_t c = 0; c < rows[0].size(); ++c) {
    const std::string& name = rows[0][c];
    const bool match = prefix.back() == '_'
                           ? name.rfind(prefix, 0) == 0
                           : name == prefix;
    if (match) columns.push_back(c);
  }
  std::vector<std::string> lines;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line = rows[r].at(0);
    for (const std::size_t c : columns) {
      line += "," + rows[r].at(c);
    }
    lines.push_back(line);
  }
  const std::filesystem::path path = dir / filename;
  detail::write_lines(path, lines);
  written.push_back(path);
  return written;
}

}  // namespace gridgame

#endif  // GRIDGAME_SCENARIO_HPP_
