#include "evshare/check.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "evshare/capacity.hpp"
#include "evshare/errors.hpp"
#include "json.hpp"

namespace evshare {

using nlohmann::json;

SolutionFile make_solution_file(const Instance& inst, const std::vector<Station>& stations,
                                const MasterSolution& sol, const std::string& method) {
  (void)inst;
  SolutionFile f;
  f.method = method;
  f.status = sol.status == lp::SolveStatus::TimeLimit ? "time-limit" : "optimal";
  f.objective = sol.objective;
  f.stations = stations;
  f.z = sol.z;
  f.flow_in = sol.flow_in;
  f.flow_out = sol.flow_out;
  f.unmet = sol.unmet;
  return f;
}

namespace {

json grid_to_json(const Grid<double>& g) {
  json rows = json::array();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < g.cols(); ++c) row.push_back(g(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Grid<double> grid_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + " must be a matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  Grid<double> g(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ParseError(where + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) g(r, c) = j[r][c].get<double>();
  }
  return g;
}

}  // namespace

std::string solution_to_json(const SolutionFile& sol) {
  json doc;
  doc["method"] = sol.method;
  doc["status"] = sol.status;
  doc["objective"] = sol.objective;
  doc["stations"] = json::array();
  for (std::size_t s = 0; s < sol.stations.size(); ++s) {
    const Station& st = sol.stations[s];
    json neighborhood = json::array();
    for (int n : st.covered()) neighborhood.push_back(n);
    json alpha = json::array();
    for (double a : st.alpha) alpha.push_back(a);
    doc["stations"].push_back({{"id", s},
                               {"x", st.pos.x},
                               {"y", st.pos.y},
                               {"cost", st.pair_cost},
                               {"capacity_pairs", st.pair_capacity},
                               {"z", sol.z[s]},
                               {"neighborhood", std::move(neighborhood)},
                               {"alpha", std::move(alpha)}});
  }
  doc["periods"] = json::array();
  for (std::size_t t = 0; t < sol.unmet.size(); ++t)
    doc["periods"].push_back({{"F_in", grid_to_json(sol.flow_in[t])},
                              {"F_out", grid_to_json(sol.flow_out[t])},
                              {"E", grid_to_json(sol.unmet[t])}});
  return doc.dump(2) + "\n";
}

SolutionFile parse_solution_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("solution file is not valid JSON: ") + e.what());
  }
  SolutionFile sol;
  sol.method = doc.value("method", "");
  sol.status = doc.value("status", "optimal");
  sol.objective = doc.at("objective").get<double>();
  if (!doc.contains("stations") || !doc["stations"].is_array())
    throw ParseError("solution needs a 'stations' array");
  std::size_t N = 0;
  for (const auto& sj : doc["stations"]) {
    Station st;
    const auto& alpha = sj.at("alpha");
    N = alpha.size();
    st.alpha.resize(N);
    st.neighborhood.assign(N, 0);
    for (std::size_t n = 0; n < N; ++n) st.alpha[n] = alpha[n].get<double>();
    for (const auto& n : sj.at("neighborhood")) {
      const auto idx = n.get<std::size_t>();
      if (idx >= N) throw ParseError("station neighborhood index out of range");
      st.neighborhood[idx] = 1;
    }
    st.pos.x = sj.at("x").get<double>();
    st.pos.y = sj.at("y").get<double>();
    st.pair_cost = sj.at("cost").get<double>();
    st.pair_capacity = sj.at("capacity_pairs").get<int>();
    sol.stations.push_back(std::move(st));
    sol.z.push_back(sj.at("z").get<double>());
  }
  if (!doc.contains("periods") || !doc["periods"].is_array())
    throw ParseError("solution needs a 'periods' array");
  std::size_t t = 0;
  for (const auto& pj : doc["periods"]) {
    const std::string where = "periods[" + std::to_string(t++) + "]";
    sol.flow_in.push_back(grid_from_json(pj.at("F_in"), where + ".F_in"));
    sol.flow_out.push_back(grid_from_json(pj.at("F_out"), where + ".F_out"));
    sol.unmet.push_back(grid_from_json(pj.at("E"), where + ".E"));
  }
  return sol;
}

SolutionFile load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open solution file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_solution_json(buf.str());
}

void save_solution(const SolutionFile& sol, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write solution file: " + path);
  out << solution_to_json(sol);
}

CheckReport check_solution(const Instance& inst, const SolutionFile& sol, double tol) {
  const std::size_t N = inst.net.node_count();
  const std::size_t T = inst.net.period_count();
  const std::size_t S = sol.stations.size();
  const CapacityProfile profile = compute_profile(inst.net, inst.params);
  const FlowTotals flows = compute_flows(inst.net);

  if (sol.unmet.size() != T || sol.flow_in.size() != T || sol.flow_out.size() != T)
    throw ValidationError("solution period count disagrees with the instance");
  for (std::size_t t = 0; t < T; ++t)
    if (sol.flow_in[t].rows() != S || sol.flow_in[t].cols() != N ||
        sol.unmet[t].rows() != N || sol.unmet[t].cols() != N)
      throw ValidationError("solution flow matrices have the wrong shape");

  CheckReport report;
  const auto add = [&](const std::string& name, double worst) {
    report.items.push_back({name, worst <= tol, worst});
    report.all_pass = report.all_pass && worst <= tol;
  };

  double worst = 0.0;
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t s = 0; s < S; ++s) {
      double used = 0.0;
      for (std::size_t n = 0; n < N; ++n) used += sol.flow_in[t](s, n) + sol.flow_out[t](s, n);
      worst = std::max(worst,
                       used - static_cast<double>(profile.pair_capacity[t]) * sol.z[s]);
    }
  add("capacity (1)", worst);

  worst = 0.0;
  double worst_dep = 0.0;
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t n = 0; n < N; ++n) {
      double in_total = 0.0, out_total = 0.0;
      for (std::size_t s = 0; s < S; ++s) {
        in_total += sol.flow_in[t](s, n);
        out_total += sol.flow_out[t](s, n);
      }
      for (std::size_t n2 = 0; n2 < N; ++n2) {
        in_total += sol.unmet[t](n2, n);
        out_total += sol.unmet[t](n, n2);
      }
      worst = std::max(worst, std::abs(in_total - static_cast<double>(flows.inward(t, n))));
      worst_dep =
          std::max(worst_dep, std::abs(out_total - static_cast<double>(flows.outward(t, n))));
    }
  add("arrival conservation (2)", worst);
  add("departure conservation (3)", worst_dep);

  worst = 0.0;
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t s = 0; s < S; ++s) {
      double net = 0.0;
      for (std::size_t n = 0; n < N; ++n) net += sol.flow_in[t](s, n) - sol.flow_out[t](s, n);
      worst = std::max(worst, std::abs(net));
    }
  add("balance (4)", worst);

  worst = 0.0;
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t n2 = 0; n2 < N; ++n2)
        worst = std::max(worst,
                         sol.unmet[t](n, n2) - static_cast<double>(inst.net.od[t](n, n2)));
  add("trip integrity (5)", worst);

  double spent = 0.0;
  for (std::size_t s = 0; s < S; ++s) spent += sol.stations[s].pair_cost * sol.z[s];
  add("budget", spent - inst.params.budget);

  worst = 0.0;
  for (std::size_t s = 0; s < S; ++s)
    worst = std::max(worst, sol.z[s] - static_cast<double>(sol.stations[s].pair_capacity));
  add("pairs within station capacity", worst);

  worst = 0.0;
  for (double z : sol.z) worst = std::max(worst, std::abs(z - std::round(z)));
  add("z integral", worst);

  worst = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    for (const auto& v : sol.flow_in[t].data()) worst = std::max(worst, -v);
    for (const auto& v : sol.flow_out[t].data()) worst = std::max(worst, -v);
    for (const auto& v : sol.unmet[t].data()) worst = std::max(worst, -v);
  }
  for (double z : sol.z) worst = std::max(worst, -z);
  add("non-negativity", worst);

  double obj = 0.0;
  for (std::size_t t = 0; t < T; ++t)
    for (const auto& v : sol.unmet[t].data()) obj += v;
  add("objective equals unmet total", std::abs(obj - sol.objective));

  return report;
}

}  // namespace evshare
