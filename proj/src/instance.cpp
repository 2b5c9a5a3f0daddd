#include "evshare/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "evshare/errors.hpp"
#include "json.hpp"

namespace evshare {

double distance(const Point& a, const Point& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

void TripNetwork::validate() const {
  if (nodes.empty()) throw ValidationError("network must have at least one node");
  if (period_lengths.empty()) throw ValidationError("network must have at least one period");
  std::unordered_set<int> ids;
  for (const auto& n : nodes) {
    if (!ids.insert(n.id).second)
      throw ValidationError("duplicate node id " + std::to_string(n.id));
  }
  for (std::size_t t = 0; t < period_lengths.size(); ++t) {
    if (!(period_lengths[t] > 0.0))
      throw ValidationError("period " + std::to_string(t) + " has non-positive length");
  }
  if (od.size() != period_lengths.size())
    throw ValidationError("od tensor has " + std::to_string(od.size()) + " periods, expected " +
                          std::to_string(period_lengths.size()));
  for (std::size_t t = 0; t < od.size(); ++t) {
    if (od[t].rows() != nodes.size() || od[t].cols() != nodes.size())
      throw ValidationError("od matrix of period " + std::to_string(t) + " is not |N|x|N|");
    for (std::size_t i = 0; i < od[t].rows(); ++i)
      for (std::size_t j = 0; j < od[t].cols(); ++j)
        if (od[t](i, j) < 0)
          throw ValidationError("od entry negative at period " + std::to_string(t) + ", origin " +
                                std::to_string(i) + ", destination " + std::to_string(j));
  }
}

void NodeEconomics::validate(std::size_t node_count) const {
  if (pair_cost.size() != node_count || pair_capacity.size() != node_count)
    throw ValidationError("economics vectors must have one entry per node");
  for (std::size_t n = 0; n < node_count; ++n) {
    if (!(pair_cost[n] > 0.0))
      throw ValidationError("pair cost of node " + std::to_string(n) + " must be positive");
    if (pair_capacity[n] < 1)
      throw ValidationError("pair capacity of node " + std::to_string(n) + " must be >= 1");
  }
}

void ServiceParameters::validate() const {
  if (!(walk_radius > 0.0)) throw ValidationError("walk radius must be positive");
  if (!(market_share > 0.0) || market_share > 1.0)
    throw ValidationError("market share must lie in (0, 1]");
  if (handling_time_hours < 0.0) throw ValidationError("handling time must be non-negative");
  if (charge_rate_hours_per_km < 0.0) throw ValidationError("charge rate must be non-negative");
  if (budget < 0.0) throw ValidationError("budget must be non-negative");
}

void Instance::validate() const {
  net.validate();
  econ.validate(net.node_count());
  params.validate();
}

FlowTotals compute_flows(const TripNetwork& net) {
  const std::size_t T = net.period_count(), N = net.node_count();
  FlowTotals f;
  f.outward = Grid<std::int64_t>(T, N);
  f.inward = Grid<std::int64_t>(T, N);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        f.outward(t, i) += net.od[t](i, j);
        f.inward(t, j) += net.od[t](i, j);
      }
  }
  return f;
}

std::vector<double> max_station_distance(const TripNetwork& net) {
  const std::size_t N = net.node_count();
  std::vector<double> d(N, 0.0);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      d[i] = std::max(d[i], distance(net.nodes[i].pos, net.nodes[j].pos));
  return d;
}

namespace {

// Platform-independent uniforms from a fixed-width generator, so that a seed
// pins the instance bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 gen_;
};

std::size_t pick_weighted(Rng& rng, const std::vector<double>& cumulative) {
  const double u = rng.uniform01() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
  return std::min(k, cumulative.size() - 1);
}

}  // namespace

Instance generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.node_count < 1) throw ValidationError("node count must be >= 1");
  if (!(cfg.x_max > cfg.x_min) || !(cfg.y_max > cfg.y_min))
    throw ValidationError("geometry bounds must have positive extent");
  if (cfg.period_lengths.empty())
    throw ValidationError("at least one period is required");
  if (cfg.trips_per_period.size() != cfg.period_lengths.size())
    throw ValidationError("trips_per_period must match period count");
  for (auto trips : cfg.trips_per_period)
    if (trips < 0) throw ValidationError("per-period trip totals must be non-negative");
  if (!(cfg.gravity_lambda > 0.0)) throw ValidationError("gravity lambda must be positive");

  Rng rng(cfg.seed);
  const std::size_t N = static_cast<std::size_t>(cfg.node_count);

  Instance inst;
  inst.net.period_lengths = cfg.period_lengths;
  inst.net.nodes.resize(N);

  if (cfg.clusters > 1) {
    // Cluster centres on a jittered grid; nodes round-robin across clusters.
    const int K = cfg.clusters;
    const int grid = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(K))));
    std::vector<Point> centres(K);
    const double cw = (cfg.x_max - cfg.x_min) / grid;
    const double ch = (cfg.y_max - cfg.y_min) / grid;
    for (int c = 0; c < K; ++c) {
      const int gx = c % grid, gy = c / grid;
      centres[c].x = cfg.x_min + (gx + 0.5) * cw + rng.uniform(-0.1, 0.1) * cw;
      centres[c].y = cfg.y_min + (gy + 0.5) * ch + rng.uniform(-0.1, 0.1) * ch;
    }
    for (std::size_t n = 0; n < N; ++n) {
      const Point& c = centres[n % K];
      inst.net.nodes[n].id = static_cast<int>(n);
      inst.net.nodes[n].pos.x = c.x + rng.uniform(-cfg.cluster_radius, cfg.cluster_radius);
      inst.net.nodes[n].pos.y = c.y + rng.uniform(-cfg.cluster_radius, cfg.cluster_radius);
    }
  } else {
    for (std::size_t n = 0; n < N; ++n) {
      inst.net.nodes[n].id = static_cast<int>(n);
      inst.net.nodes[n].pos.x = rng.uniform(cfg.x_min, cfg.x_max);
      inst.net.nodes[n].pos.y = rng.uniform(cfg.y_min, cfg.y_max);
    }
  }

  // Costs descend linearly with l1 distance from the centroid P (3 at the
  // closest node, 1 at the furthest); capacity rises in thirds of the
  // largest distance.
  Point centre{0.0, 0.0};
  for (const auto& n : inst.net.nodes) {
    centre.x += n.pos.x;
    centre.y += n.pos.y;
  }
  centre.x /= static_cast<double>(N);
  centre.y /= static_cast<double>(N);

  std::vector<double> dist_p(N);
  for (std::size_t n = 0; n < N; ++n) dist_p[n] = distance(inst.net.nodes[n].pos, centre);
  const double d_min = *std::min_element(dist_p.begin(), dist_p.end());
  const double d_max = *std::max_element(dist_p.begin(), dist_p.end());

  inst.econ.pair_cost.resize(N);
  inst.econ.pair_capacity.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    if (d_max > d_min)
      inst.econ.pair_cost[n] = 3.0 - 2.0 * (dist_p[n] - d_min) / (d_max - d_min);
    else
      inst.econ.pair_cost[n] = 3.0;
    if (d_max > 0.0) {
      const double rel = dist_p[n] / d_max;
      inst.econ.pair_capacity[n] = rel <= 1.0 / 3 ? 1 : (rel <= 2.0 / 3 ? 2 : 3);
    } else {
      inst.econ.pair_capacity[n] = 1;
    }
  }

  inst.params = cfg.service;
  inst.params.budget = 0.3 * std::inner_product(inst.econ.pair_cost.begin(),
                                                inst.econ.pair_cost.end(),
                                                inst.econ.pair_capacity.begin(), 0.0);

  // Gravity OD: draw each trip from the exp(-d/lambda) kernel over ordered
  // node pairs, so per-period totals are hit exactly with integer entries.
  std::vector<double> cumulative;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (N > 1) {
    cumulative.reserve(N * (N - 1));
    pairs.reserve(N * (N - 1));
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        if (i == j) continue;
        acc += std::exp(-distance(inst.net.nodes[i].pos, inst.net.nodes[j].pos) /
                        cfg.gravity_lambda);
        cumulative.push_back(acc);
        pairs.emplace_back(i, j);
      }
  }

  const std::size_t T = cfg.period_lengths.size();
  inst.net.od.assign(T, Grid<std::int64_t>(N, N));
  for (std::size_t t = 0; t < T; ++t) {
    if (N == 1) continue;  // all trips would be self-loops; leave the matrix zero
    for (std::int64_t k = 0; k < cfg.trips_per_period[t]; ++k) {
      const auto [i, j] = pairs[pick_weighted(rng, cumulative)];
      ++inst.net.od[t](i, j);
    }
  }

  inst.validate();
  return inst;
}

// ---------------------------------------------------------------------------
// JSON round trip
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError("missing field '" + std::string(key) + "' in " + where);
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError("expected a number at " + where);
  return j.get<double>();
}

}  // namespace

Instance parse_instance_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance file is not valid JSON: ") + e.what());
  }

  Instance inst;
  const json& nodes = require(doc, "nodes", "instance");
  if (!nodes.is_array() || nodes.empty()) throw ParseError("'nodes' must be a non-empty array");
  std::size_t idx = 0;
  for (const auto& nj : nodes) {
    const std::string where = "nodes[" + std::to_string(idx) + "]";
    Node n;
    n.id = static_cast<int>(as_number(require(nj, "id", where), where + ".id"));
    n.pos.x = as_number(require(nj, "x", where), where + ".x");
    n.pos.y = as_number(require(nj, "y", where), where + ".y");
    inst.net.nodes.push_back(n);
    inst.econ.pair_cost.push_back(as_number(require(nj, "cost", where), where + ".cost"));
    const json& cap = require(nj, "capacity_pairs", where);
    if (!cap.is_number_integer())
      throw ParseError("expected an integer at " + where + ".capacity_pairs");
    inst.econ.pair_capacity.push_back(cap.get<int>());
    ++idx;
  }

  const json& periods = require(doc, "periods", "instance");
  if (!periods.is_array() || periods.empty())
    throw ParseError("'periods' must be a non-empty array");
  const std::size_t N = inst.net.nodes.size();
  idx = 0;
  for (const auto& pj : periods) {
    const std::string where = "periods[" + std::to_string(idx) + "]";
    inst.net.period_lengths.push_back(
        as_number(require(pj, "length_hours", where), where + ".length_hours"));
    const json& od = require(pj, "od", where);
    if (!od.is_array() || od.size() != N)
      throw ParseError(where + ".od must be a " + std::to_string(N) + "-row matrix");
    Grid<std::int64_t> m(N, N);
    for (std::size_t i = 0; i < N; ++i) {
      if (!od[i].is_array() || od[i].size() != N)
        throw ParseError(where + ".od[" + std::to_string(i) + "] must have " +
                         std::to_string(N) + " entries");
      for (std::size_t j = 0; j < N; ++j) {
        if (!od[i][j].is_number_integer())
          throw ParseError("expected an integer at " + where + ".od[" + std::to_string(i) +
                           "][" + std::to_string(j) + "]");
        m(i, j) = od[i][j].get<std::int64_t>();
      }
    }
    inst.net.od.push_back(std::move(m));
    ++idx;
  }

  const json& params = require(doc, "params", "instance");
  inst.params.walk_radius = as_number(require(params, "walk_radius", "params"), "params.walk_radius");
  inst.params.market_share =
      as_number(require(params, "market_share", "params"), "params.market_share");
  inst.params.handling_time_hours =
      as_number(require(params, "handling_time_hours", "params"), "params.handling_time_hours");
  inst.params.charge_rate_hours_per_km = as_number(
      require(params, "charge_rate_hours_per_km", "params"), "params.charge_rate_hours_per_km");
  inst.params.budget = as_number(require(params, "budget", "params"), "params.budget");

  inst.validate();
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  json doc;
  doc["nodes"] = json::array();
  for (std::size_t n = 0; n < inst.net.node_count(); ++n) {
    doc["nodes"].push_back({{"id", inst.net.nodes[n].id},
                            {"x", inst.net.nodes[n].pos.x},
                            {"y", inst.net.nodes[n].pos.y},
                            {"cost", inst.econ.pair_cost[n]},
                            {"capacity_pairs", inst.econ.pair_capacity[n]}});
  }
  doc["periods"] = json::array();
  for (std::size_t t = 0; t < inst.net.period_count(); ++t) {
    json od = json::array();
    for (std::size_t i = 0; i < inst.net.node_count(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < inst.net.node_count(); ++j)
        row.push_back(inst.net.od[t](i, j));
      od.push_back(std::move(row));
    }
    doc["periods"].push_back({{"length_hours", inst.net.period_lengths[t]}, {"od", std::move(od)}});
  }
  doc["params"] = {{"walk_radius", inst.params.walk_radius},
                   {"market_share", inst.params.market_share},
                   {"handling_time_hours", inst.params.handling_time_hours},
                   {"charge_rate_hours_per_km", inst.params.charge_rate_hours_per_km},
                   {"budget", inst.params.budget}};
  return doc.dump(2) + "\n";
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance_json(buf.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write instance file: " + path);
  out << instance_to_json(inst);
}

}  // namespace evshare
