#include "mde/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <string>

#include "mde/pvf.hpp"

namespace mde {

namespace {

// Successive-shortest-path min-cost flow with real capacities and Johnson
// potentials (Dijkstra on reduced costs).
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : graph_(static_cast<std::size_t>(nodes)) {}

  int add_edge(int from, int to, double cap, double cost) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({to, cap, cost});
    graph_[static_cast<std::size_t>(from)].push_back(id);
    edges_.push_back({from, 0.0, -cost});
    graph_[static_cast<std::size_t>(to)].push_back(id + 1);
    return id;
  }

  double flow_on(int edge_id) const { return edges_[static_cast<std::size_t>(edge_id) + 1].cap; }

  /// Pushes up to `limit` units from s to t; returns the amount pushed.
  double run(int s, int t, double limit, double eps) {
    const std::size_t n = graph_.size();
    std::vector<double> dual(n, 0.0);
    std::vector<double> dist(n);
    std::vector<int> prev_edge(n);
    std::vector<char> visited(n);
    using Item = std::pair<double, int>;

    double pushed = 0.0;
    while (limit - pushed > eps) {
      std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
      std::fill(visited.begin(), visited.end(), 0);
      std::fill(prev_edge.begin(), prev_edge.end(), -1);
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[static_cast<std::size_t>(s)] = 0.0;
      heap.emplace(0.0, s);
      while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        const auto vi = static_cast<std::size_t>(v);
        if (visited[vi]) continue;
        visited[vi] = 1;
        if (v == t) break;
        for (int id : graph_[vi]) {
          const Edge& e = edges_[static_cast<std::size_t>(id)];
          if (e.cap <= eps) continue;
          const auto to = static_cast<std::size_t>(e.to);
          const double reduced = std::max(0.0, e.cost - dual[to] + dual[vi]);
          if (dist[to] > d + reduced) {
            dist[to] = d + reduced;
            prev_edge[to] = id;
            heap.emplace(dist[to], e.to);
          }
        }
      }
      const auto ti = static_cast<std::size_t>(t);
      if (!visited[ti]) break;
      for (std::size_t v = 0; v < n; ++v) {
        if (visited[v]) dual[v] -= dist[ti] - dist[v];
      }
      double bottleneck = limit - pushed;
      for (int v = t; v != s;) {
        const Edge& e = edges_[static_cast<std::size_t>(prev_edge[static_cast<std::size_t>(v)])];
        bottleneck = std::min(bottleneck, e.cap);
        v = edges_[static_cast<std::size_t>(prev_edge[static_cast<std::size_t>(v)] ^ 1)].to;
      }
      for (int v = t; v != s;) {
        const auto id = static_cast<std::size_t>(prev_edge[static_cast<std::size_t>(v)]);
        edges_[id].cap -= bottleneck;
        edges_[id ^ 1].cap += bottleneck;
        v = edges_[id ^ 1].to;
      }
      pushed += bottleneck;
    }
    return pushed;
  }

 private:
  struct Edge {
    int to;
    double cap;
    double cost;
  };
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> graph_;
};

// ∫ |G_a - G_b| for the normalized cdfs of two nonempty measures.
double normalized_cdf_distance(std::span<const Atom> a, double mass_a,
                               std::span<const Atom> b, double mass_b) {
  std::size_t i = 0;
  std::size_t j = 0;
  double fa = 0.0;
  double fb = 0.0;
  double sum = 0.0;
  double x = std::min(a.front().position, b.front().position);
  while (i < a.size() || j < b.size()) {
    double next;
    if (j == b.size() || (i < a.size() && a[i].position <= b[j].position)) {
      next = a[i].position;
    } else {
      next = b[j].position;
    }
    sum += std::abs(fa - fb) * (next - x);
    x = next;
    while (i < a.size() && a[i].position == x) fa += a[i++].mass / mass_a;
    while (j < b.size() && b[j].position == x) fb += b[j++].mass / mass_b;
  }
  return sum;
}

}  // namespace

double TransportPlan::matched_mass() const {
  double s = 0.0;
  for (const auto& e : matched) s += e.mass;
  return s;
}

double TransportPlan::transport_cost() const {
  double s = 0.0;
  for (const auto& e : matched) s += std::abs(e.source - e.target) * e.mass;
  return s;
}

double TransportPlan::removed_mass() const {
  double s = 0.0;
  for (const auto& a : unmatched_source) s += a.mass;
  return s;
}

double TransportPlan::added_mass() const {
  double s = 0.0;
  for (const auto& a : unmatched_target) s += a.mass;
  return s;
}

double wasserstein_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const double diff = mu.total_mass() - nu.total_mass();
  if (std::abs(diff) > kMassMatchTolerance) {
    throw Error(ErrorKind::kMassMismatch, "total masses differ by " + std::to_string(diff));
  }
  auto a = mu.atoms();
  auto b = nu.atoms();
  if (a.empty() || b.empty()) return 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  double fa = 0.0;
  double fb = 0.0;
  double sum = 0.0;
  double x = std::min(a.front().position, b.front().position);
  while (i < a.size() || j < b.size()) {
    double next;
    if (j == b.size() || (i < a.size() && a[i].position <= b[j].position)) {
      next = a[i].position;
    } else {
      next = b[j].position;
    }
    sum += std::abs(fa - fb) * (next - x);
    x = next;
    // Use the stored prefix sums so the cdf values match DiscreteMeasure::cdf.
    while (i < a.size() && a[i].position == x) fa = mu.cumulative_at(i++);
    while (j < b.size() && b[j].position == x) fb = nu.cumulative_at(j++);
  }
  return sum;
}

std::vector<PlanEntry> monotone_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  std::vector<PlanEntry> plan;
  auto a = mu.atoms();
  auto b = nu.atoms();
  std::size_t i = 0;
  std::size_t j = 0;
  double left_a = a.empty() ? 0.0 : a[0].mass;
  double left_b = b.empty() ? 0.0 : b[0].mass;
  while (i < a.size() && j < b.size()) {
    const double f = std::min(left_a, left_b);
    if (f > 0.0) plan.push_back({a[i].position, b[j].position, f});
    left_a -= f;
    left_b -= f;
    if (left_a <= 0.0 && ++i < a.size()) left_a = a[i].mass;
    if (left_b <= 0.0 && ++j < b.size()) left_b = b[j].mass;
  }
  return plan;
}

GwResult generalized_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  GwResult result;
  auto a = mu.atoms();
  auto b = nu.atoms();
  const double mass_a = mu.total_mass();
  const double mass_b = nu.total_mass();
  if (a.empty() && b.empty()) return result;

  const int n = static_cast<int>(a.size());
  const int k = static_cast<int>(b.size());
  constexpr int kSource = 0;
  constexpr int kSink = 1;
  constexpr int kAbsorb = 2;  // receives removed source mass, cost 1
  constexpr int kCreate = 3;  // supplies added target mass, cost 1
  auto src_node = [](int i) { return 4 + i; };
  auto dst_node = [n](int j) { return 4 + n + j; };

  MinCostFlow flow(4 + n + k);
  std::vector<std::vector<std::pair<int, int>>> transport_edges(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double m = a[static_cast<std::size_t>(i)].mass;
    flow.add_edge(kSource, src_node(i), m, 0.0);
    flow.add_edge(src_node(i), kAbsorb, m, 1.0);
    for (int j = 0; j < k; ++j) {
      const double cost = std::abs(a[static_cast<std::size_t>(i)].position -
                                   b[static_cast<std::size_t>(j)].position);
      // Moving a unit costs at least as much as removing and re-creating it.
      if (cost >= 2.0) continue;
      const double cap = std::min(m, b[static_cast<std::size_t>(j)].mass);
      transport_edges[static_cast<std::size_t>(i)].emplace_back(j, flow.add_edge(src_node(i), dst_node(j), cap, cost));
    }
  }
  flow.add_edge(kSource, kCreate, mass_b, 0.0);
  flow.add_edge(kCreate, kAbsorb, std::min(mass_a, mass_b), 0.0);
  for (int j = 0; j < k; ++j) {
    const double m = b[static_cast<std::size_t>(j)].mass;
    flow.add_edge(kCreate, dst_node(j), m, 1.0);
    flow.add_edge(dst_node(j), kSink, m, 0.0);
  }
  flow.add_edge(kAbsorb, kSink, mass_a, 0.0);

  const double required = mass_a + mass_b;
  const double eps = 1e-14 * std::max(1.0, required);
  flow.run(kSource, kSink, required, eps);

  std::vector<Atom> kept_a;
  std::vector<double> kept_b(static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < n; ++i) {
    double kept = 0.0;
    for (const auto& [j, id] : transport_edges[static_cast<std::size_t>(i)]) {
      const double f = flow.flow_on(id);
      if (f <= eps) continue;
      kept += f;
      kept_b[static_cast<std::size_t>(j)] += f;
    }
    kept_a.push_back({a[static_cast<std::size_t>(i)].position,
                      std::min(kept, a[static_cast<std::size_t>(i)].mass)});
  }
  std::vector<Atom> kept_b_atoms;
  for (int j = 0; j < k; ++j) {
    kept_b_atoms.push_back({b[static_cast<std::size_t>(j)].position,
                            std::min(kept_b[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(j)].mass)});
  }

  TransportPlan& plan = result.plan;
  plan.matched = monotone_coupling(DiscreteMeasure(kept_a), DiscreteMeasure(kept_b_atoms));

  std::map<double, double> row_sum;
  std::map<double, double> col_sum;
  for (const auto& e : plan.matched) {
    row_sum[e.source] += e.mass;
    col_sum[e.target] += e.mass;
  }
  for (const auto& atom : a) {
    const double rest = atom.mass - row_sum[atom.position];
    if (rest > 0.0) plan.unmatched_source.push_back({atom.position, rest});
  }
  for (const auto& atom : b) {
    const double rest = atom.mass - col_sum[atom.position];
    if (rest > 0.0) plan.unmatched_target.push_back({atom.position, rest});
  }

  result.kept_source_mass = plan.matched_mass();
  result.kept_target_mass = result.kept_source_mass;
  result.value = plan.transport_cost() + plan.removed_mass() + plan.added_mass();
  return result;
}

TransportPlan optimal_partial_plan(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return generalized_wasserstein(mu, nu).plan;
}

double velocity_operator_cost(const VelocityMeasure& v1, const VelocityMeasure& v2) {
  const DiscreteMeasure base1 = base_projection(v1);
  const DiscreteMeasure base2 = base_projection(v2);
  const TransportPlan plan = optimal_partial_plan(base1, base2);

  double cost = 0.0;
  for (const auto& sliver : plan.matched) {
    const auto cond1 = v1.conditional(sliver.source);
    const auto cond2 = v2.conditional(sliver.target);
    if (cond1.empty() || cond2.empty()) {
      throw Error(ErrorKind::kInvalidVelocityMeasure, "matched base atom carries no velocity mass");
    }
    cost += sliver.mass * normalized_cdf_distance(cond1.atoms(), cond1.total_mass(),
                                                  cond2.atoms(), cond2.total_mass());
  }
  return cost;
}

}  // namespace mde
