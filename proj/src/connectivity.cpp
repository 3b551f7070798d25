#include "ccdsk/connectivity.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

#include "ccdsk/errors.hpp"
#include "ccdsk/omniscience.hpp"

namespace ccdsk {

Multigraph induce_by_order(const Hypergraph& h, const std::vector<std::size_t>& order) {
  const std::size_t n = h.vertices;
  if (order.size() != n) throw InputError("order must list every client exactly once");
  std::vector<std::size_t> position(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (order[i] >= n || position[order[i]] != n) throw InputError("order is not a permutation of the clients");
    position[order[i]] = i;
  }
  Multigraph g;
  g.vertices = n;
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    std::vector<std::size_t> verts = h.edges[e];
    std::sort(verts.begin(), verts.end(), [&](std::size_t a, std::size_t b) { return position[a] < position[b]; });
    for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
      g.edges.emplace_back(verts[i], verts[i + 1]);
      g.tags.push_back(h.labels.empty() ? e : h.labels[e]);
    }
  }
  return g;
}

Hypergraph as_hypergraph(const Multigraph& g) {
  Hypergraph h;
  h.vertices = g.vertices;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [u, v] = g.edges[e];
    h.edges.push_back(u == v ? std::vector<std::size_t>{u} : std::vector<std::size_t>{std::min(u, v), std::max(u, v)});
    h.labels.push_back(e);
  }
  return h;
}

bool is_connected(const Hypergraph& h) {
  if (h.vertices <= 1) return true;
  std::vector<std::size_t> parent(h.vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = h.vertices;
  for (const auto& e : h.edges)
    for (std::size_t i = 1; i < e.size(); ++i) {
      const auto a = find(e[0]), b = find(e[i]);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
  return components == 1;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Edmonds' matroid partition over k graphic matroids, with shortest
// augmenting paths found by breadth-first search.
class ForestPacker {
 public:
  explicit ForestPacker(const Multigraph& g) : g_(g), owner_(g.edges.size(), kNone) {}

  void add_forest() { adj_.emplace_back(g_.vertices); }
  std::size_t forests() const { return adj_.size(); }

  // Tries every unassigned edge once; returns the number of assigned edges.
  std::size_t fill() {
    for (std::size_t e = 0; e < g_.edges.size(); ++e)
      if (owner_[e] == kNone && g_.edges[e].first != g_.edges[e].second) augment(e);
    return static_cast<std::size_t>(std::count_if(owner_.begin(), owner_.end(), [](std::size_t o) { return o != kNone; }));
  }

  std::vector<std::vector<std::size_t>> trees() const {
    std::vector<std::vector<std::size_t>> out(adj_.size());
    for (std::size_t e = 0; e < owner_.size(); ++e)
      if (owner_[e] != kNone) out[owner_[e]].push_back(e);
    return out;
  }

 private:
  using Adjacency = std::vector<std::vector<std::pair<std::size_t, std::size_t>>>;  // (neighbour, edge)

  // Edge ids on the forest path between u and v, or nullopt if none exists.
  std::optional<std::vector<std::size_t>> forest_path(std::size_t f, std::size_t u, std::size_t v) const {
    const Adjacency& adj = adj_[f];
    std::vector<std::size_t> via(g_.vertices, kNone), from(g_.vertices, kNone);
    std::vector<bool> seen(g_.vertices, false);
    std::deque<std::size_t> queue{u};
    seen[u] = true;
    while (!queue.empty()) {
      const auto x = queue.front();
      queue.pop_front();
      if (x == v) break;
      for (const auto& [y, e] : adj[x])
        if (!seen[y]) {
          seen[y] = true;
          via[y] = e;
          from[y] = x;
          queue.push_back(y);
        }
    }
    if (!seen[v]) return std::nullopt;
    std::vector<std::size_t> path;
    for (std::size_t x = v; x != u; x = from[x]) path.push_back(via[x]);
    return path;
  }

  void link(std::size_t f, std::size_t e) {
    const auto [u, v] = g_.edges[e];
    adj_[f][u].emplace_back(v, e);
    adj_[f][v].emplace_back(u, e);
  }

  void unlink(std::size_t f, std::size_t e) {
    const auto [u, v] = g_.edges[e];
    auto drop = [&](std::size_t x) {
      auto& list = adj_[f][x];
      list.erase(std::find_if(list.begin(), list.end(), [e](const auto& p) { return p.second == e; }));
    };
    drop(u);
    drop(v);
  }

  bool augment(std::size_t start) {
    std::vector<std::size_t> prev(g_.edges.size(), kNone);
    std::vector<bool> labelled(g_.edges.size(), false);
    std::deque<std::size_t> queue{start};
    labelled[start] = true;
    while (!queue.empty()) {
      const auto x = queue.front();
      queue.pop_front();
      const auto [u, v] = g_.edges[x];
      for (std::size_t f = 0; f < adj_.size(); ++f) {
        if (f == owner_[x]) continue;
        auto path = forest_path(f, u, v);
        if (!path) {
          std::size_t target = f;
          for (std::size_t cur = x; cur != kNone; cur = prev[cur]) {
            const std::size_t old = owner_[cur];
            if (old != kNone) unlink(old, cur);
            link(target, cur);
            owner_[cur] = target;
            target = old;
          }
          return true;
        }
        for (auto y : *path)
          if (!labelled[y]) {
            labelled[y] = true;
            prev[y] = x;
            queue.push_back(y);
          }
      }
    }
    return false;
  }

  const Multigraph& g_;
  std::vector<std::size_t> owner_;
  std::vector<Adjacency> adj_;
};

bool multigraph_connected(const Multigraph& g) { return is_connected(as_hypergraph(g)); }

}  // namespace

std::size_t tree_packing_number(const Multigraph& g) {
  if (g.vertices <= 1) return g.edges.size() + 1;
  if (!multigraph_connected(g)) return 0;
  const std::size_t tree_size = g.vertices - 1;
  ForestPacker packer(g);
  std::size_t k = 0;
  while ((k + 1) * tree_size <= g.edges.size()) {
    packer.add_forest();
    if (packer.fill() != (k + 1) * tree_size) break;
    ++k;
  }
  return k;
}

std::optional<std::vector<std::vector<std::size_t>>> pack_spanning_trees(const Multigraph& g, std::size_t count) {
  if (count == 0) return std::vector<std::vector<std::size_t>>{};
  if (g.vertices <= 1) return std::vector<std::vector<std::size_t>>(count);
  const std::size_t tree_size = g.vertices - 1;
  if (count * tree_size > g.edges.size() || !multigraph_connected(g)) return std::nullopt;
  ForestPacker packer(g);
  for (std::size_t k = 1; k <= count; ++k) {
    packer.add_forest();
    if (packer.fill() != k * tree_size) return std::nullopt;
  }
  return packer.trees();
}

namespace {

// Visits partitions as restricted growth strings; stops early when the
// visitor returns false.
template <typename Visit>
void for_each_partition(std::size_t n, Visit&& visit) {
  if (n == 0) return;
  std::vector<std::size_t> a(n, 0), peak(n, 0);  // peak[i] = max(a[0..i])
  while (true) {
    if (!visit(a, peak[n - 1] + 1)) return;
    std::size_t i = n - 1;
    while (i > 0 && a[i] > peak[i - 1]) --i;
    if (i == 0) return;
    ++a[i];
    peak[i] = std::max(peak[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      peak[j] = peak[i];
    }
  }
}

template <typename Score>
PartitionCheck check_partitions(const Hypergraph& h, std::size_t tau, Score&& score) {
  if (h.vertices > kMaxPartitionVertices)
    throw SizeGuardError("partition enumeration needs n <= 12 (got n=" + std::to_string(h.vertices) + ")");
  PartitionCheck out;
  std::vector<char> hit;
  std::size_t worst = 0;
  for_each_partition(h.vertices, [&](const std::vector<std::size_t>& block, std::size_t blocks) {
    std::size_t lhs = 0;
    for (const auto& e : h.edges) {
      hit.assign(blocks, 0);
      std::size_t r = 0;
      for (auto v : e)
        if (!hit[block[v]]) {
          hit[block[v]] = 1;
          ++r;
        }
      lhs += score(r);
    }
    const std::size_t rhs = tau * (blocks - 1);
    if (lhs < rhs && rhs - lhs > worst) {
      worst = rhs - lhs;
      out.holds = false;
      out.violation = VertexPartition{block, blocks};
    }
    return true;
  });
  return out;
}

}  // namespace

PartitionCheck partition_bound(const Hypergraph& h, std::size_t tau) {
  return check_partitions(h, tau, [](std::size_t r) -> std::size_t { return r > 0 ? r - 1 : 0; });
}

PartitionCheck tau_partition_connected(const Hypergraph& h, std::size_t tau) {
  return check_partitions(h, tau, [](std::size_t r) -> std::size_t { return r >= 2 ? 1 : 0; });
}

bool is_inherently_tau_connected(const MessageFamily& fam, std::size_t tau) {
  return compute_m_star(fam).m_star + tau <= fam.messages();
}

}  // namespace ccdsk
