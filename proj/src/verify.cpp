#include "msf/verify.hpp"

#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace msf::verify {

DenseVector<VertexId> bfs_component_labels(const AdjacencyMatrix& A) {
  const std::int64_t n = A.vertex_count();
  DenseVector<VertexId> label(n, kNoVertex);
  std::vector<VertexId> queue;
  for (VertexId start = 1; start <= n; ++start) {
    if (label[start] != kNoVertex) continue;
    label[start] = start;
    queue.assign(1, start);
    while (!queue.empty()) {
      const VertexId u = queue.back();
      queue.pop_back();
      for (const auto& nz : A.row(u)) {
        if (label[nz.col] == kNoVertex) {
          label[nz.col] = start;
          queue.push_back(nz.col);
        }
      }
    }
  }
  return label;
}

bool same_partition(const DenseVector<VertexId>& a, const DenseVector<VertexId>& b) {
  if (a.size() != b.size()) return false;
  std::unordered_map<VertexId, VertexId> fwd, rev;
  for (VertexId v = 1; v <= a.size(); ++v) {
    const auto [itf, newf] = fwd.emplace(a[v], b[v]);
    if (!newf && itf->second != b[v]) return false;
    const auto [itr, newr] = rev.emplace(b[v], a[v]);
    if (!newr && itr->second != a[v]) return false;
  }
  return true;
}

DenseVector<Weight> dijkstra_sssp(const AdjacencyMatrix& A, VertexId source) {
  const std::int64_t n = A.vertex_count();
  if (source < 1 || source > n) throw std::out_of_range("dijkstra: bad source");
  DenseVector<Weight> d(n, kInfWeight);
  d[source] = 0;
  using Item = std::pair<Weight, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.push({0, source});
  while (!heap.empty()) {
    const auto [dist, u] = heap.top();
    heap.pop();
    if (dist > d[u]) continue;
    for (const auto& nz : A.row(u)) {
      const Weight cand = dist + nz.weight;
      if (cand < d[nz.col]) {
        d[nz.col] = cand;
        heap.push({cand, nz.col});
      }
    }
  }
  return d;
}

namespace {

void extend_paths(const AdjacencyMatrix& A, VertexId u, Weight len,
                  std::vector<bool>& on_path, DenseVector<Weight>& best) {
  if (len < best[u]) best[u] = len;
  for (const auto& nz : A.row(u)) {
    if (on_path[static_cast<std::size_t>(nz.col - 1)]) continue;
    on_path[static_cast<std::size_t>(nz.col - 1)] = true;
    extend_paths(A, nz.col, len + nz.weight, on_path, best);
    on_path[static_cast<std::size_t>(nz.col - 1)] = false;
  }
}

}  // namespace

DenseVector<Weight> brute_force_sssp(const AdjacencyMatrix& A, VertexId source) {
  const std::int64_t n = A.vertex_count();
  if (source < 1 || source > n) throw std::out_of_range("brute force: bad source");
  if (n > 12) throw std::invalid_argument("brute force sssp: graph too large");
  DenseVector<Weight> best(n, kInfWeight);
  std::vector<bool> on_path(static_cast<std::size_t>(n), false);
  on_path[static_cast<std::size_t>(source - 1)] = true;
  extend_paths(A, source, 0, on_path, best);
  return best;
}

}  // namespace msf::verify
