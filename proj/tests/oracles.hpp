#ifndef MSF_TESTS_ORACLES_HPP
#define MSF_TESTS_ORACLES_HPP

// Independent reference implementations used only by tests. These avoid the
// library's sparse layouts and kernel paths on purpose: the dense reference
// walks an n x n table, the forest helpers chase raw pointers.

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "msf/adjacency_matrix.hpp"
#include "msf/algebra.hpp"
#include "msf/dense_vector.hpp"

namespace oracles {

using msf::AdjacencyMatrix;
using msf::DenseVector;
using msf::EdgeKey;
using msf::MatrixEntry;
using msf::ParentVector;
using msf::StarFlags;
using msf::VertexId;
using msf::Weight;

// Dense mirror of the matrix: entry (i,j) present iff the edge is stored.
class DenseMirror {
 public:
  explicit DenseMirror(const AdjacencyMatrix& A) : n_(A.vertex_count()) {
    cells_.resize(static_cast<std::size_t>(n_ * n_));
    for (const auto& e : A.edges()) {
      at(e.key.lo, e.key.hi) = MatrixEntry{e.weight, e.key};
      at(e.key.hi, e.key.lo) = MatrixEntry{e.weight, e.key};
    }
  }

  std::int64_t n() const { return n_; }
  const std::optional<MatrixEntry>& entry(VertexId i, VertexId j) const {
    return cells_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))];
  }

 private:
  std::optional<MatrixEntry>& at(VertexId i, VertexId j) {
    return cells_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))];
  }
  std::int64_t n_;
  std::vector<std::optional<MatrixEntry>> cells_;
};

// Triple-loop evaluation of w_i = combine_j f(x_i, a_ij, y_j).
template <class XT, class YT, class F, class M>
auto dense_multilinear(const DenseMirror& D, const DenseVector<XT>& x,
                       const DenseVector<YT>& y, F&& f, const M& m,
                       const StarFlags* mask = nullptr) {
  using W = decltype(f(x[1], MatrixEntry{}, y[1]));
  DenseVector<W> w(D.n(), m.identity);
  for (VertexId i = 1; i <= D.n(); ++i) {
    if (mask && !(*mask)[i]) continue;
    W acc = m.identity;
    for (VertexId j = 1; j <= D.n(); ++j) {
      if (const auto& e = D.entry(i, j)) acc = m.combine(acc, f(x[i], *e, y[j]));
    }
    w[i] = acc;
  }
  return w;
}

inline VertexId root_of(const ParentVector& p, VertexId v) {
  while (p[v] != v) v = p[v];
  return v;
}

inline std::int64_t depth_of(const ParentVector& p, VertexId v) {
  std::int64_t d = 0;
  while (p[v] != v) {
    v = p[v];
    ++d;
  }
  return d;
}

inline std::int64_t tree_height(const ParentVector& p, VertexId root) {
  std::int64_t h = 0;
  for (VertexId v = 1; v <= p.size(); ++v) {
    if (root_of(p, v) == root) h = std::max(h, depth_of(p, v));
  }
  return h;
}

// Star membership by direct forest inspection.
inline StarFlags star_flags_by_inspection(const ParentVector& p) {
  const std::int64_t n = p.size();
  StarFlags s(n, 0);
  for (VertexId v = 1; v <= n; ++v) {
    s[v] = tree_height(p, root_of(p, v)) <= 1 ? 1 : 0;
  }
  return s;
}

// Random rooted forest: attach each vertex (in shuffled order) to an earlier
// vertex or start a new root.
inline ParentVector random_forest(std::int64_t n, std::mt19937_64& rng) {
  std::vector<VertexId> order(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  ParentVector p(n);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const VertexId v = order[k];
    if (k == 0 || rng() % 4 == 0) {
      p[v] = v;
    } else {
      p[v] = order[rng() % k];
    }
  }
  return p;
}

}  // namespace oracles

#endif
