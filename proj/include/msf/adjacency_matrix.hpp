#ifndef MSF_ADJACENCY_MATRIX_HPP
#define MSF_ADJACENCY_MATRIX_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "msf/algebra.hpp"

namespace msf {

// One input edge before cleaning. Weight is absent for pattern inputs.
struct EdgeRecord {
  VertexId u = 0;
  VertexId v = 0;
  std::optional<Weight> w;
};

// Sparse symmetric adjacency matrix, row-compressed with sorted column ids.
// Both triangles are stored so a row scan sees every edge incident to the
// row vertex. Absent entries mean "no edge" (weight inf). Construction
// drops self loops and collapses duplicate edges to the minimum weight.
class AdjacencyMatrix {
 public:
  struct Nonzero {
    VertexId col = 0;
    Weight weight = kInfWeight;
    friend bool operator==(const Nonzero&, const Nonzero&) = default;
  };

  AdjacencyMatrix() = default;

  // Cleans and symmetrizes `edges`; every record must satisfy 1 <= u,v <= n.
  // Records without a weight are stored with weight 0 and are expected to be
  // weighted afterwards (see graph_io::assign_weights).
  static AdjacencyMatrix from_edges(std::int64_t n,
                                    std::span<const EdgeRecord> edges);

  std::int64_t vertex_count() const { return n_; }
  std::int64_t stored_nonzeros() const {
    return static_cast<std::int64_t>(entries_.size());
  }
  std::int64_t edge_count() const { return stored_nonzeros() / 2; }

  std::span<const Nonzero> row(VertexId i) const {
    const auto b = static_cast<std::size_t>(row_start_[static_cast<std::size_t>(i - 1)]);
    const auto e = static_cast<std::size_t>(row_start_[static_cast<std::size_t>(i)]);
    return {entries_.data() + b, e - b};
  }

  // Undirected edge list: each edge once, (lo, hi, weight), ordered by key.
  struct Edge {
    EdgeKey key;
    Weight weight;
  };
  std::vector<Edge> edges() const;

  // Applies fn(key, weight) -> Weight to every stored entry, keeping symmetry.
  template <class Fn>
  AdjacencyMatrix with_weights(Fn&& fn) const {
    AdjacencyMatrix out = *this;
    for (VertexId i = 1; i <= n_; ++i) {
      const auto b = static_cast<std::size_t>(row_start_[static_cast<std::size_t>(i - 1)]);
      const auto e = static_cast<std::size_t>(row_start_[static_cast<std::size_t>(i)]);
      for (std::size_t k = b; k < e; ++k) {
        out.entries_[k].weight = fn(EdgeKey::of(i, entries_[k].col), entries_[k].weight);
      }
    }
    return out;
  }

  // Checks the structural invariants (symmetry, sorted rows, no self loops,
  // no duplicates); throws std::logic_error on violation.
  void validate() const;

  friend bool operator==(const AdjacencyMatrix&, const AdjacencyMatrix&) = default;

 private:
  std::int64_t n_ = 0;
  std::vector<std::int64_t> row_start_;  // size n+1
  std::vector<Nonzero> entries_;         // sorted by (row, col)
};

}  // namespace msf

#endif
