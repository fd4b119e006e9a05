#include "msf/adjacency_matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace msf {

AdjacencyMatrix AdjacencyMatrix::from_edges(std::int64_t n,
                                            std::span<const EdgeRecord> edges) {
  struct Triple {
    VertexId row, col;
    Weight w;
  };
  std::vector<Triple> triples;
  triples.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) {
      throw std::out_of_range("edge endpoint " + std::to_string(e.u) + "-" +
                              std::to_string(e.v) + " outside 1.." +
                              std::to_string(n));
    }
    if (e.u == e.v) continue;  // self loops can never be outgoing edges
    const Weight w = e.w.value_or(Weight{0});
    triples.push_back({e.u, e.v, w});
    triples.push_back({e.v, e.u, w});
  }
  std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return a.w < b.w;
  });

  AdjacencyMatrix A;
  A.n_ = n;
  A.row_start_.assign(static_cast<std::size_t>(n) + 1, 0);
  A.entries_.reserve(triples.size());
  for (std::size_t k = 0; k < triples.size(); ++k) {
    // duplicates collapse to the minimum weight; sort order puts it first
    if (k > 0 && triples[k].row == triples[k - 1].row &&
        triples[k].col == triples[k - 1].col) {
      continue;
    }
    A.entries_.push_back({triples[k].col, triples[k].w});
    A.row_start_[static_cast<std::size_t>(triples[k].row)] =
        static_cast<std::int64_t>(A.entries_.size());
  }
  // row_start_[i] currently holds the end of row i where rows are nonempty;
  // fill gaps so every row has a valid [begin, end) range.
  for (std::size_t i = 1; i < A.row_start_.size(); ++i) {
    if (A.row_start_[i] == 0) A.row_start_[i] = A.row_start_[i - 1];
    if (A.row_start_[i] < A.row_start_[i - 1]) A.row_start_[i] = A.row_start_[i - 1];
  }
  return A;
}

std::vector<AdjacencyMatrix::Edge> AdjacencyMatrix::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count()));
  for (VertexId i = 1; i <= n_; ++i) {
    for (const auto& nz : row(i)) {
      if (nz.col > i) out.push_back({EdgeKey{i, nz.col}, nz.weight});
    }
  }
  return out;
}

void AdjacencyMatrix::validate() const {
  if (row_start_.size() != static_cast<std::size_t>(n_) + 1) {
    throw std::logic_error("adjacency matrix: bad row index size");
  }
  for (VertexId i = 1; i <= n_; ++i) {
    const auto r = row(i);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r[k].col == i) throw std::logic_error("adjacency matrix: self loop");
      if (r[k].col < 1 || r[k].col > n_) {
        throw std::logic_error("adjacency matrix: column out of range");
      }
      if (k > 0 && r[k].col <= r[k - 1].col) {
        throw std::logic_error("adjacency matrix: row not strictly sorted");
      }
      // symmetry: find (col, i) with the same weight
      const auto rr = row(r[k].col);
      const auto it = std::lower_bound(
          rr.begin(), rr.end(), i,
          [](const Nonzero& nz, VertexId v) { return nz.col < v; });
      if (it == rr.end() || it->col != i || it->weight != r[k].weight) {
        throw std::logic_error("adjacency matrix: asymmetric entry");
      }
    }
  }
}

}  // namespace msf
