#ifndef MSF_VERIFY_HPP
#define MSF_VERIFY_HPP

#include "msf/adjacency_matrix.hpp"
#include "msf/dense_vector.hpp"

// Classical references the CLI --verify paths check against.

namespace msf::verify {

// Component label per vertex; the label is the smallest vertex id reachable.
DenseVector<VertexId> bfs_component_labels(const AdjacencyMatrix& A);

// True when both labelings induce the same partition of the vertices.
bool same_partition(const DenseVector<VertexId>& a, const DenseVector<VertexId>& b);

// Binary-heap Dijkstra; weights must be non-negative.
DenseVector<Weight> dijkstra_sssp(const AdjacencyMatrix& A, VertexId source);

// Exhaustive minimum over all simple paths. Only for tiny graphs (n <= 12).
DenseVector<Weight> brute_force_sssp(const AdjacencyMatrix& A, VertexId source);

}  // namespace msf::verify

#endif
