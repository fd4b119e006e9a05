#ifndef MSF_GRAPH_IO_HPP
#define MSF_GRAPH_IO_HPP

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "msf/adjacency_matrix.hpp"

namespace msf::io {

enum class Format { kMatrixMarket, kDimacs, kEdgeList };

// Picks a format from the file extension: .mtx/.mm, .gr, anything else is an
// edge list.
Format format_from_path(const std::string& path);

struct ParseError : std::runtime_error {
  ParseError(const std::string& path, std::int64_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line(line) {}
  std::int64_t line;
};

// Loads, cleans (symmetrize, drop self loops, collapse duplicates to the
// minimum weight), and weights unweighted inputs with `weight_seed`.
AdjacencyMatrix load(const std::string& path, Format format,
                     std::uint64_t weight_seed = 1);

void save(const std::string& path, Format format, const AdjacencyMatrix& A);

// One integer weight uniform in [1,255] per undirected edge, derived by
// hashing (seed, key) so both stored triangles agree and the result does not
// depend on edge order.
AdjacencyMatrix assign_weights(const AdjacencyMatrix& A, std::uint64_t seed);

struct GenSpec {
  enum class Kind { kRmat, kUniform };
  Kind kind = Kind::kUniform;
  // rmat
  std::int64_t scale = 10;      // n = 2^scale
  std::int64_t edge_factor = 8; // edge_factor * n directed samples
  std::array<double, 4> rmat_probs = {0.57, 0.19, 0.19, 0.05};
  // uniform
  std::int64_t n = 0;
  double density_percent = 1.0;  // each unordered pair kept with f/100
  std::uint64_t seed = 1;
};

AdjacencyMatrix gen_rmat(const GenSpec& spec);
AdjacencyMatrix gen_uniform(const GenSpec& spec);
AdjacencyMatrix generate(const GenSpec& spec);

// One recursive-quadrant descent; 1-based endpoints. Exposed so the descent
// distribution can be tested directly.
std::pair<VertexId, VertexId> rmat_sample(std::mt19937_64& rng,
                                          std::int64_t scale,
                                          const std::array<double, 4>& probs);

}  // namespace msf::io

#endif
