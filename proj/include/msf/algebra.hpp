#ifndef MSF_ALGEBRA_HPP
#define MSF_ALGEBRA_HPP

#include <cstdint>
#include <limits>
#include <tuple>
#include <utility>

namespace msf {

// Vertex ids are 1-based; 0 is the sentinel ("no vertex").
using VertexId = std::int64_t;
inline constexpr VertexId kNoVertex = 0;

using Weight = double;
inline constexpr Weight kInfWeight = std::numeric_limits<Weight>::infinity();

// Canonical key of an undirected edge {u,v}: lo <= hi. A default-constructed
// key (0,0) stands for "no edge" and sorts after every real key.
struct EdgeKey {
  VertexId lo = 0;
  VertexId hi = 0;

  static EdgeKey of(VertexId u, VertexId v) {
    return u < v ? EdgeKey{u, v} : EdgeKey{v, u};
  }
  bool valid() const { return lo > 0; }

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

// Element of the edge monoid: an edge weight, the edge it came from, and the
// parent of the far endpoint. The identity is (inf, no-edge, 0); it is the
// only element with parent == 0.
struct EdgeEntry {
  Weight weight = kInfWeight;
  EdgeKey key{};
  VertexId parent = kNoVertex;

  bool is_identity() const { return parent == kNoVertex; }

  friend bool operator==(const EdgeEntry&, const EdgeEntry&) = default;
};

// Strict total order on (weight, key, parent); the identity sorts last so
// that combining with it always returns the other argument. Including key
// and parent makes min selection a total order even with duplicate weights.
inline bool edge_entry_less(const EdgeEntry& a, const EdgeEntry& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  const bool ia = a.is_identity();
  const bool ib = b.is_identity();
  if (ia != ib) return ib;
  if (ia) return false;
  return std::tie(a.key.lo, a.key.hi, a.parent) <
         std::tie(b.key.lo, b.key.hi, b.parent);
}

inline EdgeEntry min_weight(const EdgeEntry& a, const EdgeEntry& b) {
  return edge_entry_less(b, a) ? b : a;
}

// Commutative monoid: associative combine with an identity element.
template <class T, class Op>
struct Monoid {
  T identity;
  Op combine;
  T operator()(const T& a, const T& b) const { return combine(a, b); }
};
template <class T, class Op>
Monoid(T, Op) -> Monoid<T, Op>;

inline auto min_weight_monoid() {
  return Monoid{EdgeEntry{},
                [](const EdgeEntry& a, const EdgeEntry& b) { return min_weight(a, b); }};
}

// Monoid selecting the smaller vertex id; identity is the sentinel "none",
// which sorts last.
inline constexpr VertexId kNoCandidate = std::numeric_limits<VertexId>::max();

inline auto min_vertex_monoid() {
  return Monoid{kNoCandidate,
                [](VertexId a, VertexId b) { return a < b ? a : b; }};
}

// Semiring: additive commutative monoid plus multiplication with identity.
template <class T, class AddOp, class MulOp>
struct Semiring {
  Monoid<T, AddOp> add;
  MulOp multiply;
  T one;
};
template <class T, class AddOp, class MulOp>
Semiring(Monoid<T, AddOp>, MulOp, T) -> Semiring<T, AddOp, MulOp>;

// (min, +) over weights; additive identity inf, multiplicative identity 0.
// inf absorbs under + by IEEE arithmetic.
inline auto tropical() {
  return Semiring{Monoid{kInfWeight, [](Weight a, Weight b) { return a < b ? a : b; }},
                  [](Weight a, Weight b) { return a + b; }, Weight{0}};
}

// A stored matrix nonzero as seen by the three-operand kernel.
struct MatrixEntry {
  Weight weight = kInfWeight;
  EdgeKey key{};
};

// f(p_i, a_ij, p_j): the edge (i,j) leaves i's tree iff the two parents
// differ; otherwise the entry is dropped via the identity.
inline auto outgoing_edge_fn() {
  return [](VertexId x, const MatrixEntry& a, VertexId y) -> EdgeEntry {
    if (x != y) return EdgeEntry{a.weight, a.key, y};
    return EdgeEntry{};
  };
}

}  // namespace msf

#endif
