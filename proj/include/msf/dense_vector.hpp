#ifndef MSF_DENSE_VECTOR_HPP
#define MSF_DENSE_VECTOR_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "msf/algebra.hpp"

namespace msf {

// Fixed-length vector indexed by 1-based vertex id. Element type varies by
// use: parent ids, edge entries, distances, or boolean flags (stored as
// uint8_t so parallel writes stay addressable).
template <class T>
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::int64_t n, const T& value = T{})
      : data_(static_cast<std::size_t>(n), value) {}

  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

  T& operator[](VertexId v) { return data_[static_cast<std::size_t>(v - 1)]; }
  const T& operator[](VertexId v) const {
    return data_[static_cast<std::size_t>(v - 1)];
  }

  std::span<T> raw() { return data_; }
  std::span<const T> raw() const { return data_; }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<T> data_;
};

using ParentVector = DenseVector<VertexId>;
using StarFlags = DenseVector<std::uint8_t>;

// p = [1..n]: every vertex its own root.
inline ParentVector identity_parents(std::int64_t n) {
  ParentVector p(n);
  for (VertexId v = 1; v <= n; ++v) p[v] = v;
  return p;
}

}  // namespace msf

#endif
