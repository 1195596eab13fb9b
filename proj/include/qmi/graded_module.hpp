#pragma once

#include "qmi/series.hpp"

#include <vector>

namespace qmi {

struct watermark_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite-dimensional graded carrier W = ⊕_{d=0}^{D} W_d with labeled basis.
/// Vectors are flat Eigen columns over all degrees.
struct GradedModule {
  long D = 0;
  std::vector<std::vector<std::string>> labels;  // per degree
  std::vector<long> offsets;                     // flat offset of each degree

  long dim_at(long d) const {
    return (d < 0 || d > D) ? 0 : long(labels[d].size());
  }
  long dim() const { return offsets.back(); }
  long index_of(long d, long i) const { return offsets[d] + i; }
  long degree_of(long idx) const {
    long d = 0;
    while (d + 1 <= D && offsets[d + 1] <= idx) ++d;
    return d;
  }
  const std::string& label(long idx) const {
    long d = degree_of(idx);
    return labels[d][idx - offsets[d]];
  }

  static GradedModule from_labels(std::vector<std::vector<std::string>> per_degree) {
    GradedModule m;
    m.D = long(per_degree.size()) - 1;
    m.labels = std::move(per_degree);
    m.offsets.resize(m.labels.size() + 1, 0);
    for (size_t d = 0; d < m.labels.size(); ++d)
      m.offsets[d + 1] = m.offsets[d] + long(m.labels[d].size());
    return m;
  }
};

inline Vec basis_vec(const GradedModule& m, long idx) {
  Vec v = Vec::Zero(m.dim());
  v(idx) = 1;
  return v;
}

inline Vec zero_vec(const GradedModule& m) { return Vec::Zero(m.dim()); }

}  // namespace qmi
