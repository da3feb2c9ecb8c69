#pragma once

// Independent arithmetic used as test oracles. Nothing here calls into the
// rules or ensemble modules.

#include <complex>
#include <vector>

#include "tsqc/hilbert.hpp"
#include "tsqc/scenarios.hpp"

namespace tsqc::testing {

using Vec = std::vector<Complex>;

inline Vec to_vec(const Ket& k) { return Vec(k.amplitudes().begin(), k.amplitudes().end()); }

inline Complex dot(const Vec& x, const Vec& y) {
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

/// Direct rank-1 ABL: |<a|q_k><q_k|b>|^2 / sum_j |<a|q_j><q_j|b>|^2.
inline std::vector<double> abl_rank_one(const Vec& a, const Vec& b, const std::vector<Vec>& q) {
  std::vector<double> num;
  double den = 0.0;
  for (const auto& qk : q) {
    num.push_back(std::norm(dot(a, qk) * dot(qk, b)));
    den += num.back();
  }
  for (auto& n : num) n /= den;
  return num;
}

/// P x with P = sum over `members` of |e_m><e_m|, evaluated as
/// sum_m e_m <e_m|x> instead of through a matrix.
inline Vec project_onto(const std::vector<Vec>& members, const Vec& x) {
  Vec out(x.size());
  for (const auto& e : members) {
    const Complex c = dot(e, x);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += c * e[i];
  }
  return out;
}

/// A random basis together with its partition into groups, kept in vector
/// form so tests can evaluate projections without the Projector class.
struct PartitionedBasis {
  std::vector<Ket> basis;
  std::vector<ProjectiveMeasurement::Group> groups;

  [[nodiscard]] ProjectiveMeasurement measurement(const std::string& name = "M") const {
    return ProjectiveMeasurement::from_partition(name, basis, groups);
  }
  [[nodiscard]] std::vector<Vec> members(std::size_t g) const {
    std::vector<Vec> out;
    for (const auto i : groups[g].members) out.push_back(to_vec(basis[i]));
    return out;
  }
};

inline PartitionedBasis random_partition(std::size_t dim, SplitMix64& rng, bool rank_one = false) {
  PartitionedBasis pb;
  pb.basis = random_basis(dim, rng);
  const std::size_t n_groups = rank_one ? dim : 2 + rng.below(dim - 1);
  pb.groups.resize(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    pb.groups[g].label = "g" + std::to_string(g);
    pb.groups[g].members.push_back(g);
  }
  for (std::size_t i = n_groups; i < dim; ++i) pb.groups[rng.below(n_groups)].members.push_back(i);
  return pb;
}

/// Random unitary as the matrix whose columns are a random orthonormal basis.
inline Matrix random_unitary(std::size_t dim, SplitMix64& rng) {
  const auto cols = random_basis(dim, rng);
  Matrix u(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t r = 0; r < dim; ++r) u(r, c) = cols[c][r];
  }
  return u;
}

}  // namespace tsqc::testing
