#pragma once

#include <span>
#include <string>
#include <vector>

#include "tsqc/hilbert.hpp"

namespace tsqc {

struct LabeledValue {
  std::string label;
  double value = 0.0;
};

/// Probabilities over the outcomes of one measurement, in measurement order.
/// Construction checks nonnegativity and that the total is 1 within
/// `tol.aggregate`.
class Distribution {
 public:
  explicit Distribution(std::vector<LabeledValue> entries, const Tolerances& tol = {});

  [[nodiscard]] std::span<const LabeledValue> entries() const noexcept { return entries_; }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return entries_[i].value; }
  /// Probability of `label`; throws LabelMismatch when absent.
  [[nodiscard]] double at(std::string_view label) const;
  [[nodiscard]] std::vector<std::string> labels() const;

 private:
  std::vector<LabeledValue> entries_;
};

/// Nonnegative weights that may or may not sum to 1.
struct OutcomeWeights {
  std::vector<LabeledValue> entries;
  bool normalized = false;

  [[nodiscard]] double total() const noexcept;
};

/// Density matrix; construction checks Hermiticity and unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix matrix, const Tolerances& tol = {});

  [[nodiscard]] std::size_t dim() const noexcept { return matrix_.dim(); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return matrix_; }

 private:
  Matrix matrix_;
};

/// Born rule from the earlier outcome: p_k = ||P_k a||^2.
[[nodiscard]] Distribution born_predictive(const Ket& a, const ProjectiveMeasurement& m,
                                           const Tolerances& tol = {});

/// Born rule from the later outcome alone: p_k = ||P_k b||^2 (= |<b|q_k>|^2 for
/// rank-1 projectors).
[[nodiscard]] Distribution born_retrodictive(const Ket& b, const ProjectiveMeasurement& m,
                                             const Tolerances& tol = {});

/// Unnormalized ABL weights |<b|P_k|a>|^2, one per projector.
[[nodiscard]] std::vector<double> abl_numerators(const TwoState& ts, std::span<const Projector> projectors);

/// Aharonov-Bergmann-Lebowitz rule for a measurement between the pre- and
/// post-selection:
///
///   p_k = |<b|P_k|a>|^2 / sum_j |<b|P_j|a>|^2
///
/// With rank-1 projectors |q_k><q_k| this is the familiar
/// |<a|q_k><q_k|b>|^2 / sum_j |<a|q_j><q_j|b>|^2. Throws
/// ImpossiblePostselection when the denominator is at or below
/// `tol.null_weight`.
[[nodiscard]] Distribution abl(const TwoState& ts, const ProjectiveMeasurement& m,
                               const Tolerances& tol = {});

/// Kastner's rival rule, reconstructed: the numerator assumes the measurement
/// is made, the denominator assumes it is not,
///
///   w_k = |<b|P_k|a>|^2 / |<b|a>|^2,   |<b|a>|^2 = |sum_j <b|P_j|a>|^2,
///
/// so the denominator keeps the interference cross-terms and the weights need
/// not sum to 1. Only dimensions are checked on the measurement. Throws
/// ZeroOverlap when |<b|a>|^2 is at or below `tol.null_weight`.
[[nodiscard]] OutcomeWeights kastner_rule(const TwoState& ts, const ProjectiveMeasurement& m,
                                          const Tolerances& tol = {});

/// State at the intermediate time when the measurement is made but its
/// outcome ignored: rho = sum_k P_k |a><a| P_k.
[[nodiscard]] DensityMatrix mixture_at_t(const Ket& a, const ProjectiveMeasurement& m,
                                         const Tolerances& tol = {});

}  // namespace tsqc
