#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsqc/error.hpp"
#include "tsqc/tolerances.hpp"

namespace tsqc {

using Complex = std::complex<double>;

/// Unit vector in a finite-dimensional Hilbert space (dim >= 2).
class Ket {
 public:
  enum class Normalization {
    /// Rescale any nonzero input to unit norm and remember the factor.
    automatic,
    /// Reject inputs whose norm is outside [1 - strict_norm, 1 + strict_norm].
    strict,
  };

  explicit Ket(std::vector<Complex> amplitudes,
               Normalization mode = Normalization::automatic,
               const Tolerances& tol = {});

  /// Computational basis vector |index>.
  [[nodiscard]] static Ket basis(std::size_t dim, std::size_t index);

  [[nodiscard]] std::size_t dim() const noexcept { return amp_.size(); }
  [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amp_; }
  [[nodiscard]] const Complex& operator[](std::size_t i) const { return amp_[i]; }
  /// Factor the constructor multiplied the input by (1 for already-unit input).
  [[nodiscard]] double applied_scale() const noexcept { return scale_; }

 private:
  std::vector<Complex> amp_;
  double scale_ = 1.0;
};

/// <x|y> = sum_i conj(x_i) y_i.
[[nodiscard]] Complex inner(const Ket& x, const Ket& y);
[[nodiscard]] Complex inner(std::span<const Complex> x, std::span<const Complex> y);

/// Rescales to unit norm; throws ZeroVector when the squared norm is at or
/// below `tol.null_weight` (a null collapse branch).
[[nodiscard]] Ket normalize(std::span<const Complex> vector, const Tolerances& tol = {});

[[nodiscard]] double squared_norm(std::span<const Complex> v) noexcept;

/// Dense row-major square complex matrix.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  Matrix(std::size_t dim, std::vector<Complex> row_major);

  [[nodiscard]] static Matrix identity(std::size_t dim);
  [[nodiscard]] static Matrix outer(std::span<const Complex> x, std::span<const Complex> y);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  [[nodiscard]] const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * dim_ + c];
  }
  [[nodiscard]] std::span<const Complex> data() const noexcept { return data_; }

  [[nodiscard]] Matrix adjoint() const;
  [[nodiscard]] Complex trace() const;
  [[nodiscard]] std::vector<Complex> apply(std::span<const Complex> v) const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
  friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
  friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// Largest entrywise modulus of a - b.
[[nodiscard]] double max_abs_diff(const Matrix& a, const Matrix& b);
[[nodiscard]] double max_abs(const Matrix& a);

/// Labeled orthogonal projector. Construction only checks shape; the
/// Hermitian and idempotent properties are checked by validate_measurement so
/// that malformed input can be reported rather than silently rejected.
class Projector {
 public:
  Projector(std::string label, Matrix matrix);

  /// |v><v| for a unit ket.
  [[nodiscard]] static Projector rank_one(std::string label, const Ket& v);
  /// Sum of |v><v| over an orthonormal family.
  [[nodiscard]] static Projector span_of(std::string label, std::span<const Ket> vectors);

  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] std::size_t dim() const noexcept { return matrix_.dim(); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return matrix_; }
  /// Trace rounded to the nearest integer.
  [[nodiscard]] std::size_t rank() const;
  /// For a rank-1 projector, a unit ket spanning its range (global phase
  /// fixed by making the largest component real and positive). Throws
  /// RankError otherwise.
  [[nodiscard]] Ket range_ket(const Tolerances& tol = {}) const;

 private:
  std::string label_;
  Matrix matrix_;
};

struct ProjectionResult {
  std::vector<Complex> vector;
  double weight = 0.0;
};

/// P x and its squared norm.
[[nodiscard]] ProjectionResult apply_projector(const Projector& p, const Ket& x);

struct Violation {
  std::string invariant;  // hermiticity, idempotence, orthogonality, completeness, ...
  std::string subject;    // projector label(s) involved, or the measurement name
  double deviation = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool valid() const noexcept { return violations.empty(); }
  [[nodiscard]] std::string summary() const;
};

/// Labeled set of projectors meant to form a complete orthogonal resolution
/// of the identity. Validity is computed once at construction.
class ProjectiveMeasurement {
 public:
  ProjectiveMeasurement(std::string name, std::vector<Projector> projectors,
                        const Tolerances& tol = {});

  /// One rank-1 projector per basis ket.
  [[nodiscard]] static ProjectiveMeasurement from_basis(std::string name, std::span<const Ket> basis,
                                                        std::span<const std::string> labels,
                                                        const Tolerances& tol = {});

  struct Group {
    std::string label;
    std::vector<std::size_t> members;  // indices into the basis
  };

  /// Each group becomes the projector onto the span of its member kets.
  [[nodiscard]] static ProjectiveMeasurement from_partition(std::string name,
                                                            std::span<const Ket> basis,
                                                            std::span<const Group> groups,
                                                            const Tolerances& tol = {});

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::span<const Projector> projectors() const noexcept { return projectors_; }
  [[nodiscard]] std::size_t size() const noexcept { return projectors_.size(); }
  [[nodiscard]] std::vector<std::string> labels() const;
  /// Index of the projector with this label, or size() when absent.
  [[nodiscard]] std::size_t index_of(std::string_view label) const noexcept;

  [[nodiscard]] bool is_valid() const noexcept { return report_.valid(); }
  [[nodiscard]] const ValidationReport& validation() const noexcept { return report_; }

  /// Throws InvalidMeasurement unless valid, DimensionMismatch unless dim matches.
  void require_valid(std::size_t expected_dim) const;

 private:
  std::string name_;
  std::size_t dim_ = 0;
  std::vector<Projector> projectors_;
  ValidationReport report_;
};

/// Lists every violated invariant with its largest entrywise deviation.
[[nodiscard]] ValidationReport validate_measurement(const ProjectiveMeasurement& m,
                                                    const Tolerances& tol = {});

/// Pre-selected ket at t_a and post-selected ket at t_b. The times only order
/// the two selections; no evolution happens between them.
class TwoState {
 public:
  TwoState(Ket pre, Ket post, double t_a = 0.0, double t_b = 1.0);

  [[nodiscard]] const Ket& pre() const noexcept { return pre_; }
  [[nodiscard]] const Ket& post() const noexcept { return post_; }
  [[nodiscard]] double t_a() const noexcept { return t_a_; }
  [[nodiscard]] double t_b() const noexcept { return t_b_; }
  [[nodiscard]] std::size_t dim() const noexcept { return pre_.dim(); }
  /// The same two kets with their roles exchanged (times kept).
  [[nodiscard]] TwoState reversed() const;

 private:
  Ket pre_;
  Ket post_;
  double t_a_;
  double t_b_;
};

}  // namespace tsqc
