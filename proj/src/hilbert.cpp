#include "tsqc/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <set>
#include <sstream>

namespace tsqc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::zero_vector: return "ZeroVector";
    case ErrorKind::not_normalized: return "NotNormalized";
    case ErrorKind::invalid_measurement: return "InvalidMeasurement";
    case ErrorKind::impossible_postselection: return "ImpossiblePostselection";
    case ErrorKind::zero_overlap: return "ZeroOverlap";
    case ErrorKind::rank_error: return "RankError";
    case ErrorKind::label_mismatch: return "LabelMismatch";
    case ErrorKind::invalid_config: return "InvalidConfig";
    case ErrorKind::validation_error: return "ValidationError";
    case ErrorKind::parse_error: return "ParseError";
  }
  return "Unknown";
}

Tolerances Tolerances::from_environment() {
  Tolerances tol;
  if (const char* raw = std::getenv("TSQC_TOLERANCE_STRUCTURAL"); raw != nullptr && *raw != '\0') {
    char* end = nullptr;
    const double value = std::strtod(raw, &end);
    if (end != raw && *end == '\0' && std::isfinite(value) && value > 0.0) {
      tol.structural = value;
    }
  }
  return tol;
}

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimensions " << a << " and " << b << " differ";
    throw Error(ErrorKind::dimension_mismatch, msg.str());
  }
}

}  // namespace

// --- Ket -------------------------------------------------------------------

double squared_norm(std::span<const Complex> v) noexcept {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

Ket::Ket(std::vector<Complex> amplitudes, Normalization mode, const Tolerances& tol)
    : amp_(std::move(amplitudes)) {
  if (amp_.size() < 2) {
    throw Error(ErrorKind::validation_error, "ket dimension must be at least 2");
  }
  for (const auto& z : amp_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::validation_error, "ket amplitude is not finite");
    }
  }
  const double n2 = squared_norm(amp_);
  if (n2 <= tol.null_weight) {
    throw Error(ErrorKind::zero_vector, "ket has zero norm");
  }
  const double norm = std::sqrt(n2);
  if (mode == Normalization::strict && std::abs(norm - 1.0) > tol.strict_norm) {
    std::ostringstream msg;
    msg << "ket norm " << norm << " outside 1 +/- " << tol.strict_norm;
    throw Error(ErrorKind::not_normalized, msg.str());
  }
  // Already unit up to rounding: rescaling would only perturb the last bits,
  // and a ket read back from its own JSON should compare equal.
  if (std::abs(n2 - 1.0) > 8 * std::numeric_limits<double>::epsilon()) {
    scale_ = 1.0 / norm;
    for (auto& z : amp_) z *= scale_;
  }
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorKind::validation_error, "basis index out of range");
  std::vector<Complex> v(dim);
  v[index] = 1.0;
  return Ket(std::move(v));
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  require_same_dim(x.size(), y.size(), "inner product");
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

Complex inner(const Ket& x, const Ket& y) { return inner(x.amplitudes(), y.amplitudes()); }

Ket normalize(std::span<const Complex> vector, const Tolerances& tol) {
  if (squared_norm(vector) <= tol.null_weight) {
    throw Error(ErrorKind::zero_vector, "cannot normalize a null vector");
  }
  return Ket(std::vector<Complex>(vector.begin(), vector.end()), Ket::Normalization::automatic, tol);
}

// --- Matrix ----------------------------------------------------------------

Matrix::Matrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (data_.size() != dim_ * dim_) {
    throw Error(ErrorKind::dimension_mismatch, "matrix data does not match dim*dim");
  }
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::outer(std::span<const Complex> x, std::span<const Complex> y) {
  require_same_dim(x.size(), y.size(), "outer product");
  Matrix m(x.size());
  for (std::size_t r = 0; r < x.size(); ++r) {
    for (std::size_t c = 0; c < y.size(); ++c) m(r, c) = x[r] * std::conj(y[c]);
  }
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) m(r, c) = std::conj((*this)(c, r));
  }
  return m;
}

Complex Matrix::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

std::vector<Complex> Matrix::apply(std::span<const Complex> v) const {
  require_same_dim(dim_, v.size(), "matrix-vector product");
  std::vector<Complex> out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    Complex s{};
    for (std::size_t c = 0; c < dim_; ++c) s += (*this)(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require_same_dim(dim_, rhs.dim_, "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require_same_dim(dim_, rhs.dim_, "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  require_same_dim(lhs.dim(), rhs.dim(), "matrix product");
  const std::size_t n = lhs.dim();
  Matrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = lhs(r, k);
      if (a == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) m(r, c) += a * rhs(k, c);
    }
  }
  return m;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (const auto& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_dim(a.dim(), b.dim(), "matrix comparison");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

// --- Projector -------------------------------------------------------------

Projector::Projector(std::string label, Matrix matrix)
    : label_(std::move(label)), matrix_(std::move(matrix)) {
  if (matrix_.dim() < 2) throw Error(ErrorKind::validation_error, "projector dimension must be at least 2");
  if (label_.empty()) throw Error(ErrorKind::validation_error, "projector label is empty");
}

Projector Projector::rank_one(std::string label, const Ket& v) {
  return Projector(std::move(label), Matrix::outer(v.amplitudes(), v.amplitudes()));
}

Projector Projector::span_of(std::string label, std::span<const Ket> vectors) {
  if (vectors.empty()) throw Error(ErrorKind::validation_error, "projector '" + label + "' spans no vectors");
  Matrix m(vectors.front().dim());
  for (const auto& v : vectors) m += Matrix::outer(v.amplitudes(), v.amplitudes());
  return Projector(std::move(label), std::move(m));
}

std::size_t Projector::rank() const {
  const double t = matrix_.trace().real();
  return t <= 0.5 ? 0 : static_cast<std::size_t>(std::llround(t));
}

Ket Projector::range_ket(const Tolerances& tol) const {
  if (rank() != 1) {
    throw Error(ErrorKind::rank_error,
                "projector '" + label_ + "' has rank " + std::to_string(rank()) + ", expected 1");
  }
  // For P = |v><v| every column c is v * conj(v_c); the heaviest column is
  // best conditioned.
  const std::size_t n = dim();
  std::size_t best = 0;
  for (std::size_t c = 1; c < n; ++c) {
    if (matrix_(c, c).real() > matrix_(best, best).real()) best = c;
  }
  std::vector<Complex> v(n);
  for (std::size_t r = 0; r < n; ++r) v[r] = matrix_(r, best);
  return normalize(v, tol);
}

ProjectionResult apply_projector(const Projector& p, const Ket& x) {
  require_same_dim(p.dim(), x.dim(), "apply_projector");
  ProjectionResult out;
  out.vector = p.matrix().apply(x.amplitudes());
  out.weight = squared_norm(out.vector);
  return out;
}

// --- Measurement -----------------------------------------------------------

std::string ValidationReport::summary() const {
  if (valid()) return "valid";
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    if (i) out << "; ";
    out << v.invariant << " violated by " << v.subject << " (max deviation " << v.deviation << ")";
  }
  return out.str();
}

ValidationReport validate_measurement(const ProjectiveMeasurement& m, const Tolerances& tol) {
  ValidationReport report;
  const auto projectors = m.projectors();
  const std::size_t n = m.dim();

  if (projectors.size() < 2) {
    report.violations.push_back({"projector_count", m.name(), static_cast<double>(2 - projectors.size())});
  }

  std::set<std::string> seen;
  for (const auto& p : projectors) {
    if (!seen.insert(p.label()).second) report.violations.push_back({"unique_labels", p.label(), 0.0});
  }

  bool dims_agree = true;
  for (const auto& p : projectors) {
    if (p.dim() != n) {
      dims_agree = false;
      report.violations.push_back(
          {"dimension", p.label(), std::abs(static_cast<double>(p.dim()) - static_cast<double>(n))});
    }
  }
  if (!dims_agree) return report;

  for (const auto& p : projectors) {
    const auto& mat = p.matrix();
    if (const double dev = max_abs_diff(mat, mat.adjoint()); dev > tol.structural) {
      report.violations.push_back({"hermiticity", p.label(), dev});
    }
    if (const double dev = max_abs_diff(mat * mat, mat); dev > tol.structural) {
      report.violations.push_back({"idempotence", p.label(), dev});
    }
  }

  for (std::size_t j = 0; j < projectors.size(); ++j) {
    for (std::size_t k = j + 1; k < projectors.size(); ++k) {
      const double dev = max_abs(projectors[j].matrix() * projectors[k].matrix());
      if (dev > tol.structural) {
        report.violations.push_back(
            {"orthogonality", projectors[j].label() + "," + projectors[k].label(), dev});
      }
    }
  }

  Matrix sum(n);
  for (const auto& p : projectors) sum += p.matrix();
  if (const double dev = max_abs_diff(sum, Matrix::identity(n)); dev > tol.structural) {
    report.violations.push_back({"completeness", m.name(), dev});
  }
  return report;
}

ProjectiveMeasurement::ProjectiveMeasurement(std::string name, std::vector<Projector> projectors,
                                             const Tolerances& tol)
    : name_(std::move(name)), projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw Error(ErrorKind::invalid_measurement, "measurement '" + name_ + "' has no projectors");
  dim_ = projectors_.front().dim();
  report_ = validate_measurement(*this, tol);
}

ProjectiveMeasurement ProjectiveMeasurement::from_basis(std::string name, std::span<const Ket> basis,
                                                        std::span<const std::string> labels,
                                                        const Tolerances& tol) {
  if (basis.size() != labels.size()) {
    throw Error(ErrorKind::validation_error, "measurement '" + name + "': basis and label counts differ");
  }
  std::vector<Projector> ps;
  ps.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) ps.push_back(Projector::rank_one(labels[i], basis[i]));
  return ProjectiveMeasurement(std::move(name), std::move(ps), tol);
}

ProjectiveMeasurement ProjectiveMeasurement::from_partition(std::string name, std::span<const Ket> basis,
                                                            std::span<const Group> groups,
                                                            const Tolerances& tol) {
  std::vector<Projector> ps;
  ps.reserve(groups.size());
  std::vector<int> used(basis.size(), 0);
  for (const auto& g : groups) {
    std::vector<Ket> members;
    for (const std::size_t idx : g.members) {
      if (idx >= basis.size()) {
        throw Error(ErrorKind::validation_error,
                    "measurement '" + name + "': group '" + g.label + "' references missing basis vector");
      }
      if (used[idx]++) {
        throw Error(ErrorKind::validation_error,
                    "measurement '" + name + "': basis vector " + std::to_string(idx) + " used by two groups");
      }
      members.push_back(basis[idx]);
    }
    ps.push_back(Projector::span_of(g.label, members));
  }
  return ProjectiveMeasurement(std::move(name), std::move(ps), tol);
}

std::vector<std::string> ProjectiveMeasurement::labels() const {
  std::vector<std::string> out;
  out.reserve(projectors_.size());
  for (const auto& p : projectors_) out.push_back(p.label());
  return out;
}

std::size_t ProjectiveMeasurement::index_of(std::string_view label) const noexcept {
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    if (projectors_[i].label() == label) return i;
  }
  return projectors_.size();
}

void ProjectiveMeasurement::require_valid(std::size_t expected_dim) const {
  require_same_dim(dim_, expected_dim, ("measurement '" + name_ + "'").c_str());
  if (!is_valid()) {
    throw Error(ErrorKind::invalid_measurement, "measurement '" + name_ + "': " + report_.summary());
  }
}

// --- TwoState --------------------------------------------------------------

TwoState::TwoState(Ket pre, Ket post, double t_a, double t_b)
    : pre_(std::move(pre)), post_(std::move(post)), t_a_(t_a), t_b_(t_b) {
  require_same_dim(pre_.dim(), post_.dim(), "two-state");
  if (!(t_a_ < t_b_)) throw Error(ErrorKind::validation_error, "two-state requires t_a < t_b");
}

TwoState TwoState::reversed() const { return TwoState(post_, pre_, t_a_, t_b_); }

}  // namespace tsqc
