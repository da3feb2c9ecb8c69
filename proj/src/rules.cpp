#include "tsqc/rules.hpp"

#include <cmath>
#include <sstream>

namespace tsqc {

Distribution::Distribution(std::vector<LabeledValue> entries, const Tolerances& tol)
    : entries_(std::move(entries)) {
  double total = 0.0;
  for (const auto& e : entries_) {
    if (!std::isfinite(e.value) || e.value < -tol.aggregate) {
      throw Error(ErrorKind::validation_error, "probability for '" + e.label + "' is negative or not finite");
    }
    total += e.value;
  }
  if (std::abs(total - 1.0) > tol.aggregate) {
    std::ostringstream msg;
    msg << "probabilities sum to " << total;
    throw Error(ErrorKind::validation_error, msg.str());
  }
}

double Distribution::at(std::string_view label) const {
  for (const auto& e : entries_) {
    if (e.label == label) return e.value;
  }
  throw Error(ErrorKind::label_mismatch, "no outcome labeled '" + std::string(label) + "'");
}

std::vector<std::string> Distribution::labels() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.label);
  return out;
}

double OutcomeWeights::total() const noexcept {
  double s = 0.0;
  for (const auto& e : entries) s += e.value;
  return s;
}

DensityMatrix::DensityMatrix(Matrix matrix, const Tolerances& tol) : matrix_(std::move(matrix)) {
  if (const double dev = max_abs_diff(matrix_, matrix_.adjoint()); dev > tol.structural) {
    throw Error(ErrorKind::validation_error, "density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex{1.0}) > tol.structural) {
    throw Error(ErrorKind::validation_error, "density matrix trace is not 1");
  }
}

namespace {

Distribution born_weights(const Ket& x, const ProjectiveMeasurement& m, const Tolerances& tol) {
  m.require_valid(x.dim());
  std::vector<LabeledValue> out;
  out.reserve(m.size());
  for (const auto& p : m.projectors()) out.push_back({p.label(), apply_projector(p, x).weight});
  return Distribution(std::move(out), tol);
}

// <b|P|a>
Complex transition_amplitude(const TwoState& ts, const Projector& p) {
  return inner(ts.post().amplitudes(), p.matrix().apply(ts.pre().amplitudes()));
}

}  // namespace

Distribution born_predictive(const Ket& a, const ProjectiveMeasurement& m, const Tolerances& tol) {
  return born_weights(a, m, tol);
}

Distribution born_retrodictive(const Ket& b, const ProjectiveMeasurement& m, const Tolerances& tol) {
  return born_weights(b, m, tol);
}

std::vector<double> abl_numerators(const TwoState& ts, std::span<const Projector> projectors) {
  std::vector<double> out;
  out.reserve(projectors.size());
  for (const auto& p : projectors) {
    if (p.dim() != ts.dim()) throw Error(ErrorKind::dimension_mismatch, "projector '" + p.label() + "'");
    out.push_back(std::norm(transition_amplitude(ts, p)));
  }
  return out;
}

Distribution abl(const TwoState& ts, const ProjectiveMeasurement& m, const Tolerances& tol) {
  m.require_valid(ts.dim());
  const auto numerators = abl_numerators(ts, m.projectors());
  double denominator = 0.0;
  for (const double n : numerators) denominator += n;
  if (denominator <= tol.null_weight) {
    throw Error(ErrorKind::impossible_postselection,
                "pre- and post-selection cannot both occur with measurement '" + m.name() + "'");
  }
  std::vector<LabeledValue> out;
  out.reserve(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    out.push_back({m.projectors()[k].label(), numerators[k] / denominator});
  }
  return Distribution(std::move(out), tol);
}

OutcomeWeights kastner_rule(const TwoState& ts, const ProjectiveMeasurement& m, const Tolerances& tol) {
  if (m.dim() != ts.dim()) throw Error(ErrorKind::dimension_mismatch, "measurement '" + m.name() + "'");
  const double overlap = std::norm(inner(ts.post(), ts.pre()));
  if (overlap <= tol.null_weight) {
    throw Error(ErrorKind::zero_overlap, "pre- and post-selected kets are orthogonal");
  }
  const auto numerators = abl_numerators(ts, m.projectors());
  OutcomeWeights w;
  for (std::size_t k = 0; k < m.size(); ++k) {
    w.entries.push_back({m.projectors()[k].label(), numerators[k] / overlap});
  }
  w.normalized = std::abs(w.total() - 1.0) <= tol.aggregate;
  return w;
}

DensityMatrix mixture_at_t(const Ket& a, const ProjectiveMeasurement& m, const Tolerances& tol) {
  m.require_valid(a.dim());
  Matrix rho(a.dim());
  for (const auto& p : m.projectors()) {
    const auto branch = apply_projector(p, a).vector;
    rho += Matrix::outer(branch, branch);
  }
  return DensityMatrix(std::move(rho), tol);
}

}  // namespace tsqc
