#pragma once

namespace tsqc {

/// Numerical thresholds shared by every module.
///
/// `structural` bounds entrywise checks on kets, projectors and density
/// matrices. `aggregate` bounds sums of many terms (distribution totals,
/// completeness of outcome weights). `null_weight` is the squared-amplitude
/// level at or below which a branch is treated as impossible.
struct Tolerances {
  double structural = 1e-10;
  double aggregate = 1e-9;
  double null_weight = 1e-20;
  double strict_norm = 1e-6;

  /// Defaults, with `structural` overridden by TSQC_TOLERANCE_STRUCTURAL when
  /// that variable holds a positive finite number.
  [[nodiscard]] static Tolerances from_environment();
};

}  // namespace tsqc
