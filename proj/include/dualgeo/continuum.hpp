#pragma once

// Clamped circular membrane under uniform load, and the compressed-string
// arc-length model.

#include <optional>
#include <vector>

namespace dualgeo {

struct MembraneProblem {
  double tension = 1.0;
  double pressure = 1.0;
  double radius = 1.0;
  int radial_nodes = 64;
};

/// r runs from 0 to R inclusive; w(R) = 0.
struct DeflectionField {
  std::vector<double> r;
  std::vector<double> w;
};

void validate_membrane(const MembraneProblem& problem);

/// w(r) = p / (4T) (r^2 - R^2).
double membrane_closed_form(const MembraneProblem& problem, double r);

/// Cell-centred finite-volume solve of T (w'' + w'/r) = p with zero flux at
/// the axis and w(R) = 0. Interior cells sit at (i + 1/2) h; the returned
/// field adds the axis value (extrapolated) and the clamped edge.
DeflectionField membrane_solve(const MembraneProblem& problem);

/// max_i |w_i - w(r_i)|.
double membrane_max_error(const MembraneProblem& problem, const DeflectionField& field);

struct ConvergenceStudy {
  std::vector<int> nodes;
  std::vector<double> errors;
  /// log2 of successive error ratios.
  std::vector<double> orders;
};

/// Solves at nodes, 2 nodes, 4 nodes, ... (`levels` grids).
ConvergenceStudy membrane_convergence(MembraneProblem problem, int levels);

/// Optional caps on amplitude and frequency; validation only.
struct StringBounds {
  std::optional<double> max_amplitude;
  std::optional<double> max_frequency;
};

struct StringModel {
  double amplitude = 1.0;
  std::vector<double> energy_levels{1.0};
  StringBounds bounds;

  /// f_s = sum of the energy levels.
  double frequency() const;

  static StringModel with_frequency(double amplitude, double frequency);
};

void validate_string(const StringModel& model);

/// A sin(f_s t).
double string_profile(const StringModel& model, double t);

/// Integral over [0, x] of sqrt(1 + A^2 f_s^2 cos^2(f_s u)).
double string_arc_length_exact(const StringModel& model, double x);

/// sin(f_s x).
double string_effective_length(const StringModel& model, double x);

struct EffectiveLengthReport {
  double approximation = 0.0;          // sin(f_s x)
  double derivative_integral = 0.0;    // quadrature of f_s cos(f_s u) on [0, x]
  double identity_discrepancy = 0.0;   // relative, approximation vs derivative_integral
  double exact = 0.0;                  // string_arc_length_exact
  double exact_discrepancy = 0.0;      // exact - approximation
  double relative_discrepancy = 0.0;   // (exact - approximation) / exact
};

EffectiveLengthReport string_effective_length_report(const StringModel& model, double x);

/// x = arcsin(l) / f_s; needs |l| <= 1.
double invert_effective_length(const StringModel& model, double l);

struct QuantizationCheck {
  double wavelength = 0.0;     // 2 pi / f_s
  double ratio = 0.0;          // x / lambda
  double inverse_ratio = 0.0;  // lambda / x
  bool is_integer = false;     // x / lambda integral within 1e-9
};

QuantizationCheck wavelength_quantization_check(const StringModel& model, double x);

/// A sin(kx - wt + phi) - A sin(kx - wt) with A = 2 B cos(phi / 2).
double superposed_wave(double b, double k, double omega, double phi, double x, double t);

/// Envelope of superposed_wave: 2 |A sin(phi / 2)|.
double superposed_envelope(double b, double phi);

}  // namespace dualgeo
