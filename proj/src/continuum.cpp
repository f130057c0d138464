#include "dualgeo/continuum.hpp"

#include <algorithm>
#include <cmath>

#include "dualgeo/error.hpp"
#include "dualgeo/numerics.hpp"

namespace dualgeo {

using numerics::kPi;

void validate_membrane(const MembraneProblem& problem) {
  require(std::isfinite(problem.tension) && problem.tension > 0.0, "T", "must be positive");
  require(std::isfinite(problem.radius) && problem.radius > 0.0, "R", "must be positive");
  require(std::isfinite(problem.pressure), "p", "must be finite");
  require(problem.radial_nodes >= 16, "nodes", "need at least 16 radial nodes");
}

double membrane_closed_form(const MembraneProblem& problem, double r) {
  validate_membrane(problem);
  require(r >= 0.0 && r <= problem.radius, "r", "outside [0, R]");
  return problem.pressure / (4.0 * problem.tension) * (r * r - problem.radius * problem.radius);
}

DeflectionField membrane_solve(const MembraneProblem& problem) {
  validate_membrane(problem);
  const int n = problem.radial_nodes;
  const double h = problem.radius / n;
  const double rhs = problem.pressure / problem.tension;

  // Row i: [r_{i+1/2} (w_{i+1} - w_i) - r_{i-1/2} (w_i - w_{i-1})] / (r_i h^2) = p / T.
  std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), b(n, rhs);
  for (int i = 0; i < n; ++i) {
    const double ri = (i + 0.5) * h;
    const double west = i * h;
    const double east = (i + 1) * h;
    const double scale = 1.0 / (ri * h * h);
    lower[i] = west * scale;
    upper[i] = east * scale;
    diag[i] = -(west + east) * scale;
  }
  // Ghost cell beyond the clamp: w_ghost = -w_{n-1}, so w(R) = 0 on the face.
  diag[n - 1] -= upper[n - 1];
  upper[n - 1] = 0.0;

  // Thomas algorithm.
  for (int i = 1; i < n; ++i) {
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    b[i] -= m * b[i - 1];
  }
  std::vector<double> cells(n);
  cells[n - 1] = b[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i) cells[i] = (b[i] - upper[i] * cells[i + 1]) / diag[i];

  DeflectionField field;
  field.r.reserve(n + 2);
  field.w.reserve(n + 2);
  field.r.push_back(0.0);
  // Even extrapolation to the axis (w'(0) = 0).
  field.w.push_back((9.0 * cells[0] - cells[1]) / 8.0);
  for (int i = 0; i < n; ++i) {
    field.r.push_back((i + 0.5) * h);
    field.w.push_back(cells[i]);
  }
  field.r.push_back(problem.radius);
  field.w.push_back(0.0);
  return field;
}

double membrane_max_error(const MembraneProblem& problem, const DeflectionField& field) {
  require(field.r.size() == field.w.size(), "field", "radius and deflection counts differ");
  double err = 0.0;
  for (std::size_t i = 0; i < field.r.size(); ++i)
    err = std::max(err, std::abs(field.w[i] - membrane_closed_form(problem, field.r[i])));
  return err;
}

ConvergenceStudy membrane_convergence(MembraneProblem problem, int levels) {
  require(levels >= 2, "levels", "need at least 2 grids");
  ConvergenceStudy study;
  for (int level = 0; level < levels; ++level) {
    study.nodes.push_back(problem.radial_nodes);
    study.errors.push_back(membrane_max_error(problem, membrane_solve(problem)));
    problem.radial_nodes *= 2;
  }
  for (int level = 1; level < levels; ++level)
    study.orders.push_back(std::log2(study.errors[level - 1] / study.errors[level]));
  return study;
}

double StringModel::frequency() const {
  double sum = 0.0;
  for (double e : energy_levels) sum += e;
  return sum;
}

StringModel StringModel::with_frequency(double amplitude, double frequency) {
  StringModel m;
  m.amplitude = amplitude;
  m.energy_levels = {frequency};
  return m;
}

void validate_string(const StringModel& model) {
  require(std::isfinite(model.amplitude) && model.amplitude >= 0.0, "A",
          "must be finite and nonnegative");
  require(!model.energy_levels.empty(), "E", "need at least one energy level");
  for (double e : model.energy_levels)
    require(std::isfinite(e) && e > 0.0, "E", "energy levels must be positive");
  if (model.bounds.max_amplitude) {
    require(model.amplitude <= *model.bounds.max_amplitude, "A", "exceeds the amplitude bound");
  }
  if (model.bounds.max_frequency) {
    require(model.frequency() <= *model.bounds.max_frequency, "f_s",
            "exceeds the frequency bound");
  }
}

double string_profile(const StringModel& model, double t) {
  validate_string(model);
  return model.amplitude * std::sin(model.frequency() * t);
}

double string_arc_length_exact(const StringModel& model, double x) {
  validate_string(model);
  require(std::isfinite(x) && x > 0.0, "x", "must be positive");
  const double af = model.amplitude * model.frequency();
  const double f = model.frequency();
  if (af == 0.0) return x;
  // Split at the quarter periods so each panel sees a smooth, monotone piece.
  const double quarter = 0.5 * kPi / f;
  double length = 0.0;
  double start = 0.0;
  while (start < x) {
    const double end = std::min(x, start + quarter);
    length += numerics::integrate(
        [&](double u) {
          const double slope = af * std::cos(f * u);
          return std::sqrt(1.0 + slope * slope);
        },
        start, end, 1e-10);
    start = end;
  }
  return length;
}

double string_effective_length(const StringModel& model, double x) {
  validate_string(model);
  require(std::isfinite(x) && x > 0.0, "x", "must be positive");
  return std::sin(model.frequency() * x);
}

EffectiveLengthReport string_effective_length_report(const StringModel& model, double x) {
  EffectiveLengthReport r;
  r.approximation = string_effective_length(model, x);
  const double f = model.frequency();
  r.derivative_integral =
      numerics::integrate([&](double u) { return f * std::cos(f * u); }, 0.0, x, 1e-12);
  r.identity_discrepancy = std::abs(r.approximation - r.derivative_integral) /
                           std::max(1.0, std::abs(r.approximation));
  r.exact = string_arc_length_exact(model, x);
  r.exact_discrepancy = r.exact - r.approximation;
  r.relative_discrepancy = r.exact_discrepancy / r.exact;
  return r;
}

double invert_effective_length(const StringModel& model, double l) {
  validate_string(model);
  require(std::isfinite(l) && std::abs(l) <= 1.0, "l", "must lie in [-1, 1]");
  return std::asin(l) / model.frequency();
}

QuantizationCheck wavelength_quantization_check(const StringModel& model, double x) {
  validate_string(model);
  require(std::isfinite(x) && x > 0.0, "x", "must be positive");
  QuantizationCheck q;
  q.wavelength = 2.0 * kPi / model.frequency();
  q.ratio = x / q.wavelength;
  q.inverse_ratio = q.wavelength / x;
  q.is_integer = std::abs(q.ratio - std::round(q.ratio)) <= 1e-9;
  return q;
}

double superposed_wave(double b, double k, double omega, double phi, double x, double t) {
  const double a = 2.0 * b * std::cos(0.5 * phi);
  const double phase = k * x - omega * t;
  return a * std::sin(phase + phi) - a * std::sin(phase);
}

double superposed_envelope(double b, double phi) {
  return 2.0 * std::abs(2.0 * b * std::cos(0.5 * phi) * std::sin(0.5 * phi));
}

}  // namespace dualgeo
