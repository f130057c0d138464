#include <doctest.h>

#include <cmath>

#include "dualgeo/continuum.hpp"
#include "dualgeo/error.hpp"
#include "dualgeo/numerics.hpp"

using namespace dualgeo;
using numerics::kPi;

namespace {

// Complete elliptic integral of the second kind by the AGM series.
double elliptic_e(double k) {
  double a = 1.0, b = std::sqrt(1.0 - k * k), c = k;
  double sum = 0.5 * c * c, pow2 = 0.5;
  for (int it = 0; it < 64 && a != b; ++it) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = an;
    b = bn;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  const double k_first = kPi / (2.0 * a);
  return k_first * (1.0 - sum);
}

}  // namespace

TEST_CASE("membrane closed form") {
  const MembraneProblem unit{1.0, 1.0, 1.0, 64};
  CHECK(membrane_closed_form(unit, 1.0) == 0.0);
  CHECK(membrane_closed_form(unit, 0.0) == -0.25);
  MembraneProblem stiff = unit;
  stiff.tension = 2.0;
  CHECK(membrane_closed_form(stiff, 0.0) == -0.125);
  CHECK_THROWS_AS(membrane_closed_form(unit, 1.5), ValidationError);
  CHECK_THROWS_AS(membrane_closed_form({0.0, 1.0, 1.0, 64}, 0.5), ValidationError);
}

TEST_CASE("membrane solve") {
  const MembraneProblem unit{1.0, 1.0, 1.0, 512};
  const DeflectionField f = membrane_solve(unit);
  CHECK(f.r.front() == 0.0);
  CHECK(f.r.back() == 1.0);
  CHECK(f.w.back() == 0.0);
  CHECK(membrane_max_error(unit, f) <= 1e-5);
  double wmin = 0.0;
  for (double w : f.w) {
    CHECK(w <= 0.0);
    wmin = std::min(wmin, w);
  }
  CHECK(wmin == f.w.front());

  const DeflectionField zero = membrane_solve({1.0, 0.0, 1.0, 64});
  for (double w : zero.w) CHECK(w == 0.0);

  const ConvergenceStudy study = membrane_convergence({1.0, 1.0, 1.0, 16}, 5);
  for (double order : study.orders) CHECK(order >= 1.9);

  // Linear in p, inverse in T.
  const DeflectionField base = membrane_solve({1.0, 1.0, 2.0, 128});
  const DeflectionField scaled = membrane_solve({4.0, 3.0, 2.0, 128});
  for (std::size_t i = 0; i < base.w.size(); ++i)
    CHECK(std::abs(scaled.w[i] - 0.75 * base.w[i]) <= 1e-10);
  CHECK_THROWS_AS(membrane_solve({1.0, 1.0, 1.0, 8}), ValidationError);
}

TEST_CASE("string profile") {
  CHECK(string_profile(StringModel::with_frequency(1.0, 1.0), 0.0) == 0.0);
  CHECK(string_profile(StringModel::with_frequency(1.0, 1.0), kPi / 2) == doctest::Approx(1.0));
  CHECK(string_profile(StringModel::with_frequency(2.0, 3.0), kPi / 6) == doctest::Approx(2.0));
  StringModel levels;
  levels.energy_levels = {0.5, 1.25, 0.25};
  CHECK(levels.frequency() == 2.0);
  levels.energy_levels = {1.0, -1.0};
  CHECK_THROWS_AS(validate_string(levels), ValidationError);
  StringModel bounded = StringModel::with_frequency(2.0, 1.0);
  bounded.bounds.max_amplitude = 1.5;
  CHECK_THROWS_AS(validate_string(bounded), ValidationError);
}

TEST_CASE("exact arc length") {
  const double oracle = std::sqrt(2.0) * elliptic_e(1.0 / std::sqrt(2.0));
  CHECK(oracle == doctest::Approx(1.91010).epsilon(1e-5));
  CHECK(std::abs(string_arc_length_exact(StringModel::with_frequency(1.0, 1.0), kPi / 2) -
                 oracle) < 1e-6);
  CHECK(string_arc_length_exact(StringModel::with_frequency(0.0, 3.0), 2.0) == 2.0);
  CHECK(string_arc_length_exact(StringModel::with_frequency(1e-9, 1.0), 2.0) ==
        doctest::Approx(2.0).epsilon(1e-15));

  // Per-unit length over one full period grows with f_s.
  double previous = 0.0;
  for (double fs : {0.5, 1.0, 2.0, 4.0}) {
    const double x = 2 * kPi / fs;
    const double per_unit = string_arc_length_exact(StringModel::with_frequency(1.0, fs), x) / x;
    CHECK(per_unit > previous);
    previous = per_unit;
  }
  for (double x : {0.1, 1.0, 7.5}) {
    CHECK(string_arc_length_exact(StringModel::with_frequency(0.7, 2.3), x) >= x);
  }
}

TEST_CASE("effective length and inversion") {
  const StringModel m = StringModel::with_frequency(1.0, 1.0);
  CHECK(string_effective_length(m, kPi / 2) == 1.0);
  const EffectiveLengthReport r = string_effective_length_report(m, kPi / 2);
  CHECK(r.identity_discrepancy < 1e-12);
  CHECK(r.exact_discrepancy == doctest::Approx(0.91010).epsilon(1e-5));

  for (double fs : {0.5, 1.0, 3.0})
    for (int k = 0; k <= 100; ++k) {
      const StringModel s = StringModel::with_frequency(1.0, fs);
      const double x = (kPi / 2) * k / 100.0 / fs;
      CHECK(std::abs(invert_effective_length(s, std::sin(fs * x)) - x) <= 1e-12);
    }

  // Deviation from the true arc length grows with A f_s.
  double previous = -1.0;
  for (double a : {0.1, 0.5, 1.0, 2.0}) {
    const double d = string_effective_length_report(StringModel::with_frequency(a, 1.0), 1.0)
                         .exact_discrepancy;
    CHECK(d > previous);
    previous = d;
  }
}

TEST_CASE("wavelength quantization") {
  const StringModel m = StringModel::with_frequency(1.0, 2 * kPi);
  const QuantizationCheck q3 = wavelength_quantization_check(m, 3.0);
  CHECK(q3.ratio == doctest::Approx(3.0));
  CHECK(q3.is_integer);
  const QuantizationCheck q25 = wavelength_quantization_check(m, 2.5);
  CHECK(q25.ratio == doctest::Approx(2.5));
  CHECK_FALSE(q25.is_integer);
  CHECK(q25.inverse_ratio == doctest::Approx(0.4));
  const StringModel odd = StringModel::with_frequency(1.0, 1.7);
  const QuantizationCheck one = wavelength_quantization_check(odd, 2 * kPi / 1.7);
  CHECK(one.ratio == doctest::Approx(1.0));
  CHECK(one.is_integer);
}

TEST_CASE("superposed wave") {
  CHECK(superposed_wave(1.3, 2.0, 0.5, 0.0, 0.7, 0.2) == 0.0);
  CHECK(std::abs(superposed_wave(2.0, 1.0, 1.0, kPi, 0.4, 0.1)) < 1e-15);
  CHECK(superposed_wave(1.0, 1.0, 0.0, kPi / 2, kPi / 2, 0.0) ==
        doctest::Approx(-std::sqrt(2.0)));
  const double env = superposed_envelope(1.0, kPi / 3);
  double peak = 0.0;
  for (int i = 0; i < 10000; ++i)
    peak = std::max(peak, std::abs(superposed_wave(1.0, 1.0, 0.0, kPi / 3, 2 * kPi * i / 10000.0, 0)));
  CHECK(peak == doctest::Approx(env).epsilon(1e-6));
}
