// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "dualgeo/berry.hpp"
#include "dualgeo/chsh.hpp"
#include "dualgeo/cli.hpp"
#include "dualgeo/continuum.hpp"
#include "dualgeo/infogeo.hpp"
#include "dualgeo/lengths.hpp"
#include "dualgeo/numerics.hpp"
#include "dualgeo/quantum.hpp"
#include "dualgeo/scan_io.hpp"

using namespace dualgeo;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using numerics::kPi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

VectorXd vec(std::initializer_list<double> x) {
  VectorXd v(static_cast<Eigen::Index>(x.size()));
  Eigen::Index i = 0;
  for (double d : x) v(i++) = d;
  return v;
}

std::string run_cli(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  return out.str();
}

Outcome tsirelson() {
  int code = 0;
  const ScanTable t = parse_json(run_cli({"chsh", "--state", "singlet", "--scan", "24"}, code));
  const std::size_t col = t.column("abs_S");
  double peak = 0.0;
  for (const auto& row : t.rows) peak = std::max(peak, row[col]);
  const ClassicalPolytope c = classical_polytope_max();
  const double err = std::abs(peak - 2.0 * std::sqrt(2.0));
  return {code == 0 && err <= 1e-6 && c.max == 2.0 && c.strategies == 16,
          fmt("max|S|=%.9f (err %.1e), classical max=%.0f", peak, err, c.max)};
}

Outcome geometric_identity() {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const BipartiteState psi = random_two_qubit_state(static_cast<unsigned long long>(k));
    const JointDistribution d = joint_distribution(psi, ang(rng), ang(rng));
    worst = std::max(worst, std::abs(geometric_correlator(d) - correlator(d)));
  }
  return {worst <= 1e-12, fmt("max |E~ - E| = %.2e over 10000 draws", worst)};
}

Outcome berry_holonomy() {
  const StateFamily f = StateFamily::spin_half();
  double worst_loop = 0.0, worst_stokes = 0.0;
  for (double tc : {kPi / 6, kPi / 3, kPi / 2, 2 * kPi / 3}) {
    const LoopPhase p = berry_phase_loop(f, LoopPath::latitude(tc, 2000));
    worst_loop = std::max(worst_loop, std::abs(p.total + kPi * (1.0 - std::cos(tc))));
    const SurfaceMesh mesh = SurfaceMesh::polar_cap(tc);
    worst_stokes = std::max(worst_stokes, stokes_check(f, mesh, mesh.boundary(2000)).discrepancy);
  }
  return {worst_loop <= 1e-4 && worst_stokes <= 1e-3,
          fmt("loop err %.2e, Stokes discrepancy %.2e", worst_loop, worst_stokes)};
}

Outcome dual_affine_core() {
  double legendre = 0.0, bregman = 0.0, duality = 0.0, flat = 0.0;
  const auto c = DistributionFamily::categorical(3);
  const auto b = DistributionFamily::bernoulli();
  const auto g = DistributionFamily::gaussian();
  for (const DistributionFamily& fam : {b, c, g}) {
    const PotentialPair pot = PotentialPair::exponential(fam);
    for (double u : {-1.2, -0.4, 0.3, 1.0}) {
      for (double v : {-0.9, -0.2, 0.6}) {
        VectorXd th(fam.dimension());
        if (fam.dimension() == 1) th << u;
        else if (fam.kind() == FamilyKind::Gaussian1D) th << u, -0.2 - std::abs(v);
        else th << u, v;
        const ParameterPoint theta{Chart::Natural, th};
        const LegendreResult lr = legendre_dual(pot, theta);
        legendre = std::max(legendre, (pot.grad_phi(lr.eta.coords) - th).norm());
        const DualMetrics dm = dual_metrics(pot, theta);
        const MatrixXd id = MatrixXd::Identity(fam.dimension(), fam.dimension());
        duality = std::max(duality, (dm.g.components * dm.g_star.components - id).norm());
        for (const auto& x : christoffel(fam, theta, 1.0).components)
          flat = std::max(flat, x.cwiseAbs().maxCoeff());
        for (const auto& x : christoffel(fam, lr.eta, -1.0).components)
          flat = std::max(flat, x.cwiseAbs().maxCoeff());
        // Bregman(theta_Q, eta_P) against KL(P || Q) with P a shifted point.
        VectorXd tp = th;
        tp(0) += 0.5;
        const ParameterPoint p{Chart::Natural, tp};
        bregman = std::max(bregman, std::abs(bregman_divergence(pot, theta, to_chart(fam, p, Chart::Mean)) -
                                             kl_divergence(fam, p, theta)));
      }
    }
  }
  // Orthogonal triple: R tilts Q along the first indicator to match P.
  const ParameterPoint p{Chart::Mean, {0.5, 0.3}}, q{Chart::Mean, {0.2, 0.5}};
  const ParameterPoint r{Chart::Mean, {0.5, 0.3125}};
  const double zero_gap = std::abs(pythagorean_gap(c, p, r, q));
  const double generic =
      std::abs(pythagorean_gap(b, {Chart::Mean, {0.6}}, {Chart::Mean, {0.5}}, {Chart::Mean, {0.3}}));
  const bool pass = legendre <= 1e-8 && bregman <= 1e-8 && duality <= 1e-6 && flat <= 1e-6 &&
                    zero_gap <= 1e-8 && generic > 1e-6;
  return {pass, fmt("round trip %.1e, |B-KL| %.1e, |gg*-I| %.1e", legendre, bregman, duality) +
                    fmt(", flatness %.1e, delta %.1e / generic %.3f", flat, zero_gap, generic)};
}

Outcome pinning() {
  const auto g = DistributionFamily::gaussian();
  double worst = 0.0;
  for (double sigma : {1.0, 0.1, 0.01}) {
    const double gss = fisher_metric(g, {Chart::Raw, {0.0, sigma}}).components(1, 1);
    worst = std::max(worst, std::abs(gss * sigma * sigma / 2.0 - 1.0));
  }
  return {worst <= 1e-6, fmt("max relative error of g_ss vs 2/s^2: %.2e", worst)};
}

Outcome lengths() {
  const auto b = DistributionFamily::bernoulli();
  double geo = 0.0;
  for (auto [a, z] : {std::pair{0.2, 0.8}, std::pair{0.05, 0.6}, std::pair{0.9, 0.3}}) {
    const ParamPath path = geodesic(b, {Chart::Mean, {a}}, {Chart::Mean, {z}}, 0.0, 401);
    const double oracle = 2.0 * std::abs(std::asin(std::sqrt(z)) - std::asin(std::sqrt(a)));
    geo = std::max(geo, std::abs(primal_length(path, b) - oracle));
  }
  double ratio = 0.0;
  for (const ParamPath& p : {ParamPath::line(Chart::Mean, vec({0.1}), vec({0.85}), 201),
                             ParamPath::line(Chart::Natural, vec({-2.0}), vec({1.5}), 201)}) {
    ratio = std::max(ratio, std::abs(divergence_length(p, b) / std::sqrt(2.0) / primal_length(p, b) - 1.0));
  }
  const PotentialPair pot = PotentialPair::exponential(b);
  const MetricField g_star = [&](const VectorXd& th) { return pot.hess_phi(pot.grad_psi(th)); };
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int ordered = 0;
  for (int k = 0; k < 100; ++k) {
    const double a0 = u(rng), a1 = u(rng), w = u(rng);
    const ParamPath p = ParamPath::sampled(
        Chart::Natural, [&](double t) { return vec({a0 + (a1 - a0) * t + w * t * (1 - t)}); }, 101,
        [&](double t) { return vec({a1 - a0 + w * (1 - 2 * t)}); });
    const double l = metric_length(p, pot.hess_psi), ls = metric_length(p, g_star);
    const double lh = harmonic_length(p, pot.hess_psi, g_star);
    if (lh >= std::min(l, ls) - 1e-12 && lh <= std::max(l, ls) + 1e-12) ++ordered;
  }
  return {geo <= 1e-5 && ratio <= 1e-6 && ordered == 100,
          fmt("geodesic err %.2e, |L_D/sqrt2/L - 1| %.2e, ordering %.0f/100", geo, ratio, ordered)};
}

Outcome entanglement() {
  const double s0 = entanglement_entropy(schmidt(controlled_rotation_benchmark(0.0)));
  const double s90 = entanglement_entropy(schmidt(controlled_rotation_benchmark(kPi / 2)));
  bool monotone = true;
  double prev = -1.0;
  for (int k = 0; k < 100; ++k) {
    const double s = entanglement_entropy(schmidt(controlled_rotation_benchmark(kPi / 2 * k / 99.0)));
    if (s < prev - 1e-12) monotone = false;
    prev = s;
  }
  double drift = 0.0;
  const BipartiteState bell = BipartiteState::bell();
  Eigen::VectorXcd z(2);
  z << 1.0, 0.0;
  const BipartiteState prod = BipartiteState::product(z, z);
  for (double t : {0.3, kPi / 4, kPi / 2, 2.2}) {
    const RotationMap r = RotationMap::planar(2, 0, 1, t);
    drift = std::max(drift, (schmidt(rotate_subsystem_local(bell, r)).coefficients -
                             schmidt(bell).coefficients).cwiseAbs().maxCoeff());
    drift = std::max(drift, (schmidt(rotate_subsystem_local(prod, r)).coefficients -
                             schmidt(prod).coefficients).cwiseAbs().maxCoeff());
  }
  const double e90 = std::abs(s90 - std::log(2.0));
  return {std::abs(s0) <= 1e-10 && e90 <= 1e-10 && monotone && drift <= 1e-10,
          fmt("S(0)=%.1e, |S(pi/2)-log2|=%.1e, local drift %.1e", s0, e90, drift) +
              (monotone ? ", monotone" : ", NOT monotone")};
}

Outcome ec_conservation() {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> th(-2 * kPi, 2 * kPi), nn(1e-3, 1e3);
  int exact = 0;
  for (int k = 0; k < 1000; ++k) {
    const double n = nn(rng);
    const EcSplit s = ec_decomposition(th(rng), n);
    if (s.entanglement + s.coherence == n) ++exact;
  }
  return {exact == 1000, fmt("E + C == N bitwise in %.0f/1000 draws", exact)};
}

Outcome membrane() {
  const MembraneProblem unit{1.0, 1.0, 1.0, 512};
  const double err = membrane_max_error(unit, membrane_solve(unit));
  const ConvergenceStudy study = membrane_convergence({1.0, 1.0, 1.0, 32}, 5);
  double order = 1e9;
  for (double o : study.orders) order = std::min(order, o);
  return {err <= 1e-5 && order >= 1.9, fmt("max error %.2e at 512 nodes, observed order %.3f", err, order)};
}

Outcome string_model() {
  // Complete elliptic integral E(1/sqrt 2) by the arithmetic-geometric mean.
  const double k = 1.0 / std::sqrt(2.0);
  double a = 1.0, bb = std::sqrt(1.0 - k * k), c = k, sum = 0.5 * k * k, p2 = 0.5;
  for (int it = 0; it < 64 && a != bb; ++it) {
    const double an = 0.5 * (a + bb);
    const double bn = std::sqrt(a * bb);
    c = 0.5 * (a - bb);
    a = an;
    bb = bn;
    p2 *= 2.0;
    sum += p2 * c * c;
  }
  const double oracle = std::sqrt(2.0) * (kPi / (2.0 * a)) * (1.0 - sum);
  const StringModel m = StringModel::with_frequency(1.0, 1.0);
  const EffectiveLengthReport r = string_effective_length_report(m, kPi / 2);
  const double err = std::abs(r.exact - oracle);
  double inversion = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = kPi / 2 * i / 1000.0;
    inversion = std::max(inversion, std::abs(invert_effective_length(m, std::sin(x)) - x));
  }
  return {err <= 1e-6 && std::abs(oracle - 1.91010) < 1e-5 && inversion <= 1e-12,
          fmt("exact %.8f vs oracle err %.1e; sin(f x) discrepancy %.5f", r.exact, err,
              r.exact_discrepancy) +
              fmt("; inversion err %.1e", inversion)};
}

Outcome cli_determinism() {
  const std::vector<std::vector<std::string>> runs = {
      {"fisher", "--family", "gaussian", "--chart", "raw", "--point", "0,0.01"},
      {"legendre", "--potential", "exponential", "--family", "categorical", "--theta", "0.2,-0.3"},
      {"divergence", "--family", "gaussian", "--chart", "raw", "--p", "0,1", "--q", "1,1"},
      {"lengths", "--family", "bernoulli", "--chart", "mean", "--from", "0.25", "--to", "0.75"},
      {"geodesic", "--family", "bernoulli", "--chart", "mean", "--from", "0.2", "--to", "0.8"},
      {"berry", "--family", "spin-half", "--theta-c", "1.5707963", "--segments", "2000"},
      {"chsh", "--state", "singlet", "--scan", "24"},
      {"chsh", "--state", "random", "--seed", "5", "--settings", "0,1.5707963,0.785398,2.356194"},
      {"decompose", "--theta", "0.7853981633974483", "--N", "1"},
      {"membrane", "--T", "1", "--p", "1", "--R", "1", "--nodes", "512"},
      {"string", "--A", "1", "--fs", "1", "--x", "1.5707963267948966", "--format", "csv"},
  };
  int identical = 0;
  for (const auto& args : runs) {
    int c1 = 0, c2 = 0;
    const std::string a = run_cli(args, c1), b = run_cli(args, c2);
    if (c1 == 0 && c2 == 0 && a == b && !a.empty()) ++identical;
  }
  return {identical == static_cast<int>(runs.size()),
          fmt("%.0f/%.0f invocations byte-identical", identical, static_cast<double>(runs.size()))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Tsirelson bound and classical polytope", tsirelson},
      {"geometric correlator identity", geometric_identity},
      {"Berry holonomy and Stokes agreement", berry_holonomy},
      {"dual-affine core", dual_affine_core},
      {"pinning blow-up of g_sigma_sigma", pinning},
      {"lengths", lengths},
      {"entanglement generation", entanglement},
      {"E + C conservation", ec_conservation},
      {"membrane solve", membrane},
      {"string model", string_model},
      {"CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
