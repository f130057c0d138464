#include "dualgeo/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dualgeo/berry.hpp"
#include "dualgeo/chsh.hpp"
#include "dualgeo/continuum.hpp"
#include "dualgeo/distributions.hpp"
#include "dualgeo/error.hpp"
#include "dualgeo/infogeo.hpp"
#include "dualgeo/lengths.hpp"
#include "dualgeo/numerics.hpp"
#include "dualgeo/quantum.hpp"
#include "dualgeo/scan_io.hpp"

namespace dualgeo::cli {

using Eigen::VectorXd;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::string format = "json";
  std::string output;
  unsigned long long seed = 0;
  bool degrees = false;

  double angle(double value) const { return degrees ? value * numerics::kPi / 180.0 : value; }
};

struct FamilyArgs {
  std::string family = "bernoulli";
  int outcomes = 3;
  std::string chart = "natural";
};

void add_family(CLI::App* cmd, FamilyArgs& f) {
  cmd->add_option("--family", f.family, "gaussian | bernoulli | categorical")
      ->check(CLI::IsMember({"gaussian", "bernoulli", "categorical"}));
  cmd->add_option("--outcomes", f.outcomes, "categorical sample-space size");
  cmd->add_option("--chart", f.chart, "natural | mean | raw")
      ->check(CLI::IsMember({"natural", "mean", "raw"}));
}

DistributionFamily make_family(const FamilyArgs& f) {
  if (f.family == "gaussian") return DistributionFamily::gaussian();
  if (f.family == "bernoulli") return DistributionFamily::bernoulli();
  return DistributionFamily::categorical(f.outcomes);
}

Chart make_chart(const std::string& name) {
  if (name == "natural") return Chart::Natural;
  if (name == "mean") return Chart::Mean;
  return Chart::Raw;
}

VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json family_json(const FamilyArgs& f) {
  json j;
  j["family"] = f.family;
  if (f.family == "categorical") j["outcomes"] = f.outcomes;
  j["chart"] = f.chart;
  return j;
}

BipartiteState make_state(const std::string& name, double p, unsigned long long seed) {
  if (name == "singlet") return BipartiteState::singlet();
  if (name == "bell") return BipartiteState::bell();
  if (name == "partial") return BipartiteState::partial(p);
  if (name == "random") return random_two_qubit_state(seed);
  Eigen::VectorXcd zero(2);
  zero << 1.0, 0.0;
  return BipartiteState::product(zero, zero);
}

StateFamily make_state_family(const std::string& name) {
  if (name == "spin-half-gauge") {
    return StateFamily::gauge_shifted(StateFamily::spin_half(),
                                      [](const VectorXd& r) { return r(0); });
  }
  if (name == "real") return StateFamily::real_qutrit();
  return StateFamily::spin_half();
}

void emit(const ScanTable& table, const Common& common, std::ostream& out) {
  const std::string text = common.format == "csv" ? to_csv(table) : to_json(table);
  if (common.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(common.output, std::ios::binary);
  if (!file) throw ValidationError("output", "cannot open '" + common.output + "' for writing");
  file << text;
}

void stamp(ScanTable& table, const Common& common, json parameters) {
  parameters["seed"] = common.seed;
  parameters["deg"] = common.degrees;
  table.meta["parameters"] = std::move(parameters);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual-affine information geometry toolkit", "dualgeo"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", common.output, "write the table here instead of stdout");
  app.add_option("--seed", common.seed, "seed for randomized inputs");
  app.add_flag("--deg", common.degrees, "angle flags are in degrees");

  std::function<ScanTable()> action;

  // fisher
  FamilyArgs fisher_family;
  std::vector<double> fisher_point;
  auto* fisher = app.add_subcommand("fisher", "Fisher metric at a point");
  add_family(fisher, fisher_family);
  fisher->add_option("--point", fisher_point, "coordinates")->required()->delimiter(',');
  fisher->callback([&] {
    action = [&] {
      const DistributionFamily family = make_family(fisher_family);
      const MetricTensor g =
          fisher_metric(family, {make_chart(fisher_family.chart), to_vector(fisher_point)});
      ScanTable t("fisher_metric", {"i", "j", "g"});
      for (Eigen::Index i = 0; i < g.components.rows(); ++i)
        for (Eigen::Index j = 0; j < g.components.cols(); ++j)
          t.add_row({double(i), double(j), g.components(i, j)});
      json p = family_json(fisher_family);
      p["point"] = fisher_point;
      stamp(t, common, p);
      return t;
    };
  });

  // legendre
  std::string potential = "exponential";
  FamilyArgs legendre_family;
  std::vector<double> legendre_theta;
  auto* legendre = app.add_subcommand("legendre", "Legendre dual of a natural point");
  legendre->add_option("--potential", potential, "exponential | quadratic")
      ->check(CLI::IsMember({"exponential", "quadratic"}));
  add_family(legendre, legendre_family);
  legendre->add_option("--theta", legendre_theta, "natural coordinates")
      ->required()
      ->delimiter(',');
  legendre->callback([&] {
    action = [&] {
      const PotentialPair pot =
          potential == "quadratic"
              ? PotentialPair::quadratic(static_cast<int>(legendre_theta.size()))
              : PotentialPair::exponential(make_family(legendre_family));
      const LegendreResult r = legendre_dual(pot, {Chart::Natural, to_vector(legendre_theta)});
      std::vector<std::string> cols;
      std::vector<double> row;
      for (Eigen::Index i = 0; i < r.eta.coords.size(); ++i) {
        cols.push_back("eta_" + std::to_string(i));
        row.push_back(r.eta.coords(i));
      }
      cols.push_back("phi");
      row.push_back(r.phi_value);
      cols.push_back("psi");
      row.push_back(pot.psi(to_vector(legendre_theta)));
      ScanTable t("legendre_dual", cols);
      t.add_row(row);
      json p = potential == "quadratic" ? json::object() : family_json(legendre_family);
      p["potential"] = potential;
      p["theta"] = legendre_theta;
      stamp(t, common, p);
      return t;
    };
  });

  // divergence
  FamilyArgs div_family;
  std::vector<double> div_p, div_q, div_r;
  auto* divergence = app.add_subcommand("divergence", "KL, Bregman and triangle gap");
  add_family(divergence, div_family);
  divergence->add_option("--p", div_p, "point P")->required()->delimiter(',');
  divergence->add_option("--q", div_q, "point Q")->required()->delimiter(',');
  divergence->add_option("--r", div_r, "optional point R for the triangle gap")->delimiter(',');
  divergence->callback([&] {
    action = [&] {
      const DistributionFamily family = make_family(div_family);
      const Chart chart = make_chart(div_family.chart);
      const ParameterPoint p{chart, to_vector(div_p)}, q{chart, to_vector(div_q)};
      const PotentialPair pot = PotentialPair::exponential(family);
      std::vector<std::string> cols{"kl", "bregman"};
      std::vector<double> row{kl_divergence(family, p, q),
                              bregman_divergence(pot, to_chart(family, q, Chart::Natural),
                                                 to_chart(family, p, Chart::Mean))};
      if (!div_r.empty()) {
        const ParameterPoint r{chart, to_vector(div_r)};
        cols.insert(cols.end(), {"gap", "orthogonality"});
        row.push_back(pythagorean_gap(family, p, r, q));
        row.push_back(pythagorean_orthogonality(family, p, r, q));
      }
      ScanTable t("divergence", cols);
      t.add_row(row);
      json params = family_json(div_family);
      params["p"] = div_p;
      params["q"] = div_q;
      if (!div_r.empty()) params["r"] = div_r;
      stamp(t, common, params);
      return t;
    };
  });

  // lengths and geodesic share endpoint flags
  FamilyArgs len_family;
  std::vector<double> len_from, len_to;
  int len_samples = 201;
  auto* lengths = app.add_subcommand("lengths", "Lengths of the straight path in a chart");
  add_family(lengths, len_family);
  lengths->add_option("--from", len_from, "start point")->required()->delimiter(',');
  lengths->add_option("--to", len_to, "end point")->required()->delimiter(',');
  lengths->add_option("--samples", len_samples, "grid points along the path");
  lengths->callback([&] {
    action = [&] {
      const DistributionFamily family = make_family(len_family);
      const Chart chart = make_chart(len_family.chart);
      validate_point(family, {chart, to_vector(len_from)});
      validate_point(family, {chart, to_vector(len_to)});
      const ParamPath path =
          ParamPath::line(chart, to_vector(len_from), to_vector(len_to), len_samples);
      const LengthReport r = length_report(path, family);
      ScanTable t("lengths", {"primal", "dual", "harmonic", "divergence",
                              "divergence_second_derivative", "grid_size"});
      t.add_row({r.primal, r.dual, r.harmonic, r.divergence_based,
                 divergence_length_second_derivative(path, family), double(r.grid_size)});
      json p = family_json(len_family);
      p["from"] = len_from;
      p["to"] = len_to;
      p["samples"] = len_samples;
      stamp(t, common, p);
      return t;
    };
  });

  FamilyArgs geo_family;
  std::vector<double> geo_from, geo_to;
  double alpha = 0.0;
  int geo_samples = 201;
  auto* geodesic_cmd = app.add_subcommand("geodesic", "alpha-geodesic between two points");
  add_family(geodesic_cmd, geo_family);
  geodesic_cmd->add_option("--from", geo_from, "start point")->required()->delimiter(',');
  geodesic_cmd->add_option("--to", geo_to, "end point")->required()->delimiter(',');
  geodesic_cmd->add_option("--alpha", alpha, "-1, 0 or 1");
  geodesic_cmd->add_option("--samples", geo_samples, "grid points along the path");
  geodesic_cmd->callback([&] {
    action = [&] {
      const DistributionFamily family = make_family(geo_family);
      const Chart chart = make_chart(geo_family.chart);
      const ParamPath path = geodesic(family, {chart, to_vector(geo_from)},
                                      {chart, to_vector(geo_to)}, alpha, geo_samples);
      std::vector<std::string> cols{"t"};
      for (std::size_t i = 0; i < geo_from.size(); ++i) cols.push_back("x_" + std::to_string(i));
      ScanTable t("geodesic", cols);
      for (int k = 0; k < path.size(); ++k) {
        std::vector<double> row{k * path.spacing()};
        for (Eigen::Index i = 0; i < path.samples[k].size(); ++i)
          row.push_back(path.samples[k](i));
        t.add_row(row);
      }
      json p = family_json(geo_family);
      p["from"] = geo_from;
      p["to"] = geo_to;
      p["alpha"] = alpha;
      p["samples"] = geo_samples;
      stamp(t, common, p);
      t.meta["fisher_length"] = primal_length(path, family);
      return t;
    };
  });

  // berry
  std::string berry_family = "spin-half";
  double theta_c = numerics::kPi / 2.0;
  int segments = 2000;
  int cells = 32;
  auto* berry = app.add_subcommand("berry", "Loop phase and curvature flux of a polar cap");
  berry->add_option("--family", berry_family, "spin-half | spin-half-gauge | real")
      ->check(CLI::IsMember({"spin-half", "spin-half-gauge", "real"}));
  berry->add_option("--theta-c", theta_c, "cap boundary polar angle");
  berry->add_option("--segments", segments, "loop segments");
  berry->add_option("--cells", cells, "surface cells per side");
  berry->callback([&] {
    action = [&] {
      const double tc = common.angle(theta_c);
      const StateFamily family = make_state_family(berry_family);
      const LoopPhase loop = berry_phase_loop(family, LoopPath::latitude(tc, segments));
      const double surface = berry_phase_surface(family, SurfaceMesh::polar_cap(tc, cells, cells));
      ScanTable t("berry", {"theta_c", "phase", "principal", "winding", "surface",
                            "discrepancy"});
      t.add_row({tc, loop.total, loop.principal, double(loop.winding), surface,
                 std::abs(numerics::wrap_phase(loop.total - surface))});
      json p;
      p["family"] = berry_family;
      p["theta_c"] = theta_c;
      p["segments"] = segments;
      p["cells"] = cells;
      stamp(t, common, p);
      return t;
    };
  });

  // chsh
  std::string state_name = "singlet";
  double partial_p = 0.9;
  std::vector<double> settings;
  int scan = 0;
  auto* chsh = app.add_subcommand("chsh", "CHSH sum at fixed settings or by scan");
  chsh->add_option("--state", state_name, "singlet | bell | product | partial | random")
      ->check(CLI::IsMember({"singlet", "bell", "product", "partial", "random"}));
  chsh->add_option("--p", partial_p, "weight of |00> for the partial state");
  auto* settings_opt =
      chsh->add_option("--settings", settings, "a,a',b,b'")->delimiter(',')->expected(4);
  chsh->add_option("--scan", scan, "grid size per angle")->excludes(settings_opt);
  chsh->callback([&] {
    action = [&] {
      const BipartiteState psi = make_state(state_name, partial_p, common.seed);
      json p;
      p["state"] = state_name;
      if (state_name == "partial") p["p"] = partial_p;
      ScanTable t;
      if (scan > 0) {
        t = tsirelson_scan(psi, scan).table;
        p["scan"] = scan;
      } else {
        std::vector<double> x = settings;
        if (x.empty()) x = {0.0, numerics::kPi / 2.0, numerics::kPi / 4.0, 3.0 * numerics::kPi / 4.0};
        else for (double& v : x) v = common.angle(v);
        const CHSHResult r = chsh_S(psi, x[0], x[1], x[2], x[3]);
        t = ScanTable("chsh", {"a", "a_prime", "b", "b_prime", "E_ab", "E_ab_prime",
                               "E_a_prime_b", "E_a_prime_b_prime", "S", "abs_S", "excess"});
        t.add_row({r.a, r.a_prime, r.b, r.b_prime, r.correlators(0, 0), r.correlators(0, 1),
                   r.correlators(1, 0), r.correlators(1, 1), r.s, std::abs(r.s),
                   std::max(0.0, std::abs(r.s) - 2.0)});
        t.meta["regime"] = to_string(r.regime);
        p["settings"] = settings;
      }
      t.meta["classical_max"] = classical_polytope_max().max;
      stamp(t, common, p);
      return t;
    };
  });

  // decompose
  double dec_theta = numerics::kPi / 4.0;
  double dec_n = 1.0;
  auto* decompose = app.add_subcommand("decompose", "E + C split and benchmark entropy");
  decompose->add_option("--theta", dec_theta, "rotation angle");
  decompose->add_option("--N", dec_n, "normalization");
  decompose->callback([&] {
    action = [&] {
      const double theta = common.angle(dec_theta);
      const EcSplit split = ec_decomposition(theta, dec_n);
      const double entropy = entanglement_entropy(schmidt(controlled_rotation_benchmark(theta)));
      ScanTable t("decompose", {"theta", "N", "E", "C", "entropy", "entropy_fraction"});
      t.add_row({theta, dec_n, split.entanglement, split.coherence, entropy,
                 entropy / std::log(2.0)});
      json p;
      p["theta"] = dec_theta;
      p["N"] = dec_n;
      stamp(t, common, p);
      return t;
    };
  });

  // membrane
  MembraneProblem membrane;
  membrane.radial_nodes = 512;
  auto* membrane_cmd = app.add_subcommand("membrane", "Clamped membrane deflection");
  membrane_cmd->add_option("--T", membrane.tension, "tension");
  membrane_cmd->add_option("--p", membrane.pressure, "pressure");
  membrane_cmd->add_option("--R", membrane.radius, "clamp radius");
  membrane_cmd->add_option("--nodes", membrane.radial_nodes, "radial cells");
  membrane_cmd->callback([&] {
    action = [&] {
      const DeflectionField field = membrane_solve(membrane);
      ScanTable t("membrane", {"r", "w", "closed_form", "abs_error"});
      for (std::size_t i = 0; i < field.r.size(); ++i) {
        const double exact = membrane_closed_form(membrane, field.r[i]);
        t.add_row({field.r[i], field.w[i], exact, std::abs(field.w[i] - exact)});
      }
      json p;
      p["T"] = membrane.tension;
      p["p"] = membrane.pressure;
      p["R"] = membrane.radius;
      p["nodes"] = membrane.radial_nodes;
      stamp(t, common, p);
      t.meta["max_error"] = membrane_max_error(membrane, field);
      return t;
    };
  });

  // string
  double amplitude = 1.0;
  std::vector<double> levels;
  double fs = 1.0;
  double x = numerics::kPi / 2.0;
  double max_amplitude = 0.0, max_frequency = 0.0;
  auto* string_cmd = app.add_subcommand("string", "Exact and approximate string lengths");
  string_cmd->add_option("--A", amplitude, "amplitude");
  auto* fs_opt = string_cmd->add_option("--fs", fs, "total frequency");
  string_cmd->add_option("--levels", levels, "energy levels summing to f_s")
      ->delimiter(',')
      ->excludes(fs_opt);
  string_cmd->add_option("--x", x, "domain endpoint");
  string_cmd->add_option("--max-amplitude", max_amplitude, "optional amplitude bound");
  string_cmd->add_option("--max-frequency", max_frequency, "optional frequency bound");
  string_cmd->callback([&] {
    action = [&] {
      StringModel model = StringModel::with_frequency(amplitude, fs);
      if (!levels.empty()) model.energy_levels = levels;
      if (string_cmd->count("--max-amplitude")) model.bounds.max_amplitude = max_amplitude;
      if (string_cmd->count("--max-frequency")) model.bounds.max_frequency = max_frequency;
      const EffectiveLengthReport r = string_effective_length_report(model, x);
      const QuantizationCheck q = wavelength_quantization_check(model, x);
      ScanTable t("string", {"x", "f_s", "exact_length", "approx_length", "discrepancy",
                             "relative_discrepancy", "wavelength", "ratio", "inverse_ratio",
                             "is_integer"});
      t.add_row({x, model.frequency(), r.exact, r.approximation, r.exact_discrepancy,
                 r.relative_discrepancy, q.wavelength, q.ratio, q.inverse_ratio,
                 q.is_integer ? 1.0 : 0.0});
      json p;
      p["A"] = amplitude;
      p["levels"] = model.energy_levels;
      p["x"] = x;
      if (model.bounds.max_amplitude) p["max_amplitude"] = max_amplitude;
      if (model.bounds.max_frequency) p["max_frequency"] = max_frequency;
      stamp(t, common, p);
      t.meta["tolerances"] = {{"quadrature", 1e-10}, {"integer", 1e-9}};
      return t;
    };
  });

  std::vector<std::string> argv_storage{"dualgeo"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: arguments: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    emit(action(), common, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.field() << ": " << e.reason() << "\n";
    return kExitValidation;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.field() << ": " << e.reason() << "\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

}  // namespace dualgeo::cli
