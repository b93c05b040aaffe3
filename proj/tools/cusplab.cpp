#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cusp/cusp_geometry.hpp"
#include "cusp/errors.hpp"
#include "cusp/io.hpp"
#include "cusp/malpha.hpp"
#include "cusp/parametrix.hpp"
#include "cusp/scattering.hpp"
#include "cusp/zerocount.hpp"

using namespace cusp;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  double tol = 1e-10;
  bool self_test = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON file of option values for this subcommand");
  sub->add_option("--out", c.out, "write output here instead of stdout");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", c.seed, "seed for random families");
  sub->add_option("--tol", c.tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
  sub->add_flag("--self-test", c.self_test, "run this module's invariant checks");
}

void emit(const Common& c, const Table& t) {
  const std::string text = c.format == "json" ? t.to_json().dump(2) + "\n" : t.csv();
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(c.out, text);
  }
}

QuadratureSpec spec_from(const Common& c) { return {c.tol, 1e-14, 4000}; }

// ------------------------------------------------------------- self tests

struct Check {
  std::string name;
  bool pass;
  double value;
};

int report(const Common& c, const std::string& module, const std::vector<Check>& checks) {
  Table t({"module", "check", "value", "status"});
  bool all = true;
  for (const auto& k : checks) {
    t.add_row(std::vector<std::string>{module, k.name, format_number(k.value), k.pass ? "PASS" : "FAIL"});
    all = all && k.pass;
  }
  emit(c, t);
  return all ? 0 : 1;
}

// ------------------------------------------------------------- demo data

AnalyticFunction blaschke_demo() {
  return blaschke_product({{0.8, 1.3}, {1.1, 2.7}, {0.65, 4.2}, {1.5, 0.8}, {2.0, 3.3}}, 1.0, true);
}

PhiModel demo_model() {
  PhiModel m;
  m.resonances.d = 1;
  for (cplx r : {cplx(0.2, 3.0), cplx(0.1, 7.0), cplx(0.35, 11.0), cplx(0.45, 15.5)}) {
    m.resonances.entries.push_back({r, 1});
    m.resonances.entries.push_back({std::conj(r), 1});
  }
  m.phi_at_half = 1.0;
  m.q_coeffs = {0.0, cplx(0.0, -0.3)};
  return m;
}

Lattice named_lattice(const std::string& name) {
  if (name == "Z1") return Lattice::integer(1);
  if (name == "Z2") return Lattice::integer(2);
  if (name == "Z3") return Lattice::integer(3);
  if (name == "hex") {
    Lattice L;
    L.d = 2;
    const double s = std::sqrt(2.0 / std::sqrt(3.0));
    L.basis.resize(2, 2);
    L.basis << s, 0.5 * s, 0.0, 0.5 * std::sqrt(3.0) * s;
    return L;
  }
  throw ConfigError("unknown lattice '" + name + "' (Z1, Z2, Z3, hex)");
}

// ------------------------------------------------------------- subcommands

struct CountZerosArgs {
  std::string function = "blaschke-demo";
  std::string lemma = "all";
  double b = 1.2, T = 5.0, c = 1.0, T_center = 2.5;
};

int run_count_zeros(const Common& cm, const CountZerosArgs& a) {
  const QuadratureSpec spec = spec_from(cm);
  AnalyticFunction F;
  if (a.function == "blaschke-demo") {
    F = blaschke_demo();
  } else if (a.function == "modular") {
    F = modular_phi_function();
  } else {
    throw ConfigError("unknown function '" + a.function + "' (blaschke-demo, modular)");
  }
  if (cm.self_test) {
    std::vector<Check> out;
    const AnalyticFunction B = blaschke_demo();
    const CountingBox box{1.2, 0.5, 5.0, 1.0};
    const auto big = big_rectangle_weighted_sum(B, box);
    const auto zb = brute_force_zeros(B, Rect{0.5, 1.2, 0.0, 5.0}, 1e-3);
    const double db = big_rectangle_direct(zb, box);
    out.push_back({"big-rect quadrature = direct", std::abs(big.value - db) <= std::max(1e-6, 1e-6 * std::abs(db)),
                   big.value - db});
    const auto car = carleman_weighted_count(B, 1.2, 5.0);
    const auto zc = brute_force_zeros(B, Rect{1.2, 6.2, -5.0, 5.0}, 1e-3);
    const double dc = carleman_direct(zc, 1.2, 5.0);
    out.push_back({"carleman quadrature = direct", std::abs(car.value - dc) <= std::max(1e-6, 1e-6 * std::abs(dc)),
                   car.value - dc});
    return report(cm, "zerocount", out);
  }
  const double h = 0.5;
  Table t({"lemma", "quadrature [1]", "direct_sum [1]", "difference [1]", "proximity_warning"});
  auto row = [&](const std::string& name, const LemmaValue& q, double direct) {
    t.add_row(std::vector<std::string>{name, format_number(q.value), format_number(direct),
                                       format_number(q.value - direct), q.proximity_warning ? "1" : "0"});
  };
  const bool all = a.lemma == "all";
  if (!all && a.lemma != "carleman" && a.lemma != "big-rect" && a.lemma != "small-rect") {
    throw ConfigError("unknown lemma '" + a.lemma + "' (carleman, big-rect, small-rect, all)");
  }
  if (all || a.lemma == "carleman") {
    const auto q = carleman_weighted_count(F, a.b, a.T, spec);
    const auto z = brute_force_zeros(F, Rect{a.b, a.b + a.T, -a.T, a.T}, 1e-4);
    row("carleman", q, carleman_direct(z, a.b, a.T));
  }
  const CountingBox box{a.b, h, a.T, a.c};
  if (all || a.lemma == "big-rect") {
    const auto q = big_rectangle_weighted_sum(F, box, spec);
    const auto z = brute_force_zeros(F, Rect{h, a.b, 0.0, a.T}, 1e-4);
    row("big-rect", q, big_rectangle_direct(z, box));
  }
  if (all || a.lemma == "small-rect") {
    const auto q = small_rectangle_weighted_sum(F, box, a.T_center, spec);
    const double half = kPi / a.c;
    const auto z = brute_force_zeros(F, Rect{h, a.b, a.T_center - half, a.T_center + half}, 1e-4);
    row("small-rect", q, small_rectangle_direct(z, box, a.T_center));
  }
  emit(cm, t);
  return 0;
}

struct CuspTermArgs {
  std::vector<double> T{50.0, 100.0, 200.0, 400.0};
  double A = 1.0;
};

int run_cusp_term(const Common& cm, const CuspTermArgs& a) {
  if (cm.self_test) {
    std::vector<Check> out;
    const double s = sine_log_constant();
    out.push_back({"sine-log constant = 1 - Euler gamma", std::abs(s - (1.0 - kEulerGamma)) <= 1e-9, s});
    const double cd = c_d_constant(1);
    out.push_back({"C(1) = -log 2", std::abs(cd + kLog2) <= 1e-10, cd});
    return report(cm, "cusp_geometry", out);
  }
  Table t({"T [1/length]", "cusp_term [1]", "leading [1]", "residual [1]"});
  for (double T : a.T) {
    const auto r = cusp_term(TestFunctionPsi{T, a.A}, Lattice::integer(1), 1);
    t.add_row(std::vector<double>{r.T, r.value, r.predicted, r.residual});
  }
  emit(cm, t);
  return 0;
}

struct LatticeArgs {
  std::string lattice = "Z1";
  std::string basis_file;
};

int run_lattice_const(const Common& cm, const LatticeArgs& a) {
  if (cm.self_test) {
    std::vector<Check> out;
    const double c1 = c1_lattice(Lattice::integer(1));
    out.push_back({"C1(Z) = 1 - log 2", std::abs(c1 - (1.0 - kLog2)) <= 1e-8, c1});
    const auto g = gamma_lattice(Lattice::integer(1));
    out.push_back({"gamma(Z) = Euler gamma", std::abs(g.value - kEulerGamma) <= 1e-8, g.value});
    return report(cm, "cusp_geometry", out);
  }
  const Lattice L = a.basis_file.empty() ? named_lattice(a.lattice) : lattice_from_json(read_json_file(a.basis_file));
  const auto g = gamma_lattice(L);
  const double cd = c_d_constant(L.d);
  const double c1 = c1_lattice(L);
  Table t({"quantity", "value [1]", "error [1]"});
  t.add_row(std::vector<std::string>{"gamma_lattice", format_number(g.value), format_number(g.error)});
  t.add_row(std::vector<std::string>{"C_d", format_number(cd), "0"});
  t.add_row(std::vector<std::string>{"C1", format_number(c1), format_number(g.error)});
  emit(cm, t);
  return 0;
}

struct ParametrixArgs {
  std::string curvature = "hyperbolic";
  int d = 1;
  int kmax = 3;
  double r_max = 5.0;
  int n = 400;
  bool profile = false;
};

RadialCurvatureProfile curvature_profile(const ParametrixArgs& a) {
  if (a.curvature == "hyperbolic") return RadialCurvatureProfile::constant(-1.0, a.r_max);
  if (a.curvature == "pinched") {
    RadialCurvatureProfile p;
    p.K = [](double r) { return -1.0 - 0.5 * std::exp(-r * r); };
    p.r_max = a.r_max;
    p.K_min = -1.5;
    p.K_max = -1.0;
    return p;
  }
  if (a.curvature == "spherical") return RadialCurvatureProfile::constant(1.0, a.r_max);
  throw ConfigError("unknown curvature '" + a.curvature + "' (hyperbolic, pinched, spherical)");
}

int run_parametrix(const Common& cm, const ParametrixArgs& a) {
  if (cm.self_test) {
    std::vector<Check> out;
    const auto tab = u_k_radial(RadialCurvatureProfile::constant(-1.0, 5.0), 1, 3);
    for (int k = 0; k <= 3; ++k) {
      double sup = 0.0;
      for (std::size_t i = 0; i < tab.grid.size(); ++i) sup = std::max(sup, std::abs(tab.u[k][i] - (k == 0 ? 1.0 : 0.0)));
      out.push_back({"K = -1: sup |u_" + std::to_string(k) + " - delta|", sup <= (k == 0 ? 1e-8 : 1e-6), sup});
    }
    return report(cm, "parametrix", out);
  }
  const auto tab = u_k_radial(curvature_profile(a), a.d, a.kmax, a.n);
  if (a.profile) {
    Table t({"r [length]", "k", "u_k [1]"});
    for (int k = 0; k <= a.kmax; ++k) {
      for (std::size_t i = 0; i < tab.grid.size(); ++i) t.add_row(std::vector<double>{tab.grid[i], double(k), tab.u[k][i]});
    }
    emit(cm, t);
    return 0;
  }
  const auto fits = verify_bound_uk(tab);
  Table t({"k", "sup_abs_u_k_minus_delta [1]", "resolution_change [1]", "growth_a [1]", "growth_b [1/length]"});
  for (int k = 0; k <= a.kmax; ++k) {
    double sup = 0.0;
    for (std::size_t i = 0; i < tab.grid.size(); ++i) sup = std::max(sup, std::abs(tab.u[k][i] - (k == 0 ? 1.0 : 0.0)));
    const auto& f = fits[k];
    t.add_row(std::vector<double>{double(k), sup, tab.resolution_change[k], f.finite ? f.a : NAN, f.finite ? f.b : NAN});
  }
  emit(cm, t);
  return 0;
}

struct PhaseArgs {
  std::string model;
  std::string spectrum;
  double T_max = 20.0;
  double T_step = 1.0;
  double smooth_A = 0.0;
};

int run_phase(const Common& cm, const PhaseArgs& a) {
  if (cm.self_test) {
    std::vector<Check> out;
    const PhiModel m = demo_model();
    double unit = 0.0, fe = 0.0, rs = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = -50.0 + 0.5 * i;
      unit = std::max(unit, std::abs(std::abs(phi_eval(m, cplx(0.5, t))) - 1.0));
      rs = std::max(rs, phase_derivative_parts(m, t).resonance_sum);
      const cplx s(-1.0 + 0.017 * i, 0.3 * t);
      fe = std::max(fe, std::abs(phi_eval(m, s) * phi_eval(m, 1.0 - s) - 1.0));
    }
    out.push_back({"axis unitarity", unit <= 1e-10, unit});
    out.push_back({"phi(s) phi(d - s) = 1", fe <= 1e-10, fe});
    out.push_back({"resonance sum <= 0", rs <= 0.0, rs});
    return report(cm, "scattering", out);
  }
  if (!(a.T_step > 0.0) || !(a.T_max >= 0.0)) throw ConfigError("phase: need T_step > 0 and T_max >= 0");
  const PhiModel m = a.model.empty() ? demo_model() : phi_model_from_json(read_json_file(a.model));
  m.validate();
  SpectrumData spec;
  if (!a.spectrum.empty()) spec = spectrum_from_json(read_json_file(a.spectrum));
  std::optional<Smoother> sm;
  if (a.smooth_A > 0.0) sm.emplace(a.smooth_A);
  Table t({"T [1/length]", "S [1]", "phase_derivative [length]", "resonance_sum [length]", "tilde_N [1]",
           "tilde_N_smoothed [1]"});
  const int n = static_cast<int>(std::floor(a.T_max / a.T_step + 1e-9));
  for (int i = 0; i <= n; ++i) {
    const double T = i * a.T_step;
    const auto pd = phase_derivative_parts(m, T);
    const double N = tilde_N(spec, m, T);
    double Ns = N;
    if (sm) Ns = (*sm)([&](double x) { return tilde_N(spec, m, std::abs(x)) * (x < 0 ? -1.0 : 1.0); }, T);
    t.add_row(std::vector<double>{T, scattering_phase(m, T), pd.value, pd.resonance_sum, N, Ns});
  }
  emit(cm, t);
  return 0;
}

struct WeylFitArgs {
  std::string samples;
  int d = 1;
  double a = 0.25, b = -1.0 / kPi, c = 0.7;
  double noise = 1.0;
  double T_max = 1e4;
  int n = 40;
};

int run_weyl_fit(const Common& cm, const WeylFitArgs& a) {
  std::mt19937_64 rng(cm.seed);
  auto synthetic = [&](double noise) {
    std::vector<std::pair<double, double>> s;
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double T0 = a.T_max / 100.0;
    for (int i = 0; i < a.n; ++i) {
      const double T = T0 * std::pow(100.0, double(i) / (a.n - 1));
      const double v = a.a * std::pow(T, a.d + 1) + a.b * T * std::log(T) + a.c * T;
      s.emplace_back(T, v + noise * U(rng) * std::pow(T, a.d) / std::log(T));
    }
    return s;
  };
  if (cm.self_test) {
    std::vector<Check> out;
    const auto r = weyl_fit(synthetic(0.0), a.d);
    out.push_back({"exact data: leading", std::abs(r.a_lead - a.a) <= 1e-10 * std::abs(a.a), r.a_lead});
    out.push_back({"exact data: T log T", std::abs(r.b_log - a.b) <= 1e-8 * std::abs(a.b), r.b_log});
    return report(cm, "scattering", out);
  }
  std::vector<std::pair<double, double>> s;
  if (!a.samples.empty()) {
    const json j = read_json_file(a.samples);
    reject_unknown_keys(j, {"samples"}, "weyl-fit samples");
    for (const auto& p : j.at("samples")) s.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  } else {
    s = synthetic(a.noise);
  }
  const auto r = weyl_fit(s, a.d);
  Table t({"coefficient", "value [1]"});
  t.add_row(std::vector<std::string>{"T^(d+1)", format_number(r.a_lead)});
  t.add_row(std::vector<std::string>{"T log T", format_number(r.b_log)});
  t.add_row(std::vector<std::string>{"T", format_number(r.c_lin)});
  t.add_row(std::vector<std::string>{"weighted_residual_norm", format_number(r.residual_norm)});
  emit(cm, t);
  return 0;
}

struct ModelArgs {
  double T = 100.0;
  std::string zeros_out;
};

int run_model_surface(const Common& cm, const ModelArgs& a) {
  double unit = 0.0, fe = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.5 + 2.0 * i;
    unit = std::max(unit, std::abs(std::abs(modular_phi(cplx(0.5, t))) - 1.0));
    const cplx s(0.05 + 0.009 * i, 0.37 * i - 15.0);
    fe = std::max(fe, std::abs(modular_phi(s) * modular_phi(1.0 - s) - 1.0));
  }
  if (cm.self_test) {
    return report(cm, "scattering",
                  {{"modular axis unitarity", unit <= 1e-9, unit}, {"modular phi(s) phi(1 - s) = 1", fe <= 1e-9, fe}});
  }
  if (!(a.T > 1.0)) throw ConfigError("model-surface: T must exceed 1");
  // zeros of phi sit at 3/4 + i gamma/2; resonances are their reflections d - conj(zero)
  const auto z = brute_force_zeros(modular_phi_function(), Rect{0.6, 0.95, 0.5, a.T}, 1e-3);
  ResonanceSet r;
  r.d = 1;
  for (const auto& e : z.entries) r.entries.push_back({cplx(1.0 - e.location.real(), e.location.imag()), e.multiplicity});
  if (!a.zeros_out.empty()) write_text_file(a.zeros_out, to_json(z).dump(2) + "\n");
  const auto s = strip_weighted_sum(r, 1.0, a.T, LeadingData{std::sqrt(kPi), 0.0});
  const double target = a.T * std::log(a.T) / (2.0 * kPi);
  Table t({"quantity", "value [1]"});
  t.add_row(std::vector<std::string>{"axis_unitarity_defect", format_number(unit)});
  t.add_row(std::vector<std::string>{"functional_equation_defect", format_number(fe)});
  t.add_row(std::vector<std::string>{"zeros_located", std::to_string(s.count)});
  t.add_row(std::vector<std::string>{"strip_weighted_sum", format_number(s.value)});
  t.add_row(std::vector<std::string>{"leading_T_log_T_over_2pi", format_number(target)});
  t.add_row(std::vector<std::string>{"relative_gap", format_number(std::abs(s.value - target) / target)});
  t.add_row(std::vector<std::string>{"sum_d_minus_2Re_rho", format_number(s.theorem_sum)});
  t.add_row(std::vector<std::string>{"two_term_prediction", format_number(*s.predicted)});
  emit(cm, t);
  return 0;
}

struct GeneralArgs {
  std::string resonances;
  std::string spectrum;
  double T = 20.0;
};

ResonanceSet demo_resonances() {
  ResonanceSet r;
  r.d = 1;
  // density ~ linear in height, real parts drifting left
  for (int n = 1; n <= 400; ++n) {
    const double y = 0.5 * n;
    const double x = 0.5 - 0.3 - 0.2 * std::sin(0.7 * n);
    r.entries.push_back({cplx(x, y), 1});
    r.entries.push_back({cplx(x, -y), 1});
  }
  return r;
}

int run_general_count(const Common& cm, const GeneralArgs& a) {
  if (cm.self_test) {
    std::vector<Check> out;
    std::mt19937_64 rng(cm.seed);
    std::uniform_real_distribution<double> X(-2.0, 0.49), Y(-30.0, 30.0), Tt(0.5, 25.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const cplx rho(X(rng), Y(rng));
      const double T = Tt(rng);
      if (std::abs(std::abs(rho - 0.5) - T) < 1e-3) continue;
      auto f = [&](double t) { return (1.0 - 2.0 * rho.real()) / std::norm(rho - 0.5 + cplx(0.0, t)); };
      std::vector<double> pts{-T, T};
      if (std::abs(rho.imag()) < T) pts.insert(pts.begin() + 1, -rho.imag());
      const double q = value_or_throw(integrate_panels(f, pts, {1e-13, 1e-15, 4000}), "self-test");
      worst = std::max(worst, std::abs(q - lorentzian_strip_integral(rho, 1, T)));
    }
    out.push_back({"lorentzian closed form = quadrature", worst <= 1e-8, worst});
    return report(cm, "scattering", out);
  }
  const ResonanceSet r = a.resonances.empty() ? demo_resonances() : resonance_set_from_json(read_json_file(a.resonances));
  SpectrumData spec;
  if (!a.spectrum.empty()) spec = spectrum_from_json(read_json_file(a.spectrum));
  const auto g = general_weyl_count(r, spec, a.T);
  Table t({"quantity", "value [1]"});
  t.add_row(std::vector<std::string>{"T", format_number(a.T)});
  t.add_row(std::vector<std::string>{"eigenvalue_count", std::to_string(g.eigen_count)});
  t.add_row(std::vector<std::string>{"disc_count", std::to_string(g.disc_count)});
  t.add_row(std::vector<std::string>{"lhs", format_number(g.lhs)});
  t.add_row(std::vector<std::string>{"remainder_R", format_number(g.remainder)});
  t.add_row(std::vector<std::string>{"remainder_far", format_number(g.remainder_far)});
  t.add_row(std::vector<std::string>{"remainder_near_shell", format_number(g.remainder_near)});
  t.add_row(std::vector<std::string>{"convergence_partial_sum", format_number(g.convergence_sum)});
  emit(cm, t);
  return 0;
}

// Splice "--key value" pairs from a JSON config right after the subcommand token.
std::vector<std::string> expand_config(const std::vector<std::string>& args, const std::set<std::string>& subs) {
  std::vector<std::string> out;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const json j = read_json_file(path);
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  std::vector<std::string> extra;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string flag = "--" + it.key();
    auto scalar = [](const json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      if (v.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        return os.str();
      }
      throw ConfigError("config: unsupported value type");
    };
    if (it->is_boolean()) {
      if (it->get<bool>()) extra.push_back(flag);
    } else if (it->is_array()) {
      extra.push_back(flag);
      for (const auto& v : *it) extra.push_back(scalar(v));
    } else {
      extra.push_back(flag);
      extra.push_back(scalar(*it));
    }
  }
  bool placed = false;
  for (const auto& a : args) {
    out.push_back(a);
    if (!placed && subs.count(a)) {
      out.insert(out.end(), extra.begin(), extra.end());
      placed = true;
    }
  }
  if (!placed) throw ConfigError("config: no subcommand given");
  return out;
}

void diagnostic(const std::string& kind, const std::exception& e, double best = NAN, double err = NAN) {
  json j{{"error", kind}, {"message", e.what()}};
  if (std::isfinite(best)) j["best_estimate"] = best;
  if (std::isfinite(err)) j["error_estimate"] = err;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cusplab: numerical experiments on cusp spectral counting"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::map<std::string, Common> common;
  std::map<std::string, std::function<int()>> runners;

  CountZerosArgs cz;
  auto* s1 = app.add_subcommand("count-zeros", "harmonic zero-counting identities against located zeros");
  add_common(s1, common["count-zeros"]);
  s1->add_option("--function", cz.function, "blaschke-demo or modular");
  s1->add_option("--lemma", cz.lemma, "carleman, big-rect, small-rect or all");
  s1->add_option("--b", cz.b);
  s1->add_option("--T", cz.T);
  s1->add_option("--c", cz.c);
  s1->add_option("--T-center", cz.T_center);
  runners["count-zeros"] = [&] { return run_count_zeros(common["count-zeros"], cz); };

  CuspTermArgs ct;
  auto* s2 = app.add_subcommand("cusp-term", "cusp contribution for Lambda = Z against its leading terms");
  add_common(s2, common["cusp-term"]);
  s2->add_option("--T", ct.T)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  s2->add_option("--A", ct.A)->check(CLI::PositiveNumber);
  runners["cusp-term"] = [&] { return run_cusp_term(common["cusp-term"], ct); };

  LatticeArgs la;
  auto* s3 = app.add_subcommand("lattice-const", "renormalised lattice constants");
  add_common(s3, common["lattice-const"]);
  s3->add_option("--lattice", la.lattice, "Z1, Z2, Z3 or hex");
  s3->add_option("--basis", la.basis_file, "JSON lattice {d, basis}");
  runners["lattice-const"] = [&] { return run_lattice_const(common["lattice-const"], la); };

  ParametrixArgs pa;
  auto* s4 = app.add_subcommand("parametrix", "transport coefficients u_k for a radial curvature profile");
  add_common(s4, common["parametrix"]);
  s4->add_option("--curvature", pa.curvature, "hyperbolic, pinched or spherical");
  s4->add_option("--d", pa.d)->check(CLI::Range(1, 3));
  s4->add_option("--kmax", pa.kmax)->check(CLI::Range(0, 5));
  s4->add_option("--r-max", pa.r_max)->check(CLI::PositiveNumber);
  s4->add_option("--n", pa.n)->check(CLI::Range(40, 20000));
  s4->add_flag("--profile", pa.profile, "emit u_k on the whole grid");
  runners["parametrix"] = [&] { return run_parametrix(common["parametrix"], pa); };

  PhaseArgs ph;
  auto* s5 = app.add_subcommand("phase", "scattering phase and combined counting function");
  add_common(s5, common["phase"]);
  s5->add_option("--model", ph.model, "JSON PhiModel");
  s5->add_option("--spectrum", ph.spectrum, "JSON SpectrumData");
  s5->add_option("--T-max", ph.T_max);
  s5->add_option("--T-step", ph.T_step);
  s5->add_option("--smooth", ph.smooth_A, "smoothing width A (0 disables)");
  runners["phase"] = [&] { return run_phase(common["phase"], ph); };

  WeylFitArgs wf;
  auto* s6 = app.add_subcommand("weyl-fit", "fit a T^(d+1) + b T log T + c T");
  add_common(s6, common["weyl-fit"]);
  s6->add_option("--samples", wf.samples, "JSON {samples: [[T, value], ...]}");
  s6->add_option("--d", wf.d)->check(CLI::Range(1, 3));
  s6->add_option("--noise", wf.noise, "noise amplitude in units of T^d/log T (synthetic data)");
  s6->add_option("--T-max", wf.T_max);
  s6->add_option("--n", wf.n)->check(CLI::Range(10, 100000));
  runners["weyl-fit"] = [&] { return run_weyl_fit(common["weyl-fit"], wf); };

  ModelArgs mo;
  auto* s7 = app.add_subcommand("model-surface", "modular scattering determinant end to end");
  add_common(s7, common["model-surface"]);
  s7->add_option("--T", mo.T);
  s7->add_option("--zeros-out", mo.zeros_out, "write located zeros as JSON");
  runners["model-surface"] = [&] { return run_model_surface(common["model-surface"], mo); };

  GeneralArgs ga;
  auto* s8 = app.add_subcommand("general-count", "resonance disc count from the Lorentzian identity");
  add_common(s8, common["general-count"]);
  s8->add_option("--resonances", ga.resonances, "JSON ResonanceSet");
  s8->add_option("--spectrum", ga.spectrum, "JSON SpectrumData");
  s8->add_option("--T", ga.T)->check(CLI::PositiveNumber);
  runners["general-count"] = [&] { return run_general_count(common["general-count"], ga); };

  std::set<std::string> names;
  for (const auto& [k, v] : runners) names.insert(k);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args, names);
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    diagnostic("config", e);
    return 2;
  }

  for (auto* sub : app.get_subcommands()) {
    try {
      return runners.at(sub->get_name())();
    } catch (const ConvergenceError& e) {
      diagnostic("convergence", e, e.best_estimate(), e.error_estimate());
      return 3;
    } catch (const ResourceError& e) {
      diagnostic("resource", e);
      return 3;
    } catch (const ContourProximityError& e) {
      diagnostic("contour-proximity", e);
      return 3;
    } catch (const ConfigError& e) {
      diagnostic("config", e);
      return 2;
    } catch (const PreconditionError& e) {
      diagnostic("precondition", e);
      return 2;
    } catch (const DomainError& e) {
      diagnostic("domain", e);
      return 2;
    } catch (const PoleError& e) {
      diagnostic("pole", e);
      return 2;
    } catch (const Error& e) {
      diagnostic("numerical", e);
      return 3;
    }
  }
  return 2;
}
