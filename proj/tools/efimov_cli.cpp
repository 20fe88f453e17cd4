#include "CLI11.hpp"

#include "efimov/born_oppenheimer.hpp"
#include "efimov/channels.hpp"
#include "efimov/errors.hpp"
#include "efimov/hyperradial.hpp"
#include "efimov/io.hpp"
#include "efimov/kernels.hpp"
#include "efimov/stm.hpp"
#include "efimov/two_body.hpp"
#include "efimov/universal.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace efimov;

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

enum Exit { exit_ok = 0, exit_verify_failed = 1, exit_config = 2, exit_convergence = 3 };

struct Output {
  io::Table table;
  io::Json results = io::Json::object();
};

struct Common {
  std::string config;
  std::string out;
  std::string manifest;
  double hbar2_over_m = 0.0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key = value file or a JSON manifest of an earlier run");
  sub->add_option("--out", c.out, "CSV output path (default: stdout)");
  sub->add_option("--manifest", c.manifest, "JSON manifest path (default: <out>.json)");
  sub->add_option("--hbar2-over-m", c.hbar2_over_m, "energy unit constant hbar^2/m (energy * length^2)")
      ->check(CLI::PositiveNumber);
}

double energy_unit(const Common& c) { return c.hbar2_over_m > 0.0 ? c.hbar2_over_m : 1.0; }

// ---------------------------------------------------------------- universal

struct UniversalArgs {
  std::string mode = "curves";
  double kappa_star = 1.0;
  int levels = 3;
  int points = 200;
  double a_minus = -1.0;
  double eta = 0.1;
  double decades = 3.0;
};

Output run_universal(const UniversalArgs& u, const Common& c) {
  Output o;
  const double lambda0 = scaling_factor();
  if (u.kappa_star <= 0.0) throw ConfigError("kappa-star must be positive");
  if (u.mode == "curves") {
    o.table.columns = {"inv_a", "level", "kappa", "energy"};
    const auto rel = universal_relations(u.kappa_star);
    for (int n = 0; n < u.levels; ++n) {
      const double shrink = std::pow(lambda0, -n);
      const double lo = shrink / rel.a_minus, hi = shrink / rel.a_star;
      for (int i = 0; i <= u.points; ++i) {
        const double inv_a = lo + (hi - lo) * i / u.points;
        const auto k = trimer_wavenumber(n, inv_a, u.kappa_star);
        if (!k) continue;
        o.table.add({inv_a, double(n), -*k, -(*k) * (*k) * energy_unit(c)});
      }
    }
  } else if (u.mode == "constants") {
    const auto rel = universal_relations(u.kappa_star);
    o.table.columns = {"s0", "scaling_factor", "a_minus", "a_plus", "a_star", "kappa_a_minus_from_delta",
                       "kappa_a_star_from_delta"};
    o.table.add({boson_s0, lambda0, rel.a_minus, rel.a_plus, rel.a_star, threshold_constant_from_delta(),
                 dimer_crossing_constant_from_delta()});
  } else if (u.mode == "recombination") {
    if (u.a_minus >= 0.0) throw ConfigError("a-minus must be negative");
    o.table.columns = {"a", "l3_over_a4"};
    for (int i = 0; i <= u.points; ++i) {
      const double a = u.a_minus * std::pow(10.0, u.decades * i / u.points);
      o.table.add({a, recombination_rate(a, u.a_minus, u.eta) / std::pow(a, 4)});
    }
  } else {
    throw ConfigError("unknown universal mode " + u.mode);
  }
  return o;
}

// ---------------------------------------------------------------- channels

struct ChannelArgs {
  std::string system = "bosons";
  bool unitarity = false;
  double r_over_a = 0.0;
  int n_max = 4;
  double mass_ratio = 1.0;
  std::string statistics = "bosons";
  std::string pairs = "12,23,31";
  bool identical_pair_resonant = false;
  int ell = 0;
};

std::vector<Pair> parse_pairs(const std::string& text) {
  std::vector<Pair> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "12") pairs.push_back(Pair::p12);
    else if (item == "23") pairs.push_back(Pair::p23);
    else if (item == "31" || item == "13") pairs.push_back(Pair::p31);
    else throw ConfigError("unknown pair " + item);
  }
  return pairs;
}

Statistics parse_statistics(const std::string& s) {
  if (s == "bosons") return Statistics::bosons;
  if (s == "fermions") return Statistics::fermions;
  if (s == "distinguishable") return Statistics::distinguishable;
  throw ConfigError("unknown statistics " + s);
}

void add_exponent(io::Table& t, const ChannelExponent& e) {
  t.add({double(e.index), e.s_squared, e.s_abs(), e.efimov() ? 1.0 : 0.0,
         e.efimov() ? e.scaling_factor() : nan_value});
}

Output run_channels(const ChannelArgs& a, const Common&) {
  Output o;
  o.table.columns = {"index", "s_squared", "s_abs", "efimov", "scaling_factor"};
  const double x = a.unitarity ? 0.0 : a.r_over_a;
  if (a.system == "bosons") {
    for (const auto& e : boson_exponents(a.n_max, x)) add_exponent(o.table, e);
  } else if (a.system == "distinguishable") {
    std::vector<std::pair<Pair, double>> pairs;
    for (Pair p : parse_pairs(a.pairs)) pairs.emplace_back(p, x);
    for (const auto& e : distinguishable_exponents(pairs, a.n_max)) add_exponent(o.table, e);
  } else if (a.system == "two-plus-one") {
    const auto pattern = a.identical_pair_resonant ? TwoPlusOnePattern::all_pairs : TwoPlusOnePattern::heavy_light_only;
    add_exponent(o.table, two_plus_one_exponent(a.mass_ratio, parse_statistics(a.statistics), pattern, a.ell, x, x));
  } else if (a.system == "triton") {
    if (x == 0.0) {
      const auto t = triton_channel_exponents();
      add_exponent(o.table, t.f_channel);
      add_exponent(o.table, t.phi_channel);
    } else {
      for (const auto& e : triton_exponents(x, x, a.n_max)) add_exponent(o.table, e);
    }
  } else if (a.system == "critical") {
    o.table.columns = {"ell", "critical_mass_ratio", "born_oppenheimer"};
    for (int ell = 1; ell <= a.n_max; ++ell)
      o.table.add({double(ell), critical_mass_ratio(ell), bo::critical_mass_ratio(ell)});
  } else {
    throw ConfigError("unknown system " + a.system);
  }
  return o;
}

// ---------------------------------------------------------------- hyperradial

struct HyperArgs {
  std::string mode = "levels";
  double s0 = boson_s0;
  double wall = 1.0;
  std::string inv_a = "0";
  double kappa_min = 1e-4;
  double kappa_max = 10.0;
  int thresholds = 3;
  std::string inner = "wall";
  double b = 1.0;
  double depth = 1.0;
};

Output run_hyperradial(const HyperArgs& h, const Common& c) {
  Output o;
  const double inv_a = io::parse_number(h.inv_a, "inv-a");
  const auto boundary = hyper::Boundary::hard_wall(h.wall);
  if (h.mode == "levels") {
    hyper::Channel ch = hyper::Channel::efimov(h.s0, boundary);
    if (inv_a != 0.0)
      ch = hyper::Channel::adiabatic(std::make_shared<const ChannelTable>(ThreeBodySystem::identical_bosons()),
                                     inv_a, boundary);
    const auto set = hyper::solve_bound_states(ch, h.kappa_min, h.kappa_max);
    o.table.columns = {"level", "kappa", "energy", "nodes", "ratio"};
    for (std::size_t n = 0; n < set.energies.size(); ++n)
      o.table.add({double(n), set.kappas[n], set.energies[n] * energy_unit(c), double(set.nodes[n]),
                   n ? set.energies[n - 1] / set.energies[n] : nan_value});
    o.results["approximation"] = inv_a != 0.0 ? "single-channel adiabatic" : "fixed exponent";
  } else if (h.mode == "thresholds") {
    const auto table = std::make_shared<const ChannelTable>(ThreeBodySystem::identical_bosons());
    const auto am = hyper::adiabatic_thresholds(table, boundary, h.thresholds);
    o.table.columns = {"level", "a_minus", "ratio"};
    for (std::size_t n = 0; n < am.size(); ++n) o.table.add({double(n), am[n], n ? am[n] / am[n - 1] : nan_value});
    o.results["approximation"] = "single-channel adiabatic";
  } else if (h.mode == "phase") {
    hyper::Channel ch = hyper::Channel::efimov(h.s0, boundary);
    if (h.inner == "vdw") ch = hyper::Channel::vdw_well(h.s0, h.b, h.wall);
    else if (h.inner == "square") ch = hyper::Channel::square_well(h.s0, h.b, h.depth);
    else if (h.inner != "wall") throw ConfigError("unknown inner region " + h.inner);
    const auto p = hyper::three_body_phase(ch, h.s0, h.inner == "wall" ? 1.0 : h.b);
    o.table.columns = {"phase", "residual", "fit_radius"};
    o.table.add({p.phase, p.residual, p.fit_radius});
  } else {
    throw ConfigError("unknown hyperradial mode " + h.mode);
  }
  return o;
}

// ---------------------------------------------------------------- stm

struct StmArgs {
  std::string model = "zero-range";
  std::string a = "inf";
  double cutoff = 1.0;
  double r_star = 1.0;
  int tail = 6;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  int points = 400;
  int angular_points = 32;
  double p_min = 0.0;
  double p_max = 0.0;
  bool exact_domain = false;
  int thresholds = 0;
};

std::shared_ptr<const FormFactor> separable_form(const StmArgs& s, double inv_a, double& unit_length) {
  if (s.model == "step") {
    unit_length = 1.0;
    return std::make_shared<const FormFactor>(FormFactor::step(1.0));
  }
  if (s.model == "power-law") {
    unit_length = 0.5 * universal_effective_range(s.tail);
    return std::make_shared<const FormFactor>(est_form_factor(ZeroEnergyState::universal_tail(s.tail, 1.0, inv_a)));
  }
  throw ConfigError("unknown stm model " + s.model);
}

void add_levels(Output& o, const stm::LevelSet& set, double unit) {
  o.table.columns = {"level", "kappa", "energy", "ratio", "resolved"};
  for (std::size_t n = 0; n < set.energies.size(); ++n)
    o.table.add({double(n), set.kappas[n], set.energies[n] * unit,
                 n ? set.energies[n - 1] / set.energies[n] : nan_value, set.resolved[n] ? 1.0 : 0.0});
  o.results["grid"] = {{"points", set.points}, {"p_min", set.p_min}, {"p_max", set.p_max},
                       {"grid_flag", set.grid_flag}};
  if (set.threshold) o.results["two_body_threshold"] = *set.threshold * unit;
}

Output run_stm(const StmArgs& s, const Common& c) {
  Output o;
  const double inv_a = 1.0 / io::parse_number(s.a, "a");
  stm::KernelOptions opt;
  opt.points = s.points;
  opt.angular_points = s.angular_points;
  opt.p_min = s.p_min;
  opt.p_max = s.p_max;
  const double unit = energy_unit(c);
  if (s.model == "zero-range") {
    if (s.thresholds > 0) {
      const auto t = stm::threshold_scattering_lengths_zero_range(s.cutoff, s.thresholds, opt);
      o.table.columns = {"level", "a_minus", "ratio"};
      for (std::size_t n = 0; n < t.a_minus.size(); ++n)
        o.table.add({double(n), t.a_minus[n], n ? t.a_minus[n] / t.a_minus[n - 1] : nan_value});
      o.results["spurious"] = t.spurious;
      o.results["unresolved"] = t.unresolved;
      return o;
    }
    const double kmax = s.kappa_max > 0 ? s.kappa_max : s.cutoff;
    const double kmin = s.kappa_min > 0 ? s.kappa_min : 1e-5 * s.cutoff;
    add_levels(o, stm::solve_trimers_zero_range(inv_a, s.cutoff, kmin, kmax, opt, s.exact_domain), unit);
    return o;
  }
  if (s.model == "narrow") {
    const double kmax = s.kappa_max > 0 ? s.kappa_max : 10.0 / s.r_star;
    const double kmin = s.kappa_min > 0 ? s.kappa_min : 1e-5 / s.r_star;
    if (s.thresholds > 0) {
      if (opt.p_min == 0.0) opt.p_min = 1e-7 / s.r_star;
      const auto k = stm::StmKernel::contact(TMatrixModel::narrow_resonance(0.0, s.r_star), 1000.0 / s.r_star, opt);
      const auto t = stm::threshold_scattering_lengths(k, s.thresholds, 1.0);
      o.table.columns = {"level", "a_minus", "ratio"};
      for (std::size_t n = 0; n < t.a_minus.size(); ++n)
        o.table.add({double(n), t.a_minus[n], n ? t.a_minus[n] / t.a_minus[n - 1] : nan_value});
      return o;
    }
    const auto set = stm::solve_trimers_narrow_resonance(inv_a, s.r_star, kmin, kmax, opt);
    add_levels(o, set, unit);
    if (inv_a == 0.0 && !set.kappas.empty()) {
      const auto ks = stm::extrapolate_kappa_star(set, boson_s0);
      o.results["kappa_star"] = {{"value", ks.kappa_star}, {"level", ks.level}, {"residual", ks.residual}};
    }
    return o;
  }
  double unit_length = 1.0;
  const auto form = separable_form(s, inv_a, unit_length);
  if (opt.p_max == 0.0) opt.p_max = 50.0 * form->scale();
  if (s.thresholds > 0) {
    const auto k = stm::StmKernel::separable(TMatrixModel::separable(0.0, form), opt);
    const auto t = stm::threshold_scattering_lengths(k, s.thresholds, 1.0);
    o.table.columns = {"level", "a_minus", "ratio"};
    for (std::size_t n = 0; n < t.a_minus.size(); ++n)
      o.table.add({double(n), t.a_minus[n], n ? t.a_minus[n] / t.a_minus[n - 1] : nan_value});
    return o;
  }
  const double kmax = s.kappa_max > 0 ? s.kappa_max : 10.0 * form->scale();
  const double kmin = s.kappa_min > 0 ? s.kappa_min : 1e-4 * form->scale();
  const auto set = stm::solve_trimers_separable(form, inv_a, kmin, kmax, opt);
  add_levels(o, set, unit);
  o.results["half_effective_range"] = unit_length;
  return o;
}

// ---------------------------------------------------------------- triton

struct TritonArgs {
  stm::TritonInputs inputs;
  bool unitarity = false;
  double e_max = 30.0;
  double e_min = 0.0;
  int points = 400;
  int angular_points = 32;
  double p_max_factor = 50.0;
};

Output run_triton(TritonArgs t, const Common& c) {
  if (!(c.hbar2_over_m > 0.0)) throw ConfigError("triton requires --hbar2-over-m");
  t.inputs.hbar2_over_m = c.hbar2_over_m;
  const auto model = t.unitarity ? stm::TritonModel::unitarity(t.inputs) : stm::TritonModel::fit(t.inputs);
  stm::KernelOptions opt;
  opt.points = t.points;
  opt.angular_points = t.angular_points;
  opt.p_max = t.p_max_factor * std::max(model.triplet->scale(), model.singlet->scale());
  const auto r = stm::solve_triton(model, t.e_max, opt, t.e_min);
  Output o;
  o.table.columns = {"level", "energy", "kappa", "ratio"};
  for (std::size_t n = 0; n < r.trimer_energies.size(); ++n)
    o.table.add({double(n), r.trimer_energies[n], r.levels.kappas[n],
                 n ? r.levels.kappas[n - 1] / r.levels.kappas[n] : nan_value});
  o.results["deuteron_energy"] = r.deuteron_energy;
  auto fit = [](const stm::ChannelFit& f) {
    return io::Json{{"lambda", f.lambda}, {"r0", f.r0}, {"inv_a", f.inv_a}, {"r_e", f.r_e}, {"residual", f.residual}};
  };
  o.results["triplet_fit"] = fit(model.triplet_fit);
  o.results["singlet_fit"] = fit(model.singlet_fit);
  return o;
}

// ---------------------------------------------------------------- bo

struct BoArgs {
  std::string mode = "curve";
  double mass_ratio = 10.0;
  int L = 1;
  std::string inv_a = "0";
  double r_min = 0.05;
  double r_max = 20.0;
  int points = 200;
  double ratio_min = 1.0;
  double ratio_max = 100.0;
};

Output run_bo(const BoArgs& b, const Common&) {
  Output o;
  const double inv_a = io::parse_number(b.inv_a, "inv-a");
  if (b.mode == "curve") {
    o.table.columns = {"R", "kappa", "epsilon", "potential"};
    for (int i = 0; i <= b.points; ++i) {
      const double R = b.r_min * std::pow(b.r_max / b.r_min, double(i) / b.points);
      const auto k = bo::bonding_kappa(R, inv_a);
      if (!k) continue;
      o.table.add({R, *k, *bo::bonding_energy(R, inv_a), *bo::effective_potential(R, inv_a, b.L, b.mass_ratio)});
    }
  } else if (b.mode == "scaling") {
    o.table.columns = {"mass_ratio", "s0", "scaling_factor"};
    for (int i = 0; i <= b.points; ++i) {
      const double m = b.ratio_min * std::pow(b.ratio_max / b.ratio_min, double(i) / b.points);
      const auto s = bo::s0_estimate(m, b.L);
      o.table.add({m, s ? *s : nan_value, s ? std::exp(M_PI / *s) : nan_value});
    }
  } else if (b.mode == "critical") {
    o.table.columns = {"L", "critical_mass_ratio", "omega"};
    o.table.add({double(b.L), bo::critical_mass_ratio(b.L), bo::omega_constant()});
  } else {
    throw ConfigError("unknown bo mode " + b.mode);
  }
  return o;
}

// ---------------------------------------------------------------- twobody

struct TwoBodyArgs {
  std::string mode = "summary";
  std::string kind = "square_well";
  double strength = 1.0;
  double range = 1.0;
  double core = 0.0;
  int exponent = 6;
  double reduced_mass = 0.5;
  int tune = -1;
  std::string a = "inf";
  double r_e = 0.0;
};

Output run_twobody(const TwoBodyArgs& t, const Common& c) {
  Output o;
  if (t.mode == "dimer") {
    const double a = io::parse_number(t.a, "a");
    const double unit = energy_unit(c);
    const auto zr = dimer_energy(TMatrixModel::zero_range(1.0 / a));
    const auto er = dimer_energy(TMatrixModel::effective_range(1.0 / a, t.r_e));
    const auto ab = a_B(a, t.r_e);
    o.table.columns = {"zero_range", "effective_range", "first_order", "a_B"};
    o.table.add({zr ? -*zr * unit : nan_value, er ? -*er * unit : nan_value,
                 first_order_dimer_energy(a, t.r_e) * unit, ab ? *ab : nan_value});
    return o;
  }
  io::Config kv{{"kind", t.kind}, {"strength", io::format_number(t.strength)},
                {"range", io::format_number(t.range)}, {"core", io::format_number(t.core)},
                {"exponent", std::to_string(t.exponent)}, {"reduced_mass", io::format_number(t.reduced_mass)}};
  TwoBodyModel model = TwoBodyModel::from_config(kv);
  if (t.tune >= 0) model = tune_to_unitarity(model, t.tune);
  const auto state = solve_zero_energy(model);
  o.results["model"] = {{"kind", potential_kind_name(model.kind)}, {"strength", model.strength},
                        {"range", model.range}, {"core", model.core}};
  if (t.mode == "summary") {
    o.table.columns = {"inv_a", "r_e", "nodes", "length_scale"};
    o.table.add({state.inv_a, state.r_e, double(state.node_count), model.length_scale()});
  } else if (t.mode == "wavefunction") {
    o.table.columns = {"r", "phi"};
    for (std::size_t i = 0; i < state.r.size(); ++i) o.table.add({state.r[i], state.phi[i]});
  } else if (t.mode == "form-factor") {
    const auto f = est_form_factor(state);
    o.table.columns = {"p", "phi"};
    for (std::size_t i = 0; i < f.grid().size(); ++i) o.table.add({f.grid()[i], f.values()[i]});
  } else {
    throw ConfigError("unknown twobody mode " + t.mode);
  }
  return o;
}

// ---------------------------------------------------------------- verify

struct Check {
  std::string name;
  std::function<double()> compute;
  double reference;
  double tolerance;  // absolute
};

int run_verify() {
  const double deuteron_unit = 1.416 * 5.4112 * 5.4112;
  const std::vector<Check> checks = {
      {"boson s0", [] { return boson_exponents(1, 0.0).front().s_abs(); }, 1.00624, 1e-4},
      {"boson scaling factor", [] { return boson_exponents(1, 0.0).front().scaling_factor(); }, 22.694, 0.01},
      {"two resonant pairs s0",
       [] { return distinguishable_exponents({{Pair::p12, 0.0}, {Pair::p23, 0.0}}, 1).front().s_abs(); }, 0.4137,
       1e-3},
      {"two resonant pairs scaling factor",
       [] { return distinguishable_exponents({{Pair::p12, 0.0}, {Pair::p23, 0.0}}, 1).front().scaling_factor(); },
       1986.1, 0.5},
      {"fermion l=1 critical mass ratio", [] { return critical_mass_ratio(1); }, 13.6069657, 1e-5},
      {"l=2 critical mass ratio", [] { return critical_mass_ratio(2); }, 38.630, 0.01},
      {"l=3 critical mass ratio", [] { return critical_mass_ratio(3); }, 75.994, 0.01},
      {"l=4 critical mass ratio", [] { return critical_mass_ratio(4); }, 125.765, 0.01},
      {"triton phi-channel s^2", [] { return triton_channel_exponents().phi_channel.s_squared; }, 4.6925176521,
       1e-8},
      {"kappa* a_- from delta", [] { return threshold_constant_from_delta(); }, -1.50763, 0.005 * 1.50763},
      {"kappa* a_* from delta", [] { return dimer_crossing_constant_from_delta(); }, 0.0707645086901,
       0.005 * 0.0707645086901},
      {"omega constant", [] { return bo::omega_constant(); }, 0.567143, 1e-6},
      {"BO critical mass ratio", [] { return bo::critical_mass_ratio(1); }, 13.990296, 1e-4},
      {"zero-range deuteron (MeV)",
       [=] { return -*dimer_energy(TMatrixModel::zero_range(1.0 / 5.4112)) * deuteron_unit; }, 1.416, 1e-3},
      {"effective-range deuteron (MeV)",
       [=] { return -*dimer_energy(TMatrixModel::effective_range(1.0 / 5.4112, 1.7436)) * deuteron_unit; }, 2.223,
       0.005 * 2.223},
      {"first-order deuteron (MeV)", [=] { return first_order_dimer_energy(5.4112, 1.7436) * deuteron_unit; },
       1.909, 2e-3},
      {"a_B (fm)", [] { return *a_B(5.4112, 1.7436); }, 4.31892, 1e-4},
      {"half r_e / l_4", [] { return 0.5 * universal_effective_range(4); }, 2.0944, 1e-3},
      {"half r_e / l_6", [] { return 0.5 * universal_effective_range(6); }, 1.39473, 1e-3},
      {"zero-range STM energy ratio",
       [] {
         const auto s = stm::solve_trimers_zero_range(0.0, 1.0, 1e-4, 1.0);
         return s.energies.at(1) / s.energies.at(2);
       },
       515.0, 5.15},
      {"narrow-resonance kappa* R*",
       [] {
         const auto s = stm::solve_trimers_narrow_resonance(0.0, 1.0, 1e-5, 10.0);
         return stm::extrapolate_kappa_star(s, boson_s0).kappa_star;
       },
       0.11691, 0.005 * 0.11691},
  };
  int failures = 0;
  for (const auto& c : checks) {
    double v = nan_value;
    std::string note;
    try {
      v = c.compute();
    } catch (const std::exception& e) {
      note = std::string(" error: ") + e.what();
    }
    const bool ok = std::isfinite(v) && std::abs(v - c.reference) <= c.tolerance;
    failures += !ok;
    std::cout << (ok ? "PASS " : "FAIL ") << c.name << " value=" << io::format_number(v)
              << " reference=" << io::format_number(c.reference) << " tolerance=" << io::format_number(c.tolerance)
              << note << '\n';
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << checks.size() - failures << "/" << checks.size() << '\n';
  return failures ? exit_verify_failed : exit_ok;
}

// ---------------------------------------------------------------- config handling

bool is_json_manifest(const std::string& path) {
  std::ifstream in(path);
  char ch = 0;
  while (in.get(ch) && std::isspace(static_cast<unsigned char>(ch))) {
  }
  return ch == '{';
}

// Config values become "--key=value" arguments placed before the command line, so explicit
// flags win.
std::vector<std::string> config_arguments(const std::string& path, const std::string& subcommand) {
  io::Config kv;
  if (is_json_manifest(path)) {
    io::Json j;
    try {
      std::ifstream in(path);
      j = io::Json::parse(in);
    } catch (const std::exception& e) {
      throw ConfigError("cannot parse manifest " + path + ": " + e.what());
    }
    if (j.value("subcommand", "") != subcommand)
      throw ConfigError("manifest " + path + " belongs to subcommand " + j.value("subcommand", "?"));
    for (const auto& [k, v] : j.at("inputs").items()) kv[k] = v.get<std::string>();
  } else {
    kv = io::read_config(path);
  }
  std::vector<std::string> args;
  for (const auto& [k, v] : kv) args.push_back("--" + k + "=" + v);
  return args;
}

io::Json collect_inputs(const CLI::App* sub) {
  static const std::vector<std::string> skip = {"help", "config", "out", "manifest"};
  io::Json inputs = io::Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (std::find(skip.begin(), skip.end(), name) != skip.end()) continue;
    if (name == "hbar2-over-m" && !opt->count()) continue;  // unset: natural units
    if (opt->get_expected_min() == 0) {
      inputs[name] = opt->count() && opt->as<bool>() ? "true" : "false";
    } else if (opt->count()) {
      inputs[name] = opt->as<std::string>();
    } else if (!opt->get_default_str().empty()) {
      inputs[name] = opt->get_default_str();
    }
  }
  return inputs;
}

void emit(const Output& o, const CLI::App* sub, const Common& c) {
  if (c.out.empty()) {
    io::write_csv(std::cout, o.table);
  } else {
    io::write_csv(c.out, o.table);
  }
  std::string manifest = c.manifest;
  if (manifest.empty() && !c.out.empty()) manifest = c.out + ".json";
  if (manifest.empty()) return;
  io::Json j;
  j["subcommand"] = sub->get_name();
  j["inputs"] = collect_inputs(sub);
  j["results"] = o.results;
  j["outputs"] = c.out.empty() ? io::Json::array() : io::Json::array({c.out});
  j["library_version"] = io::library_version();
  j["isa"] = kernels::isa_name(kernels::active_isa());
  io::write_json(manifest, j);
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (!config_path.empty() && !args.empty()) {
    auto extra = config_arguments(config_path, args.front());
    args.insert(args.begin() + 1, extra.begin(), extra.end());
  }

  CLI::App app{"Efimov three-body spectra and universal observables"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1);

  Common common;
  UniversalArgs ua;
  auto* su = app.add_subcommand("universal", "universal curves, constants and recombination rate");
  su->add_option("--mode", ua.mode, "curves | constants | recombination");
  su->add_option("--kappa-star", ua.kappa_star);
  su->add_option("--levels", ua.levels);
  su->add_option("--points", ua.points);
  su->add_option("--a-minus", ua.a_minus);
  su->add_option("--eta", ua.eta);
  su->add_option("--decades", ua.decades);
  add_common(su, common);

  ChannelArgs ca;
  auto* sc = app.add_subcommand("channels", "hyperangular channel exponents");
  sc->add_option("--system", ca.system, "bosons | distinguishable | two-plus-one | triton | critical");
  sc->add_flag("--unitarity", ca.unitarity);
  sc->add_option("--r-over-a", ca.r_over_a);
  sc->add_option("--n-max", ca.n_max);
  sc->add_option("--mass-ratio", ca.mass_ratio);
  sc->add_option("--statistics", ca.statistics);
  sc->add_option("--pairs", ca.pairs);
  sc->add_flag("--identical-pair-resonant", ca.identical_pair_resonant);
  sc->add_option("--ell", ca.ell);
  add_common(sc, common);

  HyperArgs ha;
  auto* sh = app.add_subcommand("hyperradial", "hyperradial bound states, thresholds and three-body phase");
  sh->add_option("--mode", ha.mode, "levels | thresholds | phase");
  sh->add_option("--s0", ha.s0);
  sh->add_option("--wall", ha.wall);
  sh->add_option("--inv-a", ha.inv_a);
  sh->add_option("--kappa-min", ha.kappa_min);
  sh->add_option("--kappa-max", ha.kappa_max);
  sh->add_option("--thresholds", ha.thresholds);
  sh->add_option("--inner", ha.inner, "wall | vdw | square");
  sh->add_option("--b", ha.b);
  sh->add_option("--depth", ha.depth);
  add_common(sh, common);

  StmArgs sa;
  auto* ss = app.add_subcommand("stm", "momentum-space three-body bound states");
  ss->add_option("--model", sa.model, "zero-range | narrow | step | power-law");
  ss->add_option("--a", sa.a, "scattering length, inf for unitarity");
  ss->add_option("--cutoff", sa.cutoff);
  ss->add_option("--r-star", sa.r_star);
  ss->add_option("--tail", sa.tail, "power-law tail exponent");
  ss->add_option("--kappa-min", sa.kappa_min);
  ss->add_option("--kappa-max", sa.kappa_max);
  ss->add_option("--points", sa.points);
  ss->add_option("--angular-points", sa.angular_points);
  ss->add_option("--p-min", sa.p_min);
  ss->add_option("--p-max", sa.p_max);
  ss->add_flag("--exact-domain", sa.exact_domain);
  ss->add_option("--thresholds", sa.thresholds, "number of a_- values to compute instead of levels");
  add_common(ss, common);

  TritonArgs ta;
  auto* st = app.add_subcommand("triton", "two-channel nucleon model");
  st->add_option("--a-t", ta.inputs.a_t);
  st->add_option("--r-et", ta.inputs.r_et);
  st->add_option("--a-s", ta.inputs.a_s);
  st->add_option("--r-es", ta.inputs.r_es);
  st->add_flag("--unitarity", ta.unitarity);
  st->add_option("--e-max", ta.e_max);
  st->add_option("--e-min", ta.e_min);
  st->add_option("--points", ta.points);
  st->add_option("--angular-points", ta.angular_points);
  st->add_option("--p-max-factor", ta.p_max_factor);
  add_common(st, common);

  BoArgs ba;
  auto* sb = app.add_subcommand("bo", "heavy-heavy-light Born-Oppenheimer picture");
  sb->add_option("--mode", ba.mode, "curve | scaling | critical");
  sb->add_option("--mass-ratio", ba.mass_ratio);
  sb->add_option("--L", ba.L);
  sb->add_option("--inv-a", ba.inv_a);
  sb->add_option("--r-min", ba.r_min);
  sb->add_option("--r-max", ba.r_max);
  sb->add_option("--points", ba.points);
  sb->add_option("--ratio-min", ba.ratio_min);
  sb->add_option("--ratio-max", ba.ratio_max);
  add_common(sb, common);

  TwoBodyArgs tb;
  auto* s2 = app.add_subcommand("twobody", "two-body zero-energy states, form factors and dimers");
  s2->add_option("--mode", tb.mode, "summary | wavefunction | form-factor | dimer");
  s2->add_option("--kind", tb.kind);
  s2->add_option("--strength", tb.strength);
  s2->add_option("--range", tb.range);
  s2->add_option("--core", tb.core);
  s2->add_option("--exponent", tb.exponent);
  s2->add_option("--reduced-mass", tb.reduced_mass);
  s2->add_option("--tune", tb.tune, "tune to unitarity with this many bound states");
  s2->add_option("--a", tb.a);
  s2->add_option("--r-e", tb.r_e);
  add_common(s2, common);

  auto* sv = app.add_subcommand("verify", "regression table of reference constants");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  if (sv->parsed()) return run_verify();
  if (su->parsed()) emit(run_universal(ua, common), su, common);
  else if (sc->parsed()) emit(run_channels(ca, common), sc, common);
  else if (sh->parsed()) emit(run_hyperradial(ha, common), sh, common);
  else if (ss->parsed()) emit(run_stm(sa, common), ss, common);
  else if (st->parsed()) emit(run_triton(ta, common), st, common);
  else if (sb->parsed()) emit(run_bo(ba, common), sb, common);
  else if (s2->parsed()) emit(run_twobody(tb, common), s2, common);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return exit_config;
  } catch (const ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return exit_convergence;
  } catch (const BracketError& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return exit_convergence;
  } catch (const EvaluationError& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return exit_convergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_convergence;
  }
}
