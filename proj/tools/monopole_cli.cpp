// Batch front end: verify | simulate | closure | parity | map | reduce2d.
// One JSON config file drives everything; unknown keys are rejected so a
// typo in a physics parameter cannot silently fall back to a default.

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monopole/monopole.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace monopole;

namespace {

struct ConfigError : MonopoleError {
  using MonopoleError::MonopoleError;
};

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double need_num(const json& j, const std::string& key,
                const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ConfigError(where + ": missing numeric '" + key + "'");
  return j.at(key).get<double>();
}

ModelParams parse_params(const json& j) {
  check_keys(j,
             {"m", "delta", "nu", "alpha1", "beta1", "alpha2", "beta2", "k",
              "ell", "a", "b", "c"},
             "params");
  ModelParams p;
  if (!j.contains("m") || !j.at("m").is_string())
    throw ConfigError("params: 'm' must be a string like \"2/3\"");
  p.m = RationalM::parse(j.at("m").get<std::string>());
  p.delta = j.value("delta", 1);
  p.nu = need_num(j, "nu", "params");
  p.alpha1 = need_num(j, "alpha1", "params");
  p.beta1 = need_num(j, "beta1", "params");
  p.alpha2 = need_num(j, "alpha2", "params");
  p.beta2 = need_num(j, "beta2", "params");
  p.k = need_num(j, "k", "params");
  p.ell = need_num(j, "ell", "params");
  p.a = need_num(j, "a", "params");
  p.b = need_num(j, "b", "params");
  p.c = need_num(j, "c", "params");
  return p;
}

DomainWindow parse_window(const json& j) {
  check_keys(j, {"r_min", "r_max", "theta_margin"}, "window");
  DomainWindow w;
  w.r_min = need_num(j, "r_min", "window");
  w.r_max = need_num(j, "r_max", "window");
  w.theta_margin = need_num(j, "theta_margin", "window");
  return w;
}

PhasePoint parse_state(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.size() != 6)
    throw ConfigError(where + ": expected [r, theta, phi, p_r, p_theta, p_phi]");
  std::array<double, 6> s{};
  for (int i = 0; i < 6; ++i) {
    if (!arr[i].is_number()) throw ConfigError(where + ": non-numeric entry");
    s[i] = arr[i].get<double>();
  }
  return PhasePoint::from_state(s);
}

struct Cfg {
  json root;
  ModelParams params;
  DomainWindow window;
  std::uint64_t seed = 0;

  const json& block(const std::string& name) const {
    if (!root.contains(name))
      throw ConfigError("config: missing '" + name + "' section");
    return root.at(name);
  }
};

Cfg load_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  check_keys(root,
             {"params", "window", "seed", "verify", "integration", "closure",
              "parity", "map", "reduce2d"},
             "config");
  Cfg cfg;
  cfg.root = root;
  cfg.params = parse_params(cfg.root.value("params", json::object()));
  cfg.window = root.contains("window") ? parse_window(root.at("window"))
                                       : DomainWindow{};
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned())
      throw ConfigError("config: 'seed' must be a non-negative integer");
    cfg.seed = root.at("seed").get<std::uint64_t>();
  }
  if (seed_override) cfg.seed = *seed_override;
  return cfg;
}

void write_text(const fs::path& path, const std::string& text, bool quiet) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!quiet) std::cout << "wrote " << path.string() << "\n";
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

// ---- verify ----

int cmd_verify(const Cfg& cfg, const fs::path& out_dir, bool quiet) {
  const json& v = cfg.block("verify");
  check_keys(v,
             {"n_points", "m_list", "bracket_tol", "x1_bracket_tol",
              "offbranch_tol", "rank_min_fraction"},
             "verify");
  const auto n_points = static_cast<std::uint64_t>(
      need_num(v, "n_points", "verify"));
  const double bracket_tol = v.value("bracket_tol", 1e-8);
  const double x1_tol = v.value("x1_bracket_tol", 1e-10);
  const double off_tol = v.value("offbranch_tol", 1e-10);
  const double rank_frac = v.value("rank_min_fraction", 0.95);

  std::vector<RationalM> m_list;
  if (v.contains("m_list")) {
    for (const auto& s : v.at("m_list")) {
      if (!s.is_string()) throw ConfigError("verify: m_list entries are strings");
      m_list.push_back(RationalM::parse(s.get<std::string>()));
    }
  } else {
    m_list.push_back(cfg.params.m);
  }

  json report;
  report["seed"] = cfg.seed;
  report["n_points"] = n_points;
  bool all_ok = true;
  std::ostringstream csv;
  csv << "m,n_used,n_skipped,max_rel_bracket_x1,max_rel_bracket_x2,"
         "max_rel_bracket_calx,max_rel_offbranch,rank4_fraction,pass\n";

  for (const auto& mrat : m_list) {
    ModelParams prm = cfg.params;
    prm.m = mrat;
    const Model mdl = validate_params(prm, cfg.window);
    const CounterRng rng(cfg.seed);
    const auto obs_h = observable_hamiltonian(mdl);
    const auto obs_x1 = observable_x1(mdl);
    const auto obs_x2 = observable_x2(mdl);
    const auto obs_cx = observable_calX(mdl);

    std::uint64_t used = 0, skipped = 0;
    double max_b1 = 0, max_b2 = 0, max_bx = 0, max_off = 0;
    std::uint64_t rank4 = 0;
    for (std::uint64_t i = 0; i < n_points; ++i) {
      const PhasePoint z = sample_point(mdl, rng, i);
      if (x2_at(mdl, z.state()) + mdl.k2m2 <= 0.0) {
        ++skipped;
        continue;
      }
      ++used;
      const double sh = norm2(observable_gradient(obs_h, z));
      max_b1 = std::max(max_b1,
                        std::abs(poisson_bracket(obs_x1, obs_h, mdl, z)) /
                            (norm2(observable_gradient(obs_x1, z)) * sh));
      max_b2 = std::max(max_b2,
                        std::abs(poisson_bracket(obs_x2, obs_h, mdl, z)) /
                            (norm2(observable_gradient(obs_x2, z)) * sh));
      max_bx = std::max(max_bx,
                        std::abs(poisson_bracket(obs_cx, obs_h, mdl, z)) /
                            (norm2(observable_gradient(obs_cx, z)) * sh));
      const auto cx = eval_calX(mdl, z);
      max_off = std::max(max_off, cx.offbranch_residual /
                                      std::max(1.0, std::abs(cx.value)));
      if (independence_rank(mdl, z, {obs_h, obs_x1, obs_x2, obs_cx}) == 4)
        ++rank4;
    }
    const double frac = used ? static_cast<double>(rank4) / used : 0.0;
    const bool ok = used > 0 && max_b1 <= x1_tol && max_b2 <= bracket_tol &&
                    max_bx <= bracket_tol && max_off <= off_tol &&
                    frac >= rank_frac;
    all_ok = all_ok && ok;
    const std::string mtxt =
        (mrat.sign() < 0 ? "-" : "") + std::to_string(mrat.m1()) + "/" +
        std::to_string(mrat.m2());
    json entry;
    entry["m"] = mtxt;
    entry["n_used"] = used;
    entry["n_skipped"] = skipped;
    entry["max_rel_bracket_x1"] = max_b1;
    entry["max_rel_bracket_x2"] = max_b2;
    entry["max_rel_bracket_calx"] = max_bx;
    entry["max_rel_offbranch"] = max_off;
    entry["rank4_fraction"] = frac;
    entry["pass"] = ok;
    report["per_m"].push_back(entry);
    csv << mtxt << ',' << used << ',' << skipped << ',' << fmt17(max_b1)
        << ',' << fmt17(max_b2) << ',' << fmt17(max_bx) << ','
        << fmt17(max_off) << ',' << fmt17(frac) << ',' << (ok ? 1 : 0)
        << '\n';
    if (!quiet)
      std::cout << "m=" << mtxt << ": used=" << used << " skipped=" << skipped
                << " max|{X,H}|/scale=" << max_bx
                << " rank4=" << frac * 100 << "%" << (ok ? " ok" : " FAIL")
                << "\n";
  }
  report["pass"] = all_ok;
  write_text(out_dir / "verify_report.json", dump_json(report), quiet);
  write_text(out_dir / "verify_report.csv", csv.str(), quiet);
  return all_ok ? 0 : 1;
}

// ---- simulate ----

int cmd_simulate(const Cfg& cfg, const fs::path& out_dir, bool quiet) {
  const json& s = cfg.block("integration");
  check_keys(s, {"dt", "t_end", "tol_newton", "sample_every", "initial_state"},
             "integration");
  IntegrateOptions opt;
  opt.dt = need_num(s, "dt", "integration");
  opt.tol_newton = s.value("tol_newton", 1e-13);
  opt.sample_every = s.value("sample_every", 10);
  const double t_end = need_num(s, "t_end", "integration");
  if (!s.contains("initial_state"))
    throw ConfigError("integration: missing 'initial_state'");
  const PhasePoint z0 = parse_state(s.at("initial_state"), "initial_state");

  const Model mdl = validate_params(cfg.params, cfg.window);
  const Trajectory traj = integrate(mdl, z0, t_end, opt);

  std::ostringstream csv;
  trajectory_to_csv(traj, csv);
  write_text(out_dir / "trajectory.csv", csv.str(), quiet);

  json summary;
  summary["dt"] = opt.dt;
  summary["t_end"] = t_end;
  summary["samples"] = traj.times.size();
  summary["accepted_steps"] = traj.stats.accepted;
  summary["newton_iters"] = traj.stats.newton_iters;
  std::array<double, 4> max_drift{};
  for (const auto& d : traj.drift_log)
    for (int i = 0; i < 4; ++i)
      if (std::isfinite(d[i])) max_drift[i] = std::max(max_drift[i], d[i]);
  summary["max_drift"] = {{"H", max_drift[0]},
                          {"X1", max_drift[1]},
                          {"X2", max_drift[2]},
                          {"calX", max_drift[3]}};
  if (traj.domain_event) {
    summary["domain_event"] = {{"t", traj.domain_event->t},
                               {"what", traj.domain_event->what}};
  }
  write_text(out_dir / "drift_summary.json", dump_json(summary), quiet);
  return 0;
}

// ---- closure ----

int cmd_closure(const Cfg& cfg, const fs::path& out_dir, bool quiet) {
  const json& c = cfg.block("closure");
  check_keys(c, {"eps_close", "t_guard", "t_end", "dt", "initial_state"},
             "closure");
  const double eps = need_num(c, "eps_close", "closure");
  const double t_guard = c.value("t_guard", -1.0);
  const double t_end = need_num(c, "t_end", "closure");
  IntegrateOptions opt;
  opt.dt = c.value("dt", 1e-3);
  if (!c.contains("initial_state"))
    throw ConfigError("closure: missing 'initial_state'");
  const PhasePoint z0 = parse_state(c.at("initial_state"), "initial_state");

  const Model mdl = validate_params(cfg.params, cfg.window);
  const ClosureReport rep = closure_analysis(mdl, z0, t_end, eps, t_guard, opt);

  json j;
  j["bounded"] = rep.bounded;
  j["min_recurrence_distance"] = rep.min_recurrence_distance;
  j["closes"] = rep.closes;
  j["epochs_scanned"] = rep.epochs_scanned;
  j["t_guard_used"] = rep.t_guard_used;
  j["eps_close"] = eps;
  write_text(out_dir / "closure_report.json", dump_json(j), quiet);
  if (!quiet)
    std::cout << "closes=" << (rep.closes ? "true" : "false")
              << " min_distance=" << rep.min_recurrence_distance << "\n";
  return 0;
}

// ---- parity ----

int cmd_parity(const Cfg& cfg, const fs::path& out_dir, bool quiet) {
  const json& p = cfg.block("parity");
  check_keys(p, {"max_m1m2", "consistency_points"}, "parity");
  const auto max_m = static_cast<std::int64_t>(need_num(p, "max_m1m2", "parity"));
  const auto n_consistency = static_cast<std::uint64_t>(
      p.value("consistency_points", 0.0));

  std::ostringstream csv;
  csv << "m1,m2,branch,divided_by_sqrtS,all_integer_S_powers,"
         "uniform_halfS_parity,min_exp_halfS,monomial_count,max_abs_coeff\n";
  bool all_ok = true;
  std::size_t n_pairs = 0;
  for (std::int64_t m1 = 1; m1 <= max_m; ++m1)
    for (std::int64_t m2 = 1; m2 <= max_m; ++m2) {
      if (std::gcd(m1, m2) != 1) continue;
      ++n_pairs;
      const ParityReport rep = parity_certify(m1, m2);
      all_ok = all_ok && rep.all_integer_S_powers;
      csv << m1 << ',' << m2 << ','
          << (rep.branch == ParityBranch::RealPart ? "Re" : "Im") << ','
          << (rep.divided_by_sqrtS ? 1 : 0) << ','
          << (rep.all_integer_S_powers ? 1 : 0) << ','
          << (rep.uniform_halfS_parity ? 1 : 0) << ',' << rep.min_exp_halfS
          << ',' << rep.monomial_count << ',' << rep.max_abs_coeff.str()
          << '\n';

      if (n_consistency > 0) {
        ModelParams prm = cfg.params;
        prm.m = RationalM(m1, m2);
        const Model mdl = validate_params(prm, cfg.window);
        const CounterRng rng(cfg.seed);
        for (std::uint64_t i = 0; i < n_consistency; ++i) {
          const auto z = sample_point_positive_S(mdl, rng,
                                                 i + 1000003 * n_pairs, 101);
          if (!z) continue;
          all_ok = all_ok && numeric_consistency(mdl, *z) <= 1e-9;
        }
      }
    }
  write_text(out_dir / "parity_report.csv", csv.str(), quiet);
  if (!quiet)
    std::cout << n_pairs << " coprime pairs with m1, m2 <= " << max_m
              << ": integer S-powers "
              << (all_ok ? "certified for all" : "FAILED") << "\n";
  return all_ok ? 0 : 1;
}

// ---- map / reduce2d ----

int cmd_map(const Cfg& cfg, const fs::path& out_dir, bool quiet) {
  const json& m = cfg.block("map");
  check_keys(m, {"direction", "points"}, "map");
  if (!m.contains("direction") || !m.at("direction").is_string())
    throw ConfigError("map: missing 'direction'");
  const std::string dir = m.at("direction").get<std::string>();
  if (dir != "to_taubnut" && dir != "from_taubnut")
    throw ConfigError("map: direction must be to_taubnut or from_taubnut");
  if (!m.contains("points") || !m.at("points").is_array())
    throw ConfigError("map: missing 'points' array");

  const Model mdl = validate_params(cfg.params, cfg.window);
  json out;
  out["direction"] = dir;
  out["points"] = json::array();
  for (const auto& pt : m.at("points")) {
    if (dir == "to_taubnut") {
      const PhasePoint z = parse_state(pt, "map point");
      const TaubNutPoint Z = to_taubnut(mdl, z);
      out["points"].push_back({Z.R, Z.Theta, Z.Phi, Z.P_R, Z.P_Theta, Z.P_Phi});
    } else {
      if (!pt.is_array() || pt.size() != 6)
        throw ConfigError("map point: expected 6 numbers");
      const TaubNutPoint Z(pt[0].get<double>(), pt[1].get<double>(),
                           pt[2].get<double>(), pt[3].get<double>(),
                           pt[4].get<double>(), pt[5].get<double>());
      const PhasePoint z = from_taubnut(mdl, Z);
      out["points"].push_back({z.r, z.theta, z.phi, z.p_r, z.p_theta, z.p_phi});
    }
  }
  out["phi_period"] = mdl.phi_period;
  out["Phi_period"] = mdl.phi_period / std::abs(mdl.m_val);
  write_text(out_dir / "map_output.json", dump_json(out), quiet);
  return 0;
}

int cmd_reduce2d(const Cfg& cfg, const fs::path& out_dir, bool quiet) {
  const json& r = cfg.block("reduce2d");
  check_keys(r, {"p0"}, "reduce2d");
  const double p0 = need_num(r, "p0", "reduce2d");
  const Model mdl = validate_params(cfg.params, cfg.window);
  const PWParams pw = reduce_2d(mdl, p0);
  json j;
  j["mu"] = pw.mu;
  j["alpha"] = pw.alpha_pw;
  j["beta"] = pw.beta_pw;
  j["p0"] = p0;
  j["W0"] = {{"alpha1", pw.w0_alpha1},
             {"beta1", pw.w0_beta1},
             {"alpha2", pw.w0_alpha2},
             {"beta2", pw.w0_beta2}};
  write_text(out_dir / "pw_params.json", dump_json(j), quiet);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superintegrable monopole toolbox"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool quiet = false;
  std::optional<std::uint64_t> seed_override;
  std::uint64_t seed_value = 0;

  app.add_option("--config", config_path, "config file (JSON)")
      ->required()
      ->group("common");
  app.add_option("--out", out_dir, "output directory")->group("common");
  auto* seed_opt =
      app.add_option("--seed", seed_value, "override config seed")
          ->group("common");
  app.add_flag("--quiet", quiet, "suppress progress output")->group("common");

  auto* sub_verify = app.add_subcommand("verify", "bracket/rank verification");
  auto* sub_sim = app.add_subcommand("simulate", "integrate one trajectory");
  auto* sub_closure = app.add_subcommand("closure", "orbit-closure experiment");
  auto* sub_parity = app.add_subcommand("parity", "exact parity certification");
  auto* sub_map = app.add_subcommand("map", "convert points between charts");
  auto* sub_reduce = app.add_subcommand("reduce2d", "2D reduction parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (seed_opt->count() > 0) seed_override = seed_value;
    const Cfg cfg = load_config(config_path, seed_override);
    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    if (sub_verify->parsed()) return cmd_verify(cfg, out, quiet);
    if (sub_sim->parsed()) return cmd_simulate(cfg, out, quiet);
    if (sub_closure->parsed()) return cmd_closure(cfg, out, quiet);
    if (sub_parity->parsed()) return cmd_parity(cfg, out, quiet);
    if (sub_map->parsed()) return cmd_map(cfg, out, quiet);
    if (sub_reduce->parsed()) return cmd_reduce2d(cfg, out, quiet);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const MonopoleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
