// valgames — equilibria, security metrics, and protocol simulations for
// validator attention games. See README.md for the full command reference.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "valgames/analysis.hpp"
#include "valgames/attention.hpp"
#include "valgames/equilibrium.hpp"
#include "valgames/protocol_incentives.hpp"
#include "valgames/simulate.hpp"
#include "valgames/version.hpp"

namespace vg = valgames;
using nlohmann::json;

namespace {

enum class Format { kTable, kJson, kCsv };

Format parse_format(const std::string& name) {
  if (name == "table") return Format::kTable;
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  throw CLI::ValidationError("--format", "expected table, json or csv");
}

struct GlobalOpts {
  std::string format_name;  // raw flag/env value; resolved lazily
  Format format = Format::kTable;
  std::string output;  // empty = stdout

  // Callbacks fire inside App::parse, before main() regains control, so the
  // format string is converted here rather than after parse returns.
  void resolve() {
    if (!format_name.empty()) format = parse_format(format_name);
  }
};

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double trunc3(double v) { return std::floor(v * 1000.0) / 1000.0; }

void emit(const GlobalOpts& opts, const std::string& text) {
  if (opts.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + opts.output);
  out << text;
}

// Key/value rows rendered as an aligned table or key,value CSV; JSON gets
// the params echo and version string.
struct Report {
  std::vector<std::pair<std::string, std::string>> rows;
  json params = json::object();
  json result = json::object();
  std::string csv_override;  // sweeps and curves provide native CSV

  void row(const std::string& name, double value) {
    rows.emplace_back(name, fmt6(value));
    result[name] = value;
  }
  void row(const std::string& name, const std::string& value) {
    rows.emplace_back(name, value);
    result[name] = value;
  }

  std::string render(const GlobalOpts& opts, const std::string& command) const {
    if (opts.format == Format::kJson) {
      json j;
      j["version"] = vg::kVersion;
      j["command"] = command;
      j["params"] = params;
      j["result"] = result;
      return j.dump(2) + "\n";
    }
    if (opts.format == Format::kCsv) {
      if (!csv_override.empty()) return csv_override;
      std::string out = "key,value\n";
      for (const auto& [k, v] : rows) out += k + "," + v + "\n";
      return out;
    }
    if (!csv_override.empty() && rows.empty()) return csv_override;
    std::size_t width = 0;
    for (const auto& [k, v] : rows) width = std::max(width, k.size());
    std::string out;
    for (const auto& [k, v] : rows) {
      out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
    }
    return out;
  }
};

json params_json(const vg::ExtendedParams& p) {
  return json{{"C", p.core.C}, {"L", p.core.L}, {"R", p.core.R},
              {"U", p.core.U}, {"n", p.n},      {"m", p.m},
              {"t", p.t},      {"s_w", p.s_w},  {"f", p.f},
              {"r", p.r}};
}

json profile_json(const vg::MixedProfile& profile) {
  json j{{"pi", profile.pi}, {"alpha", profile.alpha}};
  if (profile.beta) {
    j["beta"] = *profile.beta;
    j["beta_corner"] = profile.beta_corner;
  }
  return j;
}

// ---- flat key=value config files -----------------------------------------

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError(
          "--config", "line " + std::to_string(lineno) + ": expected key=value");
    }
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return kv;
}

void collect_options(CLI::App* app,
                     std::map<std::string, std::vector<CLI::Option*>>& by_name) {
  for (CLI::Option* opt : app->get_options()) {
    for (const std::string& lname : opt->get_lnames()) {
      by_name[lname].push_back(opt);
    }
  }
  for (CLI::App* sub : app->get_subcommands({})) collect_options(sub, by_name);
}

// Config values become option defaults, so command-line flags win.
void apply_config(CLI::App& app, const std::map<std::string, std::string>& kv) {
  std::map<std::string, std::vector<CLI::Option*>> by_name;
  collect_options(&app, by_name);
  for (const auto& [key, value] : kv) {
    auto it = by_name.find(key);
    if (it == by_name.end()) {
      throw CLI::ValidationError("--config", "unknown key '" + key + "'");
    }
    for (CLI::Option* opt : it->second) {
      opt->default_val(value);
    }
  }
}

// ---- shared parameter blocks ----------------------------------------------

struct ParamFlags {
  vg::ExtendedParams params;  // core defaults C=1, L=0, R=0, U=1
  void attach(CLI::App* cmd, bool with_counts = true) {
    cmd->add_option("--C", params.core.C, "cost of checking");
    cmd->add_option("--L", params.core.L, "active validator stake");
    cmd->add_option("--R", params.core.R, "asserter deposit");
    cmd->add_option("--U", params.core.U, "asserter gain if undetected (TVL)");
    if (with_counts) {
      cmd->add_option("--n", params.n, "active validators");
      cmd->add_option("--m", params.m, "silent validators");
      cmd->add_option("--t", params.t, "offline validators");
      cmd->add_option("--sw", params.s_w, "slash when another validator posts");
      cmd->add_option("--f", params.f, "relative delay loss");
      cmd->add_option("--r", params.r, "per-round outside return");
    }
  }
};

vg::SilentRewardRule parse_rule(const std::string& name) {
  if (name == "eq_literal") return vg::SilentRewardRule::kEqLiteral;
  if (name == "prose") return vg::SilentRewardRule::kProse;
  throw CLI::ValidationError("--rule", "expected eq_literal or prose");
}

// ---- subcommand handlers ---------------------------------------------------

constexpr int kPaperTableMaxN = 12;

void run_table1(const GlobalOpts& opts) {
  vg::CoreParams core{1.0, 1e5, 1e6, 1e9};
  Report report;
  report.params = params_json(vg::extend(core));

  std::string table = " n  alpha  pi\n";
  json rows = json::array();
  std::string csv = "n,alpha,pi\n";
  for (int n = 1; n <= kPaperTableMaxN; ++n) {
    const vg::MixedProfile profile = vg::solve_n_player(vg::extend(core, n));
    char line[64];
    std::snprintf(line, sizeof line, "%2d  %.3f  %.1e\n", n,
                  trunc3(profile.alpha), profile.pi);
    table += line;
    rows.push_back({{"n", n}, {"alpha", profile.alpha}, {"pi", profile.pi}});
    char crow[96];
    std::snprintf(crow, sizeof crow, "%d,%.17g,%.17g\n", n, profile.alpha,
                  profile.pi);
    csv += crow;
  }
  if (opts.format == Format::kTable) {
    emit(opts, table);
  } else if (opts.format == Format::kCsv) {
    emit(opts, csv);
  } else {
    json j;
    j["version"] = vg::kVersion;
    j["command"] = "table1";
    j["params"] = report.params;
    j["result"] = rows;
    emit(opts, j.dump(2) + "\n");
  }
}

void attach_all(CLI::App& app, GlobalOpts& g) {
  // ---- solve2 ----
  auto* solve2 = app.add_subcommand("solve2", "two-player mixed equilibrium");
  auto p2 = std::make_shared<ParamFlags>();
  p2->attach(solve2, false);
  solve2->callback([&g, p2] {
    g.resolve();
    const vg::MixedProfile prof = vg::solve_two_player(p2->params.core);
    Report rep;
    rep.params = params_json(vg::extend(p2->params.core));
    rep.row("pi", prof.pi);
    rep.row("alpha", prof.alpha);
    emit(g, rep.render(g, "solve2"));
  });

  // ---- solven ----
  auto* solven = app.add_subcommand("solven", "n-validator mixed equilibrium");
  auto pn = std::make_shared<ParamFlags>();
  pn->attach(solven);
  solven->callback([&g, pn] {
    g.resolve();
    const vg::FailureReport fr = vg::offline_robustness(pn->params);
    Report rep;
    rep.params = params_json(pn->params);
    rep.row("pi", fr.profile.pi);
    rep.row("alpha", fr.profile.alpha);
    rep.row("catch_prob", fr.catch_prob);
    rep.row("failure_prob", fr.failure_prob);
    rep.row("expected_loss", fr.expected_loss);
    emit(g, rep.render(g, "solven"));
  });

  // ---- silent ----
  auto* silent = app.add_subcommand("silent", "equilibrium with silent validators");
  auto ps = std::make_shared<ParamFlags>();
  ps->attach(silent);
  auto rule_name = std::make_shared<std::string>("eq_literal");
  auto sopts = std::make_shared<vg::SolveOptions>();
  auto closed = std::make_shared<bool>(false);
  silent->add_option("--rule", *rule_name, "silent reward rule: eq_literal|prose");
  silent->add_option("--tolerance", sopts->tolerance, "residual tolerance");
  silent->add_option("--max-iterations", sopts->max_iterations, "iteration cap");
  silent->add_flag("--closed-form", *closed,
                   "use the one-active/two-silent closed form");
  silent->callback([&g, ps, rule_name, sopts, closed] {
    g.resolve();
    sopts->silent_reward_rule = parse_rule(*rule_name);
    const vg::MixedProfile prof =
        *closed ? vg::solve_silent_closed_form(ps->params.core)
                : vg::solve_silent_general(ps->params, *sopts);
    Report rep;
    rep.params = params_json(ps->params);
    rep.params["rule"] = *rule_name;
    rep.row("pi", prof.pi);
    rep.row("alpha", prof.alpha);
    if (prof.beta) rep.row("beta", *prof.beta);
    rep.row("beta_corner", std::string(prof.beta_corner ? "true" : "false"));
    rep.result["beta_corner"] = prof.beta_corner;
    emit(g, rep.render(g, "silent"));
  });

  // ---- analyze ----
  auto* analyze = app.add_subcommand("analyze", "derived security metrics");
  analyze->require_subcommand(1);

  auto* afail = analyze->add_subcommand("failure", "two-player failure probability F");
  auto pa = std::make_shared<ParamFlags>();
  pa->attach(afail, false);
  afail->callback([&g, pa] {
    g.resolve();
    Report rep;
    rep.params = params_json(vg::extend(pa->params.core));
    rep.row("failure_prob", vg::failure_probability(pa->params.core));
    emit(g, rep.render(g, "analyze failure"));
  });

  auto* aloss = analyze->add_subcommand("expected-loss", "F * U");
  auto pl = std::make_shared<ParamFlags>();
  pl->attach(aloss, false);
  aloss->callback([&g, pl] {
    g.resolve();
    Report rep;
    rep.params = params_json(vg::extend(pl->params.core));
    rep.row("expected_loss", vg::expected_loss(pl->params.core));
    emit(g, rep.render(g, "analyze expected-loss"));
  });

  auto* aopt = analyze->add_subcommand("optimal-R", "deposit maximizing F");
  auto optU = std::make_shared<double>(0.0);
  auto optL = std::make_shared<double>(0.0);
  aopt->add_option("--U", *optU, "TVL")->required();
  aopt->add_option("--L", *optL, "stake")->required();
  aopt->callback([&g, optU, optL] {
    g.resolve();
    Report rep;
    rep.params = json{{"U", *optU}, {"L", *optL}};
    rep.row("optimal_R", vg::optimal_reward(*optU, *optL));
    emit(g, rep.render(g, "analyze optimal-R"));
  });

  auto* asweep = analyze->add_subcommand("sweep", "failure metrics across a range");
  auto psw = std::make_shared<ParamFlags>();
  psw->attach(asweep);
  auto sw_var = std::make_shared<std::string>();
  auto sw_from = std::make_shared<double>(0.0);
  auto sw_to = std::make_shared<double>(0.0);
  auto sw_points = std::make_shared<int>(16);
  auto sw_linear = std::make_shared<bool>(false);
  asweep->add_option("--var", *sw_var, "one of C L R U n")->required();
  asweep->add_option("--from", *sw_from)->required();
  asweep->add_option("--to", *sw_to)->required();
  asweep->add_option("--points", *sw_points);
  asweep->add_flag("--linear", *sw_linear, "linear spacing (default log)");
  asweep->callback([&g, psw, sw_var, sw_from, sw_to, sw_points, sw_linear] {
    g.resolve();
    vg::SweepVariable variable;
    if (*sw_var == "C") variable = vg::SweepVariable::kC;
    else if (*sw_var == "L") variable = vg::SweepVariable::kL;
    else if (*sw_var == "R") variable = vg::SweepVariable::kR;
    else if (*sw_var == "U") variable = vg::SweepVariable::kU;
    else if (*sw_var == "n") variable = vg::SweepVariable::kN;
    else throw CLI::ValidationError("--var", "expected one of C L R U n");
    if (*sw_points < 2) throw CLI::ValidationError("--points", ">= 2 required");
    std::vector<double> values;
    values.reserve(*sw_points);
    for (int i = 0; i < *sw_points; ++i) {
      const double tt = static_cast<double>(i) / (*sw_points - 1);
      double v;
      if (*sw_linear || variable == vg::SweepVariable::kN) {
        v = *sw_from + tt * (*sw_to - *sw_from);
        if (variable == vg::SweepVariable::kN) v = std::round(v);
      } else {
        if (!(*sw_from > 0.0) || !(*sw_to > 0.0)) {
          throw CLI::ValidationError("--from", "log spacing requires positive range");
        }
        v = std::exp(std::log(*sw_from) + tt * (std::log(*sw_to) - std::log(*sw_from)));
      }
      values.push_back(v);
    }
    const auto rows = vg::sweep(psw->params, variable, values);
    Report rep;
    rep.params = params_json(psw->params);
    rep.csv_override = vg::sweep_csv(variable, values, rows);
    if (g.format == Format::kJson) {
      json arr = json::array();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        arr.push_back({{"value", values[i]},
                       {"alpha", rows[i].profile.alpha},
                       {"pi", rows[i].profile.pi},
                       {"catch_prob", rows[i].catch_prob},
                       {"failure_prob", rows[i].failure_prob},
                       {"expected_loss", rows[i].expected_loss}});
      }
      rep.result = arr;
      json j;
      j["version"] = vg::kVersion;
      j["command"] = "analyze sweep";
      j["params"] = rep.params;
      j["variable"] = *sw_var;
      j["result"] = rep.result;
      emit(g, j.dump(2) + "\n");
    } else {
      emit(g, rep.csv_override);
    }
  });

  // ---- optimize-m ----
  auto* optm = app.add_subcommand("optimize-m", "minimize the social cost M over (R, L)");
  auto po = std::make_shared<vg::ExtendedParams>();
  auto rb = std::make_shared<vg::Bounds>();
  auto lb = std::make_shared<vg::Bounds>();
  auto keep_trace = std::make_shared<bool>(false);
  optm->add_option("--C", po->core.C, "cost of checking")->required();
  optm->add_option("--U", po->core.U, "TVL")->required();
  optm->add_option("--f", po->f, "relative delay loss");
  optm->add_option("--r", po->r, "per-round outside return");
  optm->add_option("--R-lo", rb->lo)->required();
  optm->add_option("--R-hi", rb->hi)->required();
  optm->add_option("--L-lo", lb->lo)->required();
  optm->add_option("--L-hi", lb->hi)->required();
  optm->add_flag("--trace", *keep_trace, "record every evaluation");
  optm->callback([&g, po, rb, lb, keep_trace] {
    g.resolve();
    po->core.R = rb->hi;
    po->core.L = lb->hi;
    const vg::OptimizationResult res =
        vg::minimize_social_cost(*po, *rb, *lb, *keep_trace);
    Report rep;
    rep.params = json{{"C", po->core.C}, {"U", po->core.U}, {"f", po->f},
                      {"r", po->r},      {"R_lo", rb->lo},  {"R_hi", rb->hi},
                      {"L_lo", lb->lo},  {"L_hi", lb->hi}};
    rep.row("best_R", res.best_R);
    rep.row("best_L", res.best_L);
    rep.row("objective_value", res.objective_value);
    rep.row("objective_kind", std::string("social_cost_M"));
    if (*keep_trace) {
      json tr = json::array();
      for (const auto& [R, L, v] : res.trace) tr.push_back({R, L, v});
      rep.result["trace"] = tr;
    }
    emit(g, rep.render(g, "optimize-m"));
  });

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "Monte Carlo round simulation");
  auto psim = std::make_shared<ParamFlags>();
  psim->attach(sim);
  auto cfg = std::make_shared<vg::SimConfig>();
  auto sim_rule = std::make_shared<std::string>("eq_literal");
  auto pi_in = std::make_shared<double>(-1.0);
  auto alpha_in = std::make_shared<double>(-1.0);
  auto beta_in = std::make_shared<double>(-1.0);
  auto dump_path = std::make_shared<std::string>();
  sim->add_option("--trials", cfg->trials)->required();
  sim->add_option("--seed", cfg->seed)->required();
  sim->add_option("--threads", cfg->threads);
  sim->add_option("--rule", *sim_rule, "silent reward rule: eq_literal|prose");
  sim->add_option("--pi", *pi_in, "override equilibrium pi");
  sim->add_option("--alpha", *alpha_in, "override equilibrium alpha");
  sim->add_option("--beta", *beta_in, "override equilibrium beta");
  sim->add_option("--dump-trials", *dump_path, "write per-trial CSV here");
  sim->callback([&g, psim, cfg, sim_rule, pi_in, alpha_in, beta_in, dump_path] {
    g.resolve();
    cfg->params = psim->params;
    cfg->rule = parse_rule(*sim_rule);
    if (*pi_in >= 0.0 || *alpha_in >= 0.0) {
      if (*pi_in < 0.0 || *alpha_in < 0.0) {
        throw CLI::ValidationError("--pi", "override requires both --pi and --alpha");
      }
      cfg->strategies.pi = *pi_in;
      cfg->strategies.alpha = *alpha_in;
      if (cfg->params.m > 0) {
        if (*beta_in < 0.0) {
          throw CLI::ValidationError("--beta", "required when m > 0");
        }
        cfg->strategies.beta = *beta_in;
      }
    } else {
      vg::SolveOptions sopts;
      sopts.silent_reward_rule = cfg->rule;
      cfg->strategies = cfg->params.m > 0
                            ? vg::solve_silent_general(cfg->params, sopts)
                            : vg::solve_n_player(cfg->params);
    }
    const vg::SimReport report = vg::run(*cfg);
    if (!dump_path->empty()) {
      std::ofstream dump(*dump_path, std::ios::binary);
      if (!dump) throw std::runtime_error("cannot open " + *dump_path);
      dump << vg::trials_csv(*cfg);
    }
    if (g.format == Format::kJson) {
      json j;
      j["version"] = vg::kVersion;
      j["command"] = "simulate";
      j["params"] = params_json(cfg->params);
      j["params"]["rule"] = *sim_rule;
      j["params"]["trials"] = cfg->trials;
      j["params"]["seed"] = cfg->seed;
      j["strategies"] = profile_json(cfg->strategies);
      j["result"] = json::parse(vg::to_json(report));
      emit(g, j.dump(2) + "\n");
      return;
    }
    Report rep;
    rep.row("trials", static_cast<double>(report.trials));
    rep.row("empirical_pi", report.empirical_pi);
    rep.row("empirical_alpha", report.empirical_alpha);
    if (report.empirical_beta) rep.row("empirical_beta", *report.empirical_beta);
    rep.row("empirical_failure_rate", report.empirical_failure_rate);
    rep.row("mean_payoff_asserter", report.mean_payoff_asserter);
    rep.row("mean_payoff_active", report.mean_payoff_active);
    if (report.mean_payoff_silent) rep.row("mean_payoff_silent", *report.mean_payoff_silent);
    emit(g, rep.render(g, "simulate"));
  });

  // ---- protocol ----
  auto* proto = app.add_subcommand("protocol", "posting-reward scheme analysis");
  auto scheme = std::make_shared<vg::RewardScheme>();
  auto curve = std::make_shared<bool>(false);
  auto p_lo = std::make_shared<double>(0.0);
  auto p_hi = std::make_shared<double>(0.0);
  auto p_points = std::make_shared<int>(16);
  auto opt_p = std::make_shared<bool>(false);
  auto p_cap = std::make_shared<double>(0.0);
  proto->add_option("--C", scheme->C, "cost of checking")->required();
  proto->add_option("--p", scheme->p, "payment for a correct post");
  proto->add_option("--c", scheme->c, "cost of posting")->required();
  proto->add_option("--L", scheme->L, "stake");
  proto->add_option("--r", scheme->r, "per-round outside return");
  proto->add_option("--P", scheme->P, "audit probability in use");
  proto->add_option("--n", scheme->n, "validators");
  proto->add_flag("--curve", *curve, "emit the budget curve over p");
  proto->add_option("--p-lo", *p_lo);
  proto->add_option("--p-hi", *p_hi);
  proto->add_option("--points", *p_points);
  proto->add_flag("--optimize-p", *opt_p, "minimize budget over p (needs --p-cap)");
  proto->add_option("--p-cap", *p_cap, "explicit upper bound on p");
  proto->callback([&g, scheme, curve, p_lo, p_hi, p_points, opt_p, p_cap] {
    g.resolve();
    if (*curve) {
      if (!(*p_lo > 0.0) || !(*p_hi >= *p_lo) || *p_points < 2) {
        throw CLI::ValidationError("--p-lo", "curve needs 0 < p-lo <= p-hi, points >= 2");
      }
      std::vector<double> ps;
      for (int i = 0; i < *p_points; ++i) {
        const double tt = static_cast<double>(i) / (*p_points - 1);
        ps.push_back(std::exp(std::log(*p_lo) + tt * (std::log(*p_hi) - std::log(*p_lo))));
      }
      const auto points = vg::budget_curve(*scheme, ps);
      Report rep;
      rep.csv_override = vg::budget_csv(points);
      if (g.format == Format::kJson) {
        json arr = json::array();
        for (const auto& pt : points) {
          arr.push_back({{"p", pt.p},
                         {"pi_l", pt.pi_l},
                         {"pi_r", pt.pi_r},
                         {"min_P", pt.min_P},
                         {"budget_per_validator", pt.budget_per_validator}});
        }
        json j;
        j["version"] = vg::kVersion;
        j["command"] = "protocol curve";
        j["params"] = json{{"C", scheme->C}, {"c", scheme->c}, {"L", scheme->L},
                           {"r", scheme->r}, {"n", scheme->n}};
        j["result"] = arr;
        emit(g, j.dump(2) + "\n");
      } else {
        emit(g, rep.csv_override);
      }
      return;
    }
    if (*opt_p) {
      // Per-validator budget p C/(p - c + L) is strictly decreasing in p, so
      // the optimum sits at the explicit cap; the cap is required because the
      // scheme cannot pay out an unbounded amount at once.
      if (!(*p_cap > scheme->c)) {
        throw CLI::ValidationError("--p-cap", "required (> c) with --optimize-p");
      }
      scheme->p = *p_cap;
    }
    const vg::SchemeAnalysis analysis = vg::analyze_scheme(*scheme);
    const vg::StakeChoice stake = vg::optimal_stake(*scheme);
    Report rep;
    rep.params = json{{"C", scheme->C}, {"p", scheme->p}, {"c", scheme->c},
                      {"L", scheme->L}, {"r", scheme->r}, {"P", scheme->P},
                      {"n", scheme->n}};
    rep.row("pi_l", analysis.pi_l.value);
    rep.row("pi_r", analysis.pi_r.value);
    rep.row("binding", std::string(analysis.binding == vg::SchemeAnalysis::Binding::kIC
                                       ? "IC" : "IR"));
    rep.row("min_P", analysis.min_P);
    rep.row("budget_per_validator", scheme->p * analysis.min_P);
    rep.row("expected_budget", analysis.expected_budget);
    rep.row("budget_lower_bound", analysis.budget_lower_bound);
    rep.row("optimal_stake", stake.stake);
    rep.result["ic_feasible"] = analysis.pi_l.feasible;
    rep.result["ir_feasible"] = analysis.pi_r.feasible;
    if (stake.rejected_root) rep.result["rejected_stake_root"] = *stake.rejected_root;
    rep.result["stake_degenerate"] = stake.degenerate;
    emit(g, rep.render(g, "protocol"));
  });

  // ---- attention-demo ----
  auto* att = app.add_subcommand("attention-demo", "one attention-challenge round");
  auto validators = std::make_shared<int>(3);
  auto group_name = std::make_shared<std::string>("modp2048");
  auto tbits = std::make_shared<int>(255);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto stake = std::make_shared<double>(100.0);
  auto skip_ids = std::make_shared<std::vector<std::uint64_t>>();
  auto wrong_ids = std::make_shared<std::vector<std::uint64_t>>();
  auto lie = std::make_shared<bool>(false);
  att->add_option("--validators", *validators, "validator count");
  att->add_option("--group", *group_name, "test61 or modp2048");
  att->add_option("--threshold-bits", *tbits, "T = 2^bits, 0..255");
  att->add_option("--seed", *seed);
  att->add_option("--stake", *stake);
  att->add_option("--skip", *skip_ids, "ids that never check");
  att->add_option("--wrong", *wrong_ids, "ids that compute a wrong result");
  att->add_flag("--lie", *lie, "asserter commits to a wrong f(x)");
  att->callback([&g, validators, group_name, tbits, seed, stake, skip_ids,
                 wrong_ids, lie] {
    g.resolve();
    namespace at = vg::attention;
    if (*validators < 1) throw CLI::ValidationError("--validators", ">= 1 required");
    const at::Group& group = *group_name == "test61" ? at::Group::test_group_61()
                             : *group_name == "modp2048"
                                 ? at::Group::modp2048()
                                 : throw CLI::ValidationError("--group",
                                       "expected test61 or modp2048");
    at::RoundInputs inputs;
    inputs.x = {0x01, 0x02, 0x03, 0x04};
    inputs.true_fx = {0xAA, 0xBB, 0xCC, 0xDD};
    inputs.claimed_fx = inputs.true_fx;
    if (*lie) inputs.claimed_fx[0] ^= 0xFF;
    inputs.T = at::Threshold256::pow2(*tbits);
    inputs.stake = *stake;
    inputs.seed = *seed;
    std::vector<at::RoundValidator> vals;
    for (int i = 0; i < *validators; ++i) {
      at::RoundValidator v;
      v.id = static_cast<std::uint64_t>(i + 1);
      v.key = at::keygen(group, *seed + 1000 + i);
      for (auto id : *skip_ids)
        if (id == v.id) v.behavior = at::ValidatorBehavior::kSkipCheck;
      for (auto id : *wrong_ids)
        if (id == v.id) v.behavior = at::ValidatorBehavior::kWrongResult;
      vals.push_back(std::move(v));
    }
    const at::Transcript transcript = at::run_protocol_round(group, inputs, vals);
    if (g.format == Format::kTable) {
      std::string out;
      out += "claim_confirmed  " + std::string(transcript.claim_confirmed ? "true" : "false") + "\n";
      for (std::size_t i = 0; i < transcript.verdicts.size(); ++i) {
        const auto& v = transcript.verdicts[i];
        const auto& r = transcript.responses[i];
        out += "validator " + std::to_string(v.accused) +
               (r.responded ? "  responded" : "  silent   ") +
               (v.valid_accusation ? "  SLASHED " + fmt6(v.seized) : "  ok") + "\n";
      }
      emit(g, out);
    } else {
      emit(g, at::transcript_to_json(group, transcript) + "\n");
    }
  });

  // ---- table1 ----
  auto* t1 = app.add_subcommand(
      "table1", "equilibrium table for C=1, L=1e5, R=1e6, U=1e9, n=1..12");
  t1->callback([&g] {
    g.resolve();
    run_table1(g);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"validator attention games: equilibria, incentives, protocols"};
  app.require_subcommand(1);

  GlobalOpts g;
  std::string config_path;
  app.add_option("--format", g.format_name, "table, json or csv")
      ->envname("VALGAMES_FORMAT");
  app.add_option("--output", g.output, "write output to a file");
  app.add_option("--config", config_path, "flat key=value defaults file");

  attach_all(app, g);

  try {
    // Config keys become defaults before the real parse, so flags win.
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        apply_config(app, read_config_file(argv[i + 1]));
      } else if (arg.rfind("--config=", 0) == 0) {
        apply_config(app, read_config_file(arg.substr(9)));
      }
    }
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const vg::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
