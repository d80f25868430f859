#include "mamab/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "mamab/config.hpp"

namespace mamab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::vector<std::string> sets;
  std::vector<double> connectivity;
  int jobs = 1;
  bool strict = false;
};

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  close_out(out, path);
}

// Builds the output tree under a sibling temp directory and renames it into
// place, so readers never see a half-written result.
class AtomicDir {
 public:
  explicit AtomicDir(fs::path target) : target_(std::move(target)) {
    if (target_.empty()) throw IoError("empty output directory");
    if (fs::exists(target_)) {
      if (!fs::is_directory(target_) || (!fs::is_empty(target_) && !fs::exists(target_ / "summary.json")))
        throw IoError("refusing to replace " + target_.string() + ": not a previous output directory");
    }
    const fs::path parent = fs::absolute(target_).parent_path();
    fs::create_directories(parent);
    std::random_device rd;
    staging_ = parent / (target_.filename().string() + ".tmp-" + hex((std::uint64_t{rd()} << 32) | rd()));
    fs::create_directory(staging_);
  }
  AtomicDir(const AtomicDir&) = delete;
  AtomicDir& operator=(const AtomicDir&) = delete;
  ~AtomicDir() {
    std::error_code ec;
    if (!committed_) fs::remove_all(staging_, ec);
  }

  const fs::path& path() const { return staging_; }

  void commit() {
    std::error_code ec;
    fs::path old;
    if (fs::exists(target_)) {
      old = staging_;
      old += ".old";
      fs::rename(target_, old);
    }
    fs::rename(staging_, target_, ec);
    if (ec) {
      if (!old.empty()) fs::rename(old, target_);
      throw IoError("cannot move output into " + target_.string() + ": " + ec.message());
    }
    committed_ = true;
    if (!old.empty()) fs::remove_all(old, ec);
  }

 private:
  fs::path target_;
  fs::path staging_;
  bool committed_ = false;
};

SimulationConfig resolve_config(const Options& o) {
  std::vector<Override> overrides;
  for (const auto& s : o.sets) overrides.push_back(parse_override(s));
  if (o.seed) overrides.emplace_back("sim.seed", std::to_string(*o.seed));
  if (o.trials) overrides.emplace_back("sim.trials", std::to_string(*o.trials));
  if (o.config_path.empty()) return parse_config("", overrides);
  return load_config(o.config_path, overrides);
}

ExperimentResult execute(const Scenario& sc, int jobs, std::ostream& err, const std::string& label) {
  ExperimentOptions opts;
  opts.jobs = jobs;
  opts.progress = [&err, &label](int done, int total) {
    err << "[" << label << "] trial " << done << "/" << total << "\n" << std::flush;
  };
  return run_experiment(sc, opts);
}

json bounds_json(const ExperimentResult& r) {
  json rows = json::array();
  for (const auto& b : r.bound_rows)
    rows.push_back({{"name", b.name}, {"value", b.value}, {"empirical", b.empirical}, {"satisfied", b.satisfied}});
  return {{"psi_T", r.bounds.psi_T},
          {"l_T", r.bounds.l_T},
          {"vartheta", r.bounds.vartheta},
          {"in_degree", r.bounds.in_degree},
          {"rows", rows},
          {"all_satisfied", r.bounds_satisfied()}};
}

json result_json(const Scenario& sc, const ExperimentResult& r) {
  const auto& rep = r.report;
  json j = {
      {"comm_model", std::string(to_string(sc.config().comm_model))},
      {"gamma", sc.config().gamma},
      {"p", sc.config().p},
      {"trials", rep.trials},
      {"horizon", rep.horizon},
      {"reward_digest", hex(r.reward_digest)},
      {"network_regret", rep.network_regret()},
      {"mean_comm_effect", rep.mean_comm_effect()},
      {"mean_connectivity", rep.mean_connectivity},
      {"gamma_floor_violations", rep.gamma_violations},
      {"trial_network_regret", rep.trial_regret_final},
      {"comm_effect_rule", "options with zero mean self-sample count are excluded from C_j and h_i"},
      {"bounds", bounds_json(r)},
  };
  if (rep.gamma_violations > 0)
    j["first_gamma_violation"] = {{"trial", rep.first_violation_trial},
                                  {"t", rep.first_violation_t},
                                  {"agent", rep.first_violation_agent}};
  return j;
}

void write_summary(const fs::path& dir, const SimulationConfig& cfg, json body) {
  body["config"] = write_config(cfg);
  write_text(dir / "summary.json", body.dump(2) + "\n");
}

SimulationConfig at_connectivity(SimulationConfig cfg, CommModel model, double c) {
  cfg.comm_model = model;
  if (model == CommModel::ucb) {
    if (c != std::floor(c) || c < 0) throw ConfigError("--connectivity: ucb budget must be a non-negative integer, got " + format_real(c));
    cfg.gamma = static_cast<int>(c);
    cfg.p = 0.0;
  } else {
    if (cfg.n_agents < 2) throw ConfigError("--connectivity: er needs agents.count >= 2");
    cfg.gamma = 0;
    cfg.p = c / (cfg.n_agents - 1);
  }
  return cfg;
}

int cmd_run(const Options& o, std::ostream& err, bool bounds_only) {
  const SimulationConfig cfg = resolve_config(o);
  const Scenario sc(cfg);
  const ExperimentResult r = execute(sc, o.jobs, err, bounds_only ? "bounds" : "run");
  AtomicDir dir(o.out_dir);
  if (bounds_only) {
    auto out = open_out(dir.path() / "bounds.csv");
    out << "name,value,empirical,satisfied\n";
    for (const auto& b : r.bound_rows)
      out << b.name << ',' << format_real(b.value) << ',' << format_real(b.empirical) << ',' << (b.satisfied ? 1 : 0)
          << '\n';
    close_out(out, dir.path() / "bounds.csv");
  } else {
    write_report_csvs(dir.path(), r);
  }
  write_text(dir.path() / "config.ini", write_config(cfg));
  write_summary(dir.path(), cfg, result_json(sc, r));
  dir.commit();
  for (const auto& b : r.bound_rows)
    if (!b.satisfied) err << "bound violated: " << b.name << " (bound " << b.value << ", empirical " << b.empirical << ")\n";
  if (bounds_only && o.strict && !r.bounds_satisfied()) return kExitBoundViolation;
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& err) {
  if (o.connectivity.empty()) throw ConfigError("sweep needs --connectivity");
  const SimulationConfig base = resolve_config(o);
  AtomicDir dir(o.out_dir);
  auto curves = open_out(dir.path() / "sweep.csv");
  curves << "model,connectivity,t,network_regret\n";
  auto table = open_out(dir.path() / "sweep_summary.csv");
  table << "model,connectivity,network_regret,regret_se,mean_comm_effect,mean_connectivity,bounds_satisfied\n";
  json settings = json::array();
  for (CommModel model : {CommModel::ucb, CommModel::er}) {
    for (double c : o.connectivity) {
      const SimulationConfig cfg = at_connectivity(base, model, c);
      const Scenario sc(cfg);
      const std::string label = std::string(to_string(model)) + "_c" + format_real(c);
      const ExperimentResult r = execute(sc, o.jobs, err, label);
      const auto& rep = r.report;
      for (std::size_t cp = 0; cp < rep.checkpoints.size(); ++cp)
        curves << to_string(model) << ',' << format_real(c) << ',' << rep.checkpoints[cp] << ','
               << format_real(rep.network_regret_curve[cp]) << '\n';
      const std::vector<double> zeros(rep.trial_regret_final.size(), 0.0);
      const PairedStats s = paired_difference(rep.trial_regret_final, zeros);
      table << to_string(model) << ',' << format_real(c) << ',' << format_real(rep.network_regret()) << ','
            << format_real(s.se) << ',' << format_real(rep.mean_comm_effect()) << ','
            << format_real(rep.mean_connectivity) << ',' << (r.bounds_satisfied() ? 1 : 0) << '\n';
      const fs::path sub = dir.path() / label;
      fs::create_directory(sub);
      write_report_csvs(sub, r);
      write_text(sub / "config.ini", write_config(cfg));
      json j = result_json(sc, r);
      j["connectivity"] = c;
      j["label"] = label;
      settings.push_back(j);
    }
  }
  close_out(curves, dir.path() / "sweep.csv");
  close_out(table, dir.path() / "sweep_summary.csv");
  write_text(dir.path() / "config.ini", write_config(base));
  write_summary(dir.path(), base, {{"subcommand", "sweep"}, {"settings", settings}});
  dir.commit();
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& err) {
  if (o.connectivity.size() != 1) throw ConfigError("compare needs exactly one --connectivity value");
  const double c = o.connectivity.front();
  const SimulationConfig base = resolve_config(o);
  const SimulationConfig ucb_cfg = at_connectivity(base, CommModel::ucb, c);
  const SimulationConfig er_cfg = at_connectivity(base, CommModel::er, c);
  const Scenario ucb_sc(ucb_cfg), er_sc(er_cfg);
  const ExperimentResult ucb = execute(ucb_sc, o.jobs, err, "ucb");
  const ExperimentResult er = execute(er_sc, o.jobs, err, "er");
  if (ucb.reward_digest != er.reward_digest) throw std::logic_error("compare arms drew different reward streams");

  AtomicDir dir(o.out_dir);
  auto out = open_out(dir.path() / "compare.csv");
  out << "trial,ucb_network_regret,er_network_regret\n";
  for (int k = 0; k < ucb.report.trials; ++k)
    out << k << ',' << format_real(ucb.report.trial_regret_final[k]) << ','
        << format_real(er.report.trial_regret_final[k]) << '\n';
  close_out(out, dir.path() / "compare.csv");
  for (auto [name, r, cfg] : {std::tuple{"ucb", &ucb, &ucb_cfg}, std::tuple{"er", &er, &er_cfg}}) {
    fs::create_directory(dir.path() / name);
    write_report_csvs(dir.path() / name, *r);
    write_text(dir.path() / name / "config.ini", write_config(*cfg));
  }
  const PairedStats d = paired_difference(ucb.report.trial_regret_final, er.report.trial_regret_final);
  write_text(dir.path() / "config.ini", write_config(base));
  write_summary(dir.path(), base,
                {{"subcommand", "compare"},
                 {"connectivity", c},
                 {"ucb", result_json(ucb_sc, ucb)},
                 {"er", result_json(er_sc, er)},
                 {"paired", {{"mean_diff_ucb_minus_er", d.mean_diff}, {"se", d.se}, {"n", d.n}}}});
  dir.commit();
  err << "ucb - er final network regret: " << d.mean_diff << " (paired se " << d.se << ")\n";
  return kExitOk;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_report_csvs(const fs::path& dir, const ExperimentResult& result) {
  const MetricsReport& r = result.report;
  {
    const fs::path p = dir / "regret.csv";
    auto out = open_out(p);
    out << "t,agent,option,cum_regret\n";
    for (std::size_t cp = 0; cp < r.checkpoints.size(); ++cp)
      for (AgentId j = 0; j < r.n_agents; ++j)
        for (Option i = 0; i < r.n_options; ++i)
          out << r.checkpoints[cp] << ',' << j << ',' << i << ',' << format_real(r.cum_regret(cp, j, i)) << '\n';
    close_out(out, p);
  }
  {
    const fs::path p = dir / "network_regret.csv";
    auto out = open_out(p);
    out << "t,network_regret\n";
    for (std::size_t cp = 0; cp < r.checkpoints.size(); ++cp)
      out << r.checkpoints[cp] << ',' << format_real(r.network_regret_curve[cp]) << '\n';
    close_out(out, p);
  }
  {
    const fs::path p = dir / "counts.csv";
    auto out = open_out(p);
    out << "agent,option,N,Ns,Nc\n";
    for (AgentId j = 0; j < r.n_agents; ++j)
      for (Option i = 0; i < r.n_options; ++i) {
        const std::size_t c = r.cell(j, i);
        out << j << ',' << i << ',' << format_real(r.mean_n[c]) << ',' << format_real(r.mean_ns[c]) << ','
            << format_real(r.mean_nc[c]) << '\n';
      }
    close_out(out, p);
  }
  {
    const fs::path p = dir / "comm_effect.csv";
    auto out = open_out(p);
    out << "agent,C\n";
    for (AgentId j = 0; j < r.n_agents; ++j) out << j << ',' << format_real(r.comm_effect[j]) << '\n';
    close_out(out, p);
  }
  {
    const fs::path p = dir / "bounds.csv";
    auto out = open_out(p);
    out << "name,value,empirical,satisfied\n";
    for (const auto& b : result.bound_rows)
      out << b.name << ',' << format_real(b.value) << ',' << format_real(b.empirical) << ',' << (b.satisfied ? 1 : 0)
          << '\n';
    close_out(out, p);
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Multi-agent bandit simulator on spatial graphs"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "INI experiment config")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out_dir, "Output directory (replaced atomically)");
    sub->add_option("--seed", o.seed, "Master seed (overrides sim.seed)");
    sub->add_option("--trials", o.trials, "Trial count (overrides sim.trials)")->check(CLI::PositiveNumber);
    sub->add_option("--set", o.sets, "Config override section.key=value (repeatable)");
    sub->add_option("--jobs", o.jobs, "Worker threads for trials")->check(CLI::PositiveNumber);
  };
  auto* run = app.add_subcommand("run", "Run one configuration and write the metric CSVs");
  common(run);
  auto* sweep = app.add_subcommand("sweep", "Vary connectivity for both comm models");
  common(sweep);
  sweep->add_option("--connectivity", o.connectivity, "Expected peers per step, e.g. 0,2,4")
      ->delimiter(',')
      ->required();
  auto* compare = app.add_subcommand("compare", "ucb vs er at matched connectivity on paired seeds");
  common(compare);
  compare->add_option("--connectivity", o.connectivity, "Expected peers per step")->required();
  auto* bounds = app.add_subcommand("bounds", "Run and check the theoretical bounds");
  common(bounds);
  bounds->add_flag("--strict", o.strict, "Exit nonzero on any violated bound");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(o, err, false);
    if (bounds->parsed()) return cmd_run(o, err, true);
    if (sweep->parsed()) return cmd_sweep(o, err);
    if (compare->parsed()) return cmd_compare(o, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GraphError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EnvironmentError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace mamab
