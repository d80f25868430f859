#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mamab/simulator.hpp"

namespace mamab {

namespace {

constexpr const char* kMagic = "mamab-trial-log";
constexpr int kVersion = 1;

template <typename T>
void write_row(std::ostream& out, const char* tag, AgentId j, const std::vector<T>& v) {
  out << tag << ' ' << j;
  for (const T& x : v) out << ' ' << x;
  out << '\n';
}

template <typename T>
std::vector<T> read_values(std::istringstream& in, std::size_t n) {
  std::vector<T> v(n);
  for (auto& x : v)
    if (!(in >> x)) throw std::runtime_error("trial log: truncated row");
  return v;
}

std::istringstream next_line(std::istream& in, const std::string& tag) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trial log: missing '" + tag + "' line");
  std::istringstream ls(line);
  std::string got;
  ls >> got;
  if (got != tag) throw std::runtime_error("trial log: expected '" + tag + "', got '" + got + "'");
  return ls;
}

}  // namespace

void write_log(std::ostream& out, const TrialLog& log) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  const int n = log.n_agents();
  const int m = log.n_options();
  out << kMagic << ' ' << kVersion << '\n';
  out << "header " << n << ' ' << m << ' ' << log.horizon() << ' ' << log.trial_index << ' '
      << log.trial_seed << ' ' << log.steps() << ' ' << log.final_states.size() << '\n';
  for (AgentId j = 0; j < n; ++j) {
    out << "init " << j << ' ' << log.initial_positions[j];
    for (int i = 0; i < m; ++i) out << ' ' << log.priors[static_cast<std::size_t>(j) * m + i];
    out << '\n';
  }
  for (std::int64_t t = 1; t <= log.steps(); ++t)
    for (AgentId j = 0; j < n; ++j) {
      const auto& r = log.record(t, j);
      out << "step " << t << ' ' << j << ' ' << r.position << ' ' << r.target << ' ' << r.sampled << ' '
          << r.reward;
      const auto in = log.in_neighbors(t, j);
      out << ' ' << in.size();
      for (AgentId k : in) out << ' ' << k;
      const auto obs = log.observed(t, j);
      out << ' ' << obs.size();
      for (Option i : obs) out << ' ' << i;
      out << '\n';
    }
  for (const AgentState& s : log.final_states) {
    const auto& p = s.params;
    out << "final " << s.id << ' ' << s.position << ' ' << s.target << ' ' << p.alpha << ' ' << p.eta << ' '
        << p.sigma << ' ' << p.gamma << ' ' << p.tau_bar << '\n';
    write_row(out, "est", s.id, s.est_mean);
    write_row(out, "cnt", s.id, s.count);
    write_row(out, "cself", s.id, s.count_self);
    write_row(out, "ccomm", s.id, s.count_comm);
    write_row(out, "bmean", s.id, s.belief_mean);
    write_row(out, "bcnt", s.id, s.belief_count);
  }
  out.flags(flags);
  out.precision(prec);
}

TrialLog read_log(std::istream& in) {
  {
    std::string line;
    if (!std::getline(in, line) || line != std::string(kMagic) + " " + std::to_string(kVersion))
      throw std::runtime_error("trial log: bad magic line");
  }
  auto hs = next_line(in, "header");
  int n = 0, m = 0;
  std::int64_t horizon = 0, steps = 0;
  std::size_t finals = 0;
  TrialLog log;
  int trial = 0;
  std::uint64_t seed = 0;
  if (!(hs >> n >> m >> horizon >> trial >> seed >> steps >> finals))
    throw std::runtime_error("trial log: bad header");
  log = TrialLog(n, m, horizon);
  log.trial_index = trial;
  log.trial_seed = seed;
  log.priors.resize(static_cast<std::size_t>(n) * m);
  for (AgentId j = 0; j < n; ++j) {
    auto ls = next_line(in, "init");
    AgentId id;
    Vertex pos;
    ls >> id >> pos;
    log.initial_positions.push_back(pos);
    const auto pri = read_values<double>(ls, m);
    std::copy(pri.begin(), pri.end(), log.priors.begin() + static_cast<std::ptrdiff_t>(j) * m);
  }
  for (std::int64_t s = 0; s < steps * n; ++s) {
    auto ls = next_line(in, "step");
    std::int64_t t;
    AgentId j;
    StepRecord r;
    std::size_t k_count, o_count;
    if (!(ls >> t >> j >> r.position >> r.target >> r.sampled >> r.reward >> k_count))
      throw std::runtime_error("trial log: bad step line");
    const auto ks = read_values<AgentId>(ls, k_count);
    ls >> o_count;
    const auto os = read_values<Option>(ls, o_count);
    log.append(r, ks, os);
  }
  for (std::size_t f = 0; f < finals; ++f) {
    AgentState s;
    auto ls = next_line(in, "final");
    ls >> s.id >> s.position >> s.target >> s.params.alpha >> s.params.eta >> s.params.sigma >>
        s.params.gamma >> s.params.tau_bar;
    s.n_agents = n;
    s.n_options = m;
    const auto cells = static_cast<std::size_t>(n) * m;
    AgentId id;
    auto est = next_line(in, "est");
    est >> id;
    s.est_mean = read_values<double>(est, m);
    auto cnt = next_line(in, "cnt");
    cnt >> id;
    s.count = read_values<std::int64_t>(cnt, m);
    auto cself = next_line(in, "cself");
    cself >> id;
    s.count_self = read_values<std::int64_t>(cself, m);
    auto ccomm = next_line(in, "ccomm");
    ccomm >> id;
    s.count_comm = read_values<std::int64_t>(ccomm, m);
    auto bmean = next_line(in, "bmean");
    bmean >> id;
    s.belief_mean = read_values<double>(bmean, cells);
    auto bcnt = next_line(in, "bcnt");
    bcnt >> id;
    s.belief_count = read_values<std::int64_t>(bcnt, cells);
    log.final_states.push_back(std::move(s));
  }
  return log;
}

}  // namespace mamab
