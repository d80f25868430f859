#include "mamab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace mamab {

namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kSections[] = {"graph", "env", "agents", "comm", "sim"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("config key '" + key + "': expected a number, got '" + raw + "'");
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& raw) {
  std::vector<T> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

template <typename T>
std::string fmt(T v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <typename T>
std::string fmt_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

std::optional<double> parse_auto(const std::string& key, const std::string& raw) {
  if (trim(raw) == "auto") return std::nullopt;
  return parse_number<double>(key, raw);
}

std::string fmt_auto(const std::optional<double>& v) { return v ? fmt(*v) : "auto"; }

struct Field {
  std::string_view key;
  std::function<void(SimulationConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const SimulationConfig&)> get;
};

#define MAMAB_NUMBER(name, member, type)                                                          \
  Field {                                                                                         \
    name, [](SimulationConfig& c, const std::string& k, const std::string& v) {                  \
      c.member = parse_number<type>(k, v);                                                        \
    },                                                                                            \
        [](const SimulationConfig& c) { return fmt(c.member); }                                   \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"graph.kind",
       [](SimulationConfig& c, const std::string& k, const std::string& v) {
         const std::string s = trim(v);
         if (s == "lattice") c.graph.kind = GraphKind::lattice;
         else if (s == "complete") c.graph.kind = GraphKind::complete;
         else if (s == "edge_list") c.graph.kind = GraphKind::edge_list;
         else throw ConfigError("config key '" + k + "': expected lattice, complete or edge_list, got '" + v + "'");
       },
       [](const SimulationConfig& c) -> std::string {
         switch (c.graph.kind) {
           case GraphKind::lattice: return "lattice";
           case GraphKind::complete: return "complete";
           case GraphKind::edge_list: return "edge_list";
         }
         return "lattice";
       }},
      MAMAB_NUMBER("graph.rows", graph.rows, int),
      MAMAB_NUMBER("graph.cols", graph.cols, int),
      MAMAB_NUMBER("graph.size", graph.size, int),
      {"graph.edge_list",
       [](SimulationConfig& c, const std::string&, const std::string& v) { c.graph.edge_list_path = trim(v); },
       [](const SimulationConfig& c) { return c.graph.edge_list_path; }},

      {"env.means",
       [](SimulationConfig& c, const std::string& k, const std::string& v) {
         if (trim(v) == "gradient") {
           c.env.means_mode = MeansMode::gradient;
           c.env.means.clear();
         } else {
           c.env.means_mode = MeansMode::explicit_list;
           c.env.means = parse_list<double>(k, v);
         }
       },
       [](const SimulationConfig& c) {
         return c.env.means_mode == MeansMode::gradient ? std::string("gradient") : fmt_list(c.env.means);
       }},
      MAMAB_NUMBER("env.gradient_low", env.gradient_low, double),
      MAMAB_NUMBER("env.gradient_high", env.gradient_high, double),
      MAMAB_NUMBER("env.gradient_peak", env.gradient_peak, int),
      MAMAB_NUMBER("env.variance", env.variance, double),
      {"env.kind",
       [](SimulationConfig& c, const std::string& k, const std::string& v) {
         const std::string s = trim(v);
         if (s == "gaussian") c.env.kind = RewardKind::stationary_gaussian;
         else if (s == "drift") c.env.kind = RewardKind::bounded_drift;
         else throw ConfigError("config key '" + k + "': expected gaussian or drift, got '" + v + "'");
       },
       [](const SimulationConfig& c) {
         return std::string(c.env.kind == RewardKind::bounded_drift ? "drift" : "gaussian");
       }},
      MAMAB_NUMBER("env.drift_amplitude", env.drift_amplitude, double),
      MAMAB_NUMBER("env.drift_period", env.drift_period, double),

      MAMAB_NUMBER("agents.count", n_agents, int),
      MAMAB_NUMBER("agents.alpha", alpha, double),
      MAMAB_NUMBER("agents.eta", eta, double),
      {"agents.sigma", [](SimulationConfig& c, const std::string& k, const std::string& v) { c.sigma = parse_auto(k, v); },
       [](const SimulationConfig& c) { return fmt_auto(c.sigma); }},
      {"agents.prior_low",
       [](SimulationConfig& c, const std::string& k, const std::string& v) { c.prior_low = parse_auto(k, v); },
       [](const SimulationConfig& c) { return fmt_auto(c.prior_low); }},
      {"agents.prior_high",
       [](SimulationConfig& c, const std::string& k, const std::string& v) { c.prior_high = parse_auto(k, v); },
       [](const SimulationConfig& c) { return fmt_auto(c.prior_high); }},
      {"agents.initial_positions",
       [](SimulationConfig& c, const std::string& k, const std::string& v) {
         if (trim(v) == "random") c.initial_positions.clear();
         else c.initial_positions = parse_list<Vertex>(k, v);
       },
       [](const SimulationConfig& c) {
         return c.initial_positions.empty() ? std::string("random") : fmt_list(c.initial_positions);
       }},

      {"comm.model",
       [](SimulationConfig& c, const std::string& k, const std::string& v) {
         try {
           c.comm_model = parse_comm_model(trim(v));
         } catch (const CommError&) {
           throw ConfigError("config key '" + k + "': expected none, er or ucb, got '" + v + "'");
         }
       },
       [](const SimulationConfig& c) { return std::string(to_string(c.comm_model)); }},
      MAMAB_NUMBER("comm.gamma", gamma, int),
      MAMAB_NUMBER("comm.p", p, double),

      MAMAB_NUMBER("sim.horizon", horizon, std::int64_t),
      MAMAB_NUMBER("sim.trials", trials, int),
      MAMAB_NUMBER("sim.seed", seed, std::uint64_t),
      MAMAB_NUMBER("sim.regret_cadence", regret_cadence, int),
  };
  return table;
}

#undef MAMAB_NUMBER

const Field* find_field(std::string_view key) {
  for (const Field& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

bool known_section(std::string_view s) {
  for (auto k : kSections)
    if (k == s) return true;
  return false;
}

}  // namespace

Override parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(text) + "': expected key=value");
  std::string key = trim(text.substr(0, eq));
  if (key.find('.') == std::string::npos)
    throw ConfigError("override '" + std::string(text) + "': key must be section.key");
  return {key, trim(text.substr(eq + 1))};
}

SimulationConfig parse_config(std::string_view text, const std::vector<Override>& overrides,
                              const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [key, value] : overrides) {
    if (!find_field(key)) throw ConfigError("unknown config key '" + key + "'");
    tree.put(pt::ptree::path_type(key, '.'), value);
  }

  SimulationConfig config;
  for (const auto& [section, body] : tree) {
    if (!known_section(section)) throw ConfigError("unknown config section '" + section + "'");
    if (!body.data().empty() && body.empty())
      throw ConfigError("config key '" + section + "' must be inside a section");
    for (const auto& [name, leaf] : body) {
      const std::string key = section + "." + name;
      const Field* f = find_field(key);
      if (!f) throw ConfigError("unknown config key '" + key + "'");
      f->set(config, key, leaf.data());
    }
  }
  if (config.graph.kind == GraphKind::edge_list && !config.graph.edge_list_path.empty()) {
    std::filesystem::path p(config.graph.edge_list_path);
    if (p.is_relative() && !base_dir.empty()) config.graph.edge_list_path = (base_dir / p).lexically_normal().string();
  }
  return config;
}

SimulationConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides, std::filesystem::absolute(path).parent_path());
}

std::string write_config(const SimulationConfig& config) {
  std::string out;
  std::string_view current;
  for (const Field& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string_view section = f.key.substr(0, dot);
    if (section != current) {
      out += (current.empty() ? "[" : "\n[") + std::string(section) + "]\n";
      current = section;
    }
    out += std::string(f.key.substr(dot + 1)) + " = " + f.get(config) + "\n";
  }
  return out;
}

}  // namespace mamab
