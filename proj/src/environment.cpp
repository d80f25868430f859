#include "mamab/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mamab/rng.hpp"

namespace mamab {

GapInfo compute_gaps(std::span<const double> means) {
  if (means.size() < 2) throw EnvironmentError("need at least 2 options");
  for (double m : means)
    if (!std::isfinite(m)) throw EnvironmentError("option means must be finite");
  const auto best = std::max_element(means.begin(), means.end());
  const auto optimal = static_cast<Option>(best - means.begin());
  GapInfo g;
  g.optimal = optimal;
  g.gap_min = INFINITY;
  g.gap_max = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (static_cast<Option>(i) == optimal) continue;
    const double gap = *best - means[i];
    if (gap <= 0.0)
      throw EnvironmentError("tied maximum mean at options " + std::to_string(optimal) + " and " +
                             std::to_string(i) + ": no well-defined optimal option");
    g.gap_min = std::min(g.gap_min, gap);
    g.gap_max = std::max(g.gap_max, gap);
  }
  return g;
}

RewardEnvironment make_gaussian_env(std::vector<double> means, double variance) {
  if (!(variance >= 0.0) || !std::isfinite(variance))
    throw EnvironmentError("variance must be finite and non-negative");
  RewardEnvironment env;
  env.gaps_ = compute_gaps(means);
  env.means_ = std::move(means);
  env.variance_ = variance;
  env.sigma_ = std::sqrt(4.0 * variance);
  return env;
}

RewardEnvironment make_drift_env(std::vector<double> means, double variance, double amplitude,
                                 double period) {
  RewardEnvironment env = make_gaussian_env(std::move(means), variance);
  if (!(amplitude >= 0.0) || !(amplitude < env.gaps_.gap_min / 2.0))
    throw EnvironmentError("drift amplitude must lie in [0, gap_min/2)");
  if (!(period > 0.0)) throw EnvironmentError("drift period must be positive");
  env.kind_ = RewardKind::bounded_drift;
  env.drift_amplitude_ = amplitude;
  env.drift_period_ = period;
  return env;
}

double RewardEnvironment::mean_at(Option i, std::int64_t t) const {
  if (kind_ == RewardKind::stationary_gaussian) return means_[i];
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(num_options());
  return means_[i] + drift_amplitude_ * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / drift_period_ + phase);
}

double RewardEnvironment::sample(std::uint64_t trial_seed, std::int64_t t, Option i) const {
  const double mu = mean_at(i, t);
  if (variance_ == 0.0) return mu;
  const std::uint64_t key = substream_seed(trial_seed, 0, Purpose::reward);
  return mu + std::sqrt(variance_) * counter_normal(key, static_cast<std::uint64_t>(t),
                                                    static_cast<std::uint64_t>(i));
}

std::vector<double> RewardEnvironment::realize_rewards(std::int64_t t, std::uint64_t trial_seed) const {
  std::vector<double> out(num_options());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sample(trial_seed, t, static_cast<Option>(i));
  return out;
}

std::vector<double> gradient_means(const SpatialGraph& graph, Vertex peak, double low, double high) {
  if (!graph.valid(peak)) throw EnvironmentError("gradient peak is not a vertex");
  if (!(high > low)) throw EnvironmentError("gradient needs high > low");
  const auto row = graph.distances().row(peak);
  const double ecc = *std::max_element(row.begin(), row.end());
  std::vector<double> means(graph.num_vertices());
  for (std::size_t v = 0; v < means.size(); ++v) means[v] = high - (high - low) * row[v] / ecc;
  return means;
}

}  // namespace mamab
