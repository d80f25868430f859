#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mamab/spatial_graph.hpp"

namespace mamab {

class EnvironmentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class RewardKind { stationary_gaussian, bounded_drift };

struct GapInfo {
  Option optimal = 0;
  double gap_min = 0.0;  // Δ
  double gap_max = 0.0;  // Δ̄
};

// Per-option reward processes X_i^t. Ground truth (means, gaps) is for the
// metrics layer only; policies see realized samples.
class RewardEnvironment {
 public:
  std::size_t num_options() const { return means_.size(); }
  const std::vector<double>& means() const { return means_; }
  double variance() const { return variance_; }
  // Sub-Gaussian scale with E e^{λ(X-μ)} <= e^{λ²σ²/8}; σ² = 4·variance.
  double sigma() const { return sigma_; }
  RewardKind kind() const { return kind_; }
  double drift_amplitude() const { return drift_amplitude_; }
  double drift_period() const { return drift_period_; }
  const GapInfo& gaps() const { return gaps_; }
  double gap(Option i) const { return means_[gaps_.optimal] - means_[i]; }

  // Instantaneous mean at step t (equals means()[i] for the stationary kind).
  double mean_at(Option i, std::int64_t t) const;

  // X_i^t for one option; a pure function of (trial_seed, t, i), shared by
  // every agent that samples i at t.
  double sample(std::uint64_t trial_seed, std::int64_t t, Option i) const;

  std::vector<double> realize_rewards(std::int64_t t, std::uint64_t trial_seed) const;

  friend RewardEnvironment make_gaussian_env(std::vector<double> means, double variance);
  friend RewardEnvironment make_drift_env(std::vector<double> means, double variance,
                                          double amplitude, double period);

 private:
  std::vector<double> means_;
  double variance_ = 0.0;
  double sigma_ = 0.0;
  RewardKind kind_ = RewardKind::stationary_gaussian;
  double drift_amplitude_ = 0.0;
  double drift_period_ = 1.0;
  GapInfo gaps_;
};

RewardEnvironment make_gaussian_env(std::vector<double> means, double variance);

// Sinusoidal mean perturbation; amplitude must stay below Δ/2 so the optimal
// option is the argmax at every step.
RewardEnvironment make_drift_env(std::vector<double> means, double variance, double amplitude,
                                 double period);

GapInfo compute_gaps(std::span<const double> means);

// Means that fall off linearly with hop distance from `peak`:
// high at the peak, low at the vertex farthest from it.
std::vector<double> gradient_means(const SpatialGraph& graph, Vertex peak, double low, double high);

}  // namespace mamab
