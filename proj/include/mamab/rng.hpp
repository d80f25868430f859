#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mamab {

using Engine = std::mt19937_64;

// Purpose tags for substreams. Values are part of the seeding contract;
// changing them changes every trajectory.
enum class Purpose : std::uint64_t {
  prior = 1,
  target_tie = 2,
  move_tie = 3,
  comm_tie = 4,
  er_edges = 5,
  initial_position = 6,
  reward = 7,
};

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

inline constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return combine(mix64(master_seed), trial);
}

// Substream keyed on (trial, agent, purpose). Trial-wide streams use agent 0.
inline constexpr std::uint64_t substream_seed(std::uint64_t trial_seed, std::uint64_t agent,
                                              Purpose purpose) {
  return combine(combine(trial_seed, static_cast<std::uint64_t>(purpose)), agent);
}

inline Engine make_engine(std::uint64_t seed) { return Engine{seed}; }

inline Engine make_engine(std::uint64_t trial_seed, std::uint64_t agent, Purpose purpose) {
  return Engine{substream_seed(trial_seed, agent, purpose)};
}

inline std::size_t uniform_index(Engine& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform_real(Engine& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// [0, 1) with 53 random bits.
inline double bits_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Standard normal as a pure function of (key, t, option). Box-Muller on two
// counter-derived uniforms; no state is carried between calls.
double counter_normal(std::uint64_t key, std::uint64_t t, std::uint64_t option);

}  // namespace mamab
