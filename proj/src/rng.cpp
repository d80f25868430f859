#include "mamab/rng.hpp"

#include <cmath>
#include <numbers>

namespace mamab {

double counter_normal(std::uint64_t key, std::uint64_t t, std::uint64_t option) {
  const std::uint64_t base = combine(combine(key, t), option);
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - bits_to_unit(mix64(base));
  const double u2 = bits_to_unit(mix64(base ^ 0xd1b54a32d192ed03ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace mamab
