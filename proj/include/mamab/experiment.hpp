#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mamab/metrics.hpp"
#include "mamab/simulator.hpp"

namespace mamab {

struct ExperimentOptions {
  int jobs = 1;
  // Called after each finished trial with (done, total); serialized.
  std::function<void(int, int)> progress;
  // Called with each full trial log before it is summarized and dropped;
  // serialized. An exception thrown here aborts the experiment.
  std::function<void(const TrialLog&)> inspect;
};

struct ExperimentResult {
  MetricsReport report;
  BoundValues bounds;
  std::vector<BoundRow> bound_rows;
  // Digest of the per-trial reward substream keys. Equal digests mean equal
  // reward realizations across runs (paired seeds).
  std::uint64_t reward_digest = 0;

  bool bounds_satisfied() const;
};

// Trials run concurrently on up to `jobs` OpenMP threads. The report is
// bit-identical to run_experiment_serial for any job count.
ExperimentResult run_experiment(const Scenario& scenario, const ExperimentOptions& options = {});

// Reference path: one trial after another on the calling thread.
ExperimentResult run_experiment_serial(const Scenario& scenario);

std::uint64_t reward_stream_digest(std::uint64_t master_seed, int trials);

}  // namespace mamab
