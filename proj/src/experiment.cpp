#include "mamab/experiment.hpp"

#include <algorithm>
#include <exception>

namespace mamab {

namespace {

ExperimentResult finish(const Scenario& sc, MetricsReport report) {
  ExperimentResult out;
  const auto& cfg = sc.config();
  const double comm_param = cfg.comm_model == CommModel::er ? cfg.p : static_cast<double>(cfg.gamma);
  out.bounds = theoretical_bounds(sc.env(), sc.graph(), sc.params(), cfg.comm_model, comm_param, sc.n_agents(),
                                  sc.horizon());
  out.report = std::move(report);
  out.bound_rows = check_bounds(out.report, out.bounds);
  out.reward_digest = reward_stream_digest(cfg.seed, cfg.trials);
  return out;
}

}  // namespace

bool ExperimentResult::bounds_satisfied() const {
  return std::all_of(bound_rows.begin(), bound_rows.end(), [](const BoundRow& r) { return r.satisfied; });
}

std::uint64_t reward_stream_digest(std::uint64_t master_seed, int trials) {
  std::uint64_t h = 0;
  for (int k = 0; k < trials; ++k)
    h = combine(h, substream_seed(trial_seed(master_seed, static_cast<std::uint64_t>(k)), 0, Purpose::reward));
  return h;
}

ExperimentResult run_experiment_serial(const Scenario& scenario) {
  const auto ctx = MetricsContext::from(scenario);
  const int trials = scenario.config().trials;
  MetricsAccumulator acc(ctx, scenario.n_agents(), scenario.n_options(), scenario.horizon(), trials);
  for (int k = 0; k < trials; ++k) acc.add(summarize_trial(run_trial(scenario, k), ctx));
  return finish(scenario, acc.finalize());
}

ExperimentResult run_experiment(const Scenario& scenario, const ExperimentOptions& options) {
  const auto ctx = MetricsContext::from(scenario);
  const int trials = scenario.config().trials;
  const int jobs = std::max(1, options.jobs);
  MetricsAccumulator acc(ctx, scenario.n_agents(), scenario.n_options(), scenario.horizon(), trials);
  std::exception_ptr failure;
  int done = 0;

#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (int k = 0; k < trials; ++k) {
    // Exceptions must not cross a critical-region or parallel-region boundary.
    std::exception_ptr local;
    try {
      const TrialLog log = run_trial(scenario, k);
      if (options.inspect) {
#pragma omp critical(mamab_inspect)
        try {
          options.inspect(log);
        } catch (...) {
          local = std::current_exception();
        }
      }
      if (!local) {
        TrialSummary s = summarize_trial(log, ctx);
#pragma omp critical(mamab_accumulate)
        try {
          acc.add(s);
          ++done;
          if (options.progress) options.progress(done, trials);
        } catch (...) {
          local = std::current_exception();
        }
      }
    } catch (...) {
      local = std::current_exception();
    }
    if (local) {
#pragma omp critical(mamab_failure)
      if (!failure) failure = local;
    }
  }
  if (failure) std::rethrow_exception(failure);
  return finish(scenario, acc.finalize());
}

}  // namespace mamab
