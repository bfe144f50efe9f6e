#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "erlangcev/model.hpp"

namespace erlangcev {

/// Investment rule (t, x, s, phase) -> amount in the risky asset.
/// Admissibility of user-supplied rules is the caller's responsibility.
struct Strategy {
    std::string label;
    std::function<double(double t, double x, double s, int phase)> invest;
};

struct PathState {
    double t;
    double x;
    double s;
    int phase;  // 1-based
};

struct PathOutcome {
    PathState terminal;
    double utility;  // -(1/m) e^{-m X_T}
};

struct SimulationResult {
    std::vector<double> utilities;  // per path
    double mean;
    double std_error;
    double ci_low;   // 99% confidence interval
    double ci_high;
    std::size_t n_paths;
    double dt;
    std::uint64_t seed;
};

struct StrategyComparison {
    struct Row {
        std::string label;
        double mean;
        double std_error;
        int rank;  // 1 = best mean utility
    };
    std::vector<Row> rows;
};

/// One Euler-Maruyama path of the controlled surplus and the CEV price
/// on a shared Brownian increment. Phase sojourns are exponential;
/// claims are applied at the exact jump time of the n -> 1 transition
/// (steps are split at events, so claim timing carries no O(dt) bias).
PathOutcome simulate_path(const ModelParams& params, const PhaseIntensities& phases,
                          const ClaimDistribution& dist, const Strategy& strategy,
                          const PathState& initial, double dt, std::uint64_t seed);

/// Mean terminal utility over independent paths with per-path seeds
/// derived from (seed, path index); deterministic regardless of
/// scheduling. Paths run in parallel.
SimulationResult estimate_utility(const ModelParams& params, const PhaseIntensities& phases,
                                  const ClaimDistribution& dist, const Strategy& strategy,
                                  const PathState& initial, double dt, std::size_t n_paths,
                                  std::uint64_t seed);

/// Ranks strategies under common random numbers: per path index, every
/// strategy sees the same Brownian increments, jump times and claims.
StrategyComparison compare_strategies(const ModelParams& params,
                                      const PhaseIntensities& phases,
                                      const ClaimDistribution& dist,
                                      const std::vector<Strategy>& strategies,
                                      const PathState& initial, double dt,
                                      std::size_t n_paths, std::uint64_t seed);

/// Per-strategy utility samples from the common-random-numbers run,
/// aligned by path index (for paired comparisons).
std::vector<std::vector<double>> common_utilities(const ModelParams& params,
                                                  const PhaseIntensities& phases,
                                                  const ClaimDistribution& dist,
                                                  const std::vector<Strategy>& strategies,
                                                  const PathState& initial, double dt,
                                                  std::size_t n_paths, std::uint64_t seed);

/// Independent draws of the full interclaim time (sum of one sojourn
/// per phase).
std::vector<double> sample_interclaim_times(const PhaseIntensities& phases,
                                            std::size_t count, std::uint64_t seed);

/// CDF of the generalized Erlang(n) law for pairwise distinct rates.
double generalized_erlang_cdf(const PhaseIntensities& phases, double t);

}  // namespace erlangcev
