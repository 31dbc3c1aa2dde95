#pragma once

#include "layered/ascent.hpp"
#include "layered/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace layered {

struct HillclimbConfig {
    double alpha0 = 0.05;
    double rho = 0.5;
    double alpha_min = 1e-4;
    std::size_t retries = 10;   // R: up to R+1 trials per iteration
    std::size_t k_max = 1000;
    std::uint64_t seed = 0;
    /// When set, a stagnating run applies the multi-point perturbation of the
    /// recovery loop (accepted unconditionally) and resets the step to alpha0.
    std::optional<RecoveryConfig> recovery;

    void validate() const;
};

/// A trial move: point index and unit direction.
struct TrialMove {
    std::size_t index;
    std::vector<double> direction;
};

/// Replaces the random draw; receives the generator and the current state.
using TrialProposal = std::function<TrialMove(Rng&, const PointSet&)>;

struct HillclimbResult {
    AscentResult run;                  // trace kind is Accepted, Rejected or Perturbation
    std::vector<double> step_sizes;    // working alpha after each iteration
};

/// Projected stochastic hillclimbing on J o map. Per trial the stream draws
/// the point index, then the Gaussian direction coordinates.
HillclimbResult hillclimb(const PointSet& X0, const FeasibleRegion& region, const Surrogate& surrogate,
                          const HillclimbConfig& cfg, const TrialProposal& proposal = {});

}  // namespace layered
