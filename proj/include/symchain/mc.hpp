#pragma once

#include <cstdint>
#include <vector>

#include "symchain/generator.hpp"
#include "symchain/time_grid.hpp"

namespace symchain::mc {

struct SimulationConfig {
    std::int64_t n_paths = 0;
    double t_max = 0.0;
    std::uint64_t seed = 0;
    int start = 0;  // state label

    void require_valid() const;
};

// One exact-event trajectory. Events consume randomness in a fixed order
// (holding-time draw, then jump draw), and each path runs its own stream
// keyed by (seed, path index), so results do not depend on scheduling.
struct PathSample {
    std::vector<double> jump_times;  // strictly increasing
    std::vector<int> states;         // label occupied after each jump
};

struct PathCollection {
    StateSpace space;
    SimulationConfig config;
    std::vector<PathSample> paths;

    // State occupied at time t (cadlag; absorbing states persist).
    int state_at(const PathSample& path, double t) const;
};

// Exact-event simulation: exponential holding time at rate -q_nn, next
// state by cumulative-sum inversion over the off-diagonal row. Absorbing
// states end the path. n_threads == 0 picks the hardware count.
PathCollection simulate_paths(const GeneratorMatrix& q, const SimulationConfig& config, int n_threads = 0);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Fraction of paths in state n at time t, with binomial standard error.
Estimate estimate_transition(const PathCollection& paths, int n_label, double t);

// Centered-bin histogram of first hits of `target`: the value at grid
// point t_j estimates the density at t_j (bin [t_j - h/2, t_j + h/2)).
// hit_fraction counts paths that reach the target by bins.t_max.
struct FptHistogram {
    DensityTrace density;
    double hit_fraction = 0.0;
};
FptHistogram estimate_fpt_histogram(const PathCollection& paths, int target_label, const TimeGrid& bins);

// Fraction of paths at n at time t that never visited s in (0, t].
Estimate estimate_avoiding(const PathCollection& paths, int s_label, int n_label, double t);

}  // namespace symchain::mc
