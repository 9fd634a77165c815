#include "symchain/mc.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace symchain::mc {

namespace {

// SplitMix64: counter-based, so streams keyed by (seed, path index) are
// reproducible under any scheduling.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1): exact zeros would produce tied
    // jump times.
    double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
};

std::uint64_t stream_key(std::uint64_t seed, std::int64_t path_index) {
    SplitMix64 mixer(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(path_index) + 1ULL)));
    return mixer.next();
}

PathSample run_path(const GeneratorMatrix& q, const SimulationConfig& config, std::int64_t path_index) {
    SplitMix64 rng(stream_key(config.seed, path_index));
    PathSample path;
    int state = q.space.index_of(config.start);
    double clock = 0.0;
    for (;;) {
        const double exit_rate = -q.rates(state, state);
        if (!(exit_rate > 0.0)) break;  // absorbing
        clock += -std::log(1.0 - rng.uniform_open()) / exit_rate;
        if (clock > config.t_max) break;
        // Inversion over the off-diagonal row.
        const double mark = rng.uniform_open() * exit_rate;
        double acc = 0.0;
        int next_state = -1;
        const int n = q.size();
        for (int j = 0; j < n; ++j) {
            if (j == state) continue;
            acc += q.rates(state, j);
            if (acc > mark) {
                next_state = j;
                break;
            }
        }
        if (next_state < 0) {
            // mark fell into the rounding sliver past the last positive
            // rate; take that rate.
            for (int j = n - 1; j >= 0; --j) {
                if (j != state && q.rates(state, j) > 0.0) {
                    next_state = j;
                    break;
                }
            }
        }
        state = next_state;
        path.jump_times.push_back(clock);
        path.states.push_back(q.space.label_of(state));
    }
    return path;
}

}  // namespace

void SimulationConfig::require_valid() const {
    if (n_paths < 1) {
        throw ValidationError("InvalidConfig", "n_paths must be >= 1");
    }
    if (!(t_max > 0.0)) {
        throw ValidationError("InvalidConfig", "t_max must be positive");
    }
}

int PathCollection::state_at(const PathSample& path, double t) const {
    // Last jump at or before t; before the first jump the path sits at the
    // start state.
    const auto it = std::upper_bound(path.jump_times.begin(), path.jump_times.end(), t);
    const auto jumps_before = static_cast<std::size_t>(it - path.jump_times.begin());
    return jumps_before == 0 ? config.start : path.states[jumps_before - 1];
}

PathCollection simulate_paths(const GeneratorMatrix& q, const SimulationConfig& config, int n_threads) {
    config.require_valid();
    q.space.index_of(config.start);  // validates the start label

    PathCollection out;
    out.space = q.space;
    out.config = config;
    out.paths.resize(static_cast<std::size_t>(config.n_paths));

    int workers = n_threads > 0 ? n_threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<std::int64_t>(workers, config.n_paths));

    // Paths land in their slot by index, so the merge is deterministic.
    auto run_range = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            out.paths[static_cast<std::size_t>(i)] = run_path(q, config, i);
        }
    };
    if (workers == 1) {
        run_range(0, config.n_paths);
    } else {
        std::vector<std::thread> pool;
        const std::int64_t chunk = (config.n_paths + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::int64_t lo = w * chunk;
            const std::int64_t hi = std::min<std::int64_t>(lo + chunk, config.n_paths);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    }
    return out;
}

namespace {

void require_horizon(const PathCollection& paths, double t) {
    if (t < 0.0 || t > paths.config.t_max) {
        throw ValidationError("TimeBeyondHorizon", "t = " + std::to_string(t) + " outside [0, " +
                                                       std::to_string(paths.config.t_max) + "]");
    }
}

Estimate binomial_estimate(std::int64_t hits, std::int64_t total) {
    const double p = static_cast<double>(hits) / static_cast<double>(total);
    return Estimate{p, std::sqrt(p * (1.0 - p) / static_cast<double>(total))};
}

}  // namespace

Estimate estimate_transition(const PathCollection& paths, int n_label, double t) {
    require_horizon(paths, t);
    paths.space.index_of(n_label);
    std::int64_t hits = 0;
    for (const auto& path : paths.paths) {
        if (paths.state_at(path, t) == n_label) ++hits;
    }
    return binomial_estimate(hits, paths.config.n_paths);
}

FptHistogram estimate_fpt_histogram(const PathCollection& paths, int target_label, const TimeGrid& bins) {
    paths.space.index_of(target_label);
    if (paths.config.start == target_label) {
        throw ValidationError("StartIsTarget", "first-passage time from the target is identically 0");
    }
    const double h = bins.h();
    FptHistogram out{DensityTrace::zeros(bins), 0.0};
    std::vector<double> width(static_cast<std::size_t>(bins.size()), h);
    width.front() = 0.5 * h;  // bin [0, h/2)
    width.back() = 0.5 * h;   // bin [t_max - h/2, t_max]

    std::int64_t hit_count = 0;
    for (const auto& path : paths.paths) {
        const auto it = std::find(path.states.begin(), path.states.end(), target_label);
        if (it == path.states.end()) continue;
        const double hit = path.jump_times[static_cast<std::size_t>(it - path.states.begin())];
        if (hit > bins.t_max) continue;
        ++hit_count;
        const int bin = std::min(bins.steps, static_cast<int>(std::floor(hit / h + 0.5)));
        out.density.values[static_cast<std::size_t>(bin)] += 1.0;
    }
    for (int j = 0; j < bins.size(); ++j) {
        out.density.values[static_cast<std::size_t>(j)] /=
            static_cast<double>(paths.config.n_paths) * width[static_cast<std::size_t>(j)];
    }
    out.hit_fraction = static_cast<double>(hit_count) / static_cast<double>(paths.config.n_paths);
    return out;
}

Estimate estimate_avoiding(const PathCollection& paths, int s_label, int n_label, double t) {
    require_horizon(paths, t);
    paths.space.index_of(s_label);
    paths.space.index_of(n_label);
    if (paths.config.start == s_label) {
        throw ValidationError("StartIsCenter", "avoiding estimates need a start off the avoided state");
    }
    std::int64_t hits = 0;
    for (const auto& path : paths.paths) {
        if (paths.state_at(path, t) != n_label) continue;
        bool visited = false;
        for (std::size_t e = 0; e < path.jump_times.size() && path.jump_times[e] <= t; ++e) {
            if (path.states[e] == s_label) {
                visited = true;
                break;
            }
        }
        if (!visited) ++hits;
    }
    return binomial_estimate(hits, paths.config.n_paths);
}

}  // namespace symchain::mc
