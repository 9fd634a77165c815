#pragma once

#include <vector>

#include "symchain/errors.hpp"

namespace symchain {

// Uniform grid {0, h, 2h, ..., t_max}, h = t_max/steps.
struct TimeGrid {
    double t_max = 0.0;
    int steps = 0;

    TimeGrid() = default;
    TimeGrid(double t_max, int steps);

    double h() const { return t_max / steps; }
    int size() const { return steps + 1; }
    // Exact at both endpoints, monotone in between.
    double t(int j) const { return t_max * j / steps; }

    bool operator==(const TimeGrid&) const = default;
};

inline void require_same_grid(const TimeGrid& a, const TimeGrid& b) {
    if (!(a == b)) {
        throw ValidationError("GridMismatch", "traces live on different time grids");
    }
}

// A function of t sampled on a TimeGrid: transition probability, current,
// first-passage density, ...
struct DensityTrace {
    TimeGrid grid;
    std::vector<double> values;

    DensityTrace() = default;
    DensityTrace(const TimeGrid& g, std::vector<double> v);
    static DensityTrace zeros(const TimeGrid& g);

    double min_value() const;
    double max_value() const;
};

// Cumulative integral by the trapezoidal rule; result[0] = 0.
DensityTrace cumulative_trapezoid(const DensityTrace& f);

// Total integral over the grid by the trapezoidal rule.
double trapezoid(const DensityTrace& f);

}  // namespace symchain
