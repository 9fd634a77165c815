#include "symchain/time_grid.hpp"

#include <algorithm>
#include <string>

namespace symchain {

TimeGrid::TimeGrid(double t_max_, int steps_) : t_max(t_max_), steps(steps_) {
    if (!(t_max > 0.0) || steps < 1) {
        throw ValidationError("InvalidGrid",
                              "need t_max > 0 and steps >= 1, got t_max=" + std::to_string(t_max_) +
                                  " steps=" + std::to_string(steps_));
    }
}

DensityTrace::DensityTrace(const TimeGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.size()) {
        throw ValidationError("InvalidTrace", "trace length " + std::to_string(values.size()) +
                                                  " does not match grid size " + std::to_string(grid.size()));
    }
}

DensityTrace DensityTrace::zeros(const TimeGrid& g) {
    return DensityTrace(g, std::vector<double>(static_cast<std::size_t>(g.size()), 0.0));
}

double DensityTrace::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double DensityTrace::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

DensityTrace cumulative_trapezoid(const DensityTrace& f) {
    DensityTrace out = DensityTrace::zeros(f.grid);
    const double h = f.grid.h();
    for (int j = 1; j < f.grid.size(); ++j) {
        out.values[j] = out.values[j - 1] + 0.5 * h * (f.values[j - 1] + f.values[j]);
    }
    return out;
}

double trapezoid(const DensityTrace& f) {
    return cumulative_trapezoid(f).values.back();
}

}  // namespace symchain
