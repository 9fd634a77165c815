#include "symchain/transient.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace symchain {

namespace {

// Largest Poisson mean the linear-space weight recursion can start from
// without exp(-nu) underflowing.
constexpr double kMaxPoissonMean = 700.0;

}  // namespace

DensityTrace TransitionMatrixSequence::trace(int from_label, int to_label) const {
    const int k = space.index_of(from_label);
    const int n = space.index_of(to_label);
    DensityTrace out = DensityTrace::zeros(grid);
    for (int j = 0; j < grid.size(); ++j) {
        out.values[static_cast<std::size_t>(j)] = matrices[static_cast<std::size_t>(j)](k, n);
    }
    return out;
}

TransitionMatrixSequence transition_matrices(const GeneratorMatrix& q, const TimeGrid& grid, double tol) {
    if (grid.steps < 1) {
        throw ValidationError("EmptyGrid", "time grid has no steps");
    }
    if (!(tol > 0.0) || tol > 1e-3) {
        throw ValidationError("InvalidTolerance", "uniformization tol must lie in (0, 1e-3]");
    }

    const int n = q.size();
    const int points = grid.size();
    const double rate_cap = q.rates.diagonal().cwiseAbs().maxCoeff();

    TransitionMatrixSequence seq;
    seq.space = q.space;
    seq.grid = grid;
    seq.tol = tol;
    seq.matrices.assign(static_cast<std::size_t>(points), Eigen::MatrixXd::Zero(n, n));

    if (rate_cap == 0.0) {
        // Zero generator: P(t) = I at every t.
        for (auto& m : seq.matrices) m = Eigen::MatrixXd::Identity(n, n);
        return seq;
    }

    // 5% headroom keeps M = I + Q/L away from a zero diagonal.
    const double uniform_rate = 1.05 * rate_cap;
    if (uniform_rate * grid.t_max > kMaxPoissonMean) {
        throw ValidationError("GridTooLong", "uniformization mean " + std::to_string(uniform_rate * grid.t_max) +
                                                 " exceeds the supported range; shorten t_max or split the grid");
    }
    const Eigen::MatrixXd jump_matrix = Eigen::MatrixXd::Identity(n, n) + q.rates / uniform_rate;

    // Per grid point: current Poisson weight, accumulated mass, active flag.
    std::vector<double> weight(static_cast<std::size_t>(points));
    std::vector<double> mass(static_cast<std::size_t>(points));
    std::vector<char> active(static_cast<std::size_t>(points), 1);
    for (int j = 0; j < points; ++j) {
        weight[static_cast<std::size_t>(j)] = std::exp(-uniform_rate * grid.t(j));
        mass[static_cast<std::size_t>(j)] = 0.0;
    }

    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    int remaining = points;
    for (int m = 0; remaining > 0; ++m) {
        for (int j = 0; j < points; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            if (!active[ju]) continue;
            seq.matrices[ju] += weight[ju] * power;
            mass[ju] += weight[ju];
            weight[ju] *= uniform_rate * grid.t(j) / (m + 1);
            // The second clause terminates tolerances finer than the
            // floating-point mass can resolve: an underflowed weight
            // contributes nothing more.
            if (1.0 - mass[ju] < tol || weight[ju] == 0.0) {
                active[ju] = 0;
                --remaining;
            }
        }
        if (remaining > 0) power *= jump_matrix;
    }
    return seq;
}

namespace {

std::vector<std::vector<int>> adjacency(const GeneratorMatrix& q, bool reversed) {
    const int n = q.size();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && q.rates(i, j) > 0.0) {
                if (reversed) {
                    adj[static_cast<std::size_t>(j)].push_back(i);
                } else {
                    adj[static_cast<std::size_t>(i)].push_back(j);
                }
            }
        }
    }
    return adj;
}

void dfs_order(const std::vector<std::vector<int>>& adj, int start, std::vector<char>& seen, std::vector<int>& order) {
    // Iterative post-order DFS.
    std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        const auto& out = adj[static_cast<std::size_t>(node)];
        if (next < out.size()) {
            const int child = out[next++];
            if (!seen[static_cast<std::size_t>(child)]) {
                seen[static_cast<std::size_t>(child)] = 1;
                stack.emplace_back(child, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
}

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(const GeneratorMatrix& q) {
    // Kosaraju: post-order on the forward graph, then sweeps on the
    // reverse graph in reverse finishing order.
    const int n = q.size();
    const auto fwd = adjacency(q, false);
    const auto rev = adjacency(q, true);

    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (!seen[static_cast<std::size_t>(i)]) dfs_order(fwd, i, seen, order);
    }

    std::fill(seen.begin(), seen.end(), 0);
    std::vector<std::vector<int>> components;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (seen[static_cast<std::size_t>(*it)]) continue;
        std::vector<int> members;
        dfs_order(rev, *it, seen, members);
        for (auto& m : members) m = q.space.label_of(m);
        std::sort(members.begin(), members.end());
        components.push_back(std::move(members));
    }
    return components;
}

bool is_irreducible(const GeneratorMatrix& q) {
    return strongly_connected_components(q).size() == 1;
}

namespace {

void require_irreducible(const GeneratorMatrix& q) {
    const auto components = strongly_connected_components(q);
    if (components.size() > 1) {
        std::string detail = "chain splits into " + std::to_string(components.size()) + " components:";
        for (const auto& comp : components) {
            detail += " {";
            for (std::size_t i = 0; i < comp.size(); ++i) {
                if (i > 0) detail += ",";
                detail += std::to_string(comp[i]);
            }
            detail += "}";
        }
        throw ValidationError("Reducible", detail);
    }
}

}  // namespace

StationaryDistribution stationary(const GeneratorMatrix& q) {
    require_irreducible(q);
    const int n = q.size();
    Eigen::MatrixXd system = q.rates.transpose();
    system.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd pi = system.partialPivLu().solve(rhs);
    // Irreducibility makes the solution a strictly positive distribution;
    // clamp only the round-off fuzz.
    for (int i = 0; i < n; ++i) {
        if (pi(i) < 0.0 && pi(i) > -1e-12) pi(i) = 0.0;
    }
    return StationaryDistribution{q.space, pi};
}

Eigen::MatrixXd deviation_matrix(const GeneratorMatrix& q, const StationaryDistribution& pi) {
    require_irreducible(q);
    const int n = q.size();
    const Eigen::MatrixXd ones_pi = Eigen::VectorXd::Ones(n) * pi.probs.transpose();
    return (ones_pi - q.rates).partialPivLu().solve(Eigen::MatrixXd::Identity(n, n)) - ones_pi;
}

GeneratorMatrix reversed_chain(const GeneratorMatrix& q, const StationaryDistribution& pi) {
    const int n = q.size();
    for (int i = 0; i < n; ++i) {
        if (!(pi.probs(i) > 0.0)) {
            throw ValidationError("ZeroStationaryMass", "pi(" + std::to_string(q.space.label_of(i)) + ") = " +
                                                            std::to_string(pi.probs(i)));
        }
    }
    Eigen::MatrixXd rev(n, n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            rev(k, j) = q.rates(j, k) * pi.probs(j) / pi.probs(k);
        }
        // Re-close the diagonal: pi Q = 0 makes it equal q_{k,k} up to
        // rounding, but the row must sum to 0 at validation precision.
        rev(k, k) = 0.0;
        rev(k, k) = -rev.row(k).sum();
    }
    return validate_generator(rev, q.space);
}

}  // namespace symchain
