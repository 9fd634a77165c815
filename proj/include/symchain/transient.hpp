#pragma once

#include <vector>

#include <Eigen/Dense>

#include "symchain/generator.hpp"
#include "symchain/time_grid.hpp"

namespace symchain {

// Row-stochastic P(t) = e^{Qt} sampled on a TimeGrid. `tol` records the
// entrywise truncation bound the sequence was built with.
struct TransitionMatrixSequence {
    StateSpace space;
    TimeGrid grid;
    std::vector<Eigen::MatrixXd> matrices;
    double tol = 0.0;

    const Eigen::MatrixXd& at(int step) const { return matrices[static_cast<std::size_t>(step)]; }
    double prob(int step, int from_label, int to_label) const {
        return at(step)(space.index_of(from_label), space.index_of(to_label));
    }
    // p_{k,n}(t) over every grid point, as a trace.
    DensityTrace trace(int from_label, int to_label) const;
};

// Transient probabilities by uniformization: with L >= max |q_nn| and
// M = I + Q/L, P(t) = sum_m Poisson(m; L t) M^m. M is row-stochastic, so
// truncating once the remaining Poisson tail mass at a grid point drops
// below tol bounds the entrywise error by tol there.
TransitionMatrixSequence transition_matrices(const GeneratorMatrix& q, const TimeGrid& grid, double tol = 1e-10);

struct StationaryDistribution {
    StateSpace space;
    Eigen::VectorXd probs;

    double prob(int label) const { return probs(space.index_of(label)); }
};

// Strongly connected components of the positive off-diagonal rate graph,
// each a sorted list of state labels.
std::vector<std::vector<int>> strongly_connected_components(const GeneratorMatrix& q);

bool is_irreducible(const GeneratorMatrix& q);

// Unique solution of pi Q = 0, sum pi = 1 for irreducible Q: one equation
// of the transposed system is replaced by the normalization constraint.
StationaryDistribution stationary(const GeneratorMatrix& q);

// Deviation matrix D with entries integral_0^inf [p_{k,n}(t) - pi_n] dt,
// computed algebraically: D = (Pi - Q)^{-1} - Pi solves Q D = D Q = Pi - I
// with pi D = 0.
Eigen::MatrixXd deviation_matrix(const GeneratorMatrix& q, const StationaryDistribution& pi);

// Time-reversed chain q*_{k,n} = (pi_n / pi_k) q_{n,k}.
GeneratorMatrix reversed_chain(const GeneratorMatrix& q, const StationaryDistribution& pi);

}  // namespace symchain
