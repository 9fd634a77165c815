#pragma once

#include <Eigen/Dense>

#include "symchain/state_space.hpp"

namespace symchain {

// Row-sum residual above this is treated as a construction bug, not float
// noise: generators are assembled by exact arithmetic on rate parameters.
inline constexpr double kRowSumTol = 1e-12;

// Conservative rate matrix over an indexed state space. Obtain instances
// through validate_generator / truncate_bdjump so the invariants hold:
// off-diagonals >= 0, diagonals <= 0, every row sums to 0 within 1e-12.
// Treat as immutable after construction.
struct GeneratorMatrix {
    StateSpace space;
    Eigen::MatrixXd rates;

    int size() const { return space.size(); }
    double rate(int from_label, int to_label) const {
        return rates(space.index_of(from_label), space.index_of(to_label));
    }
};

// Checks the generator relations entry by entry; never repairs entries.
// Errors: NegativeOffDiagonal(k,n), PositiveDiagonal(n), RowSumNonzero(k).
GeneratorMatrix validate_generator(const Eigen::MatrixXd& entries, const StateSpace& space);

// Bilateral birth-death process with jumps toward the origin: from n to
// n+1 at the birth rate, n to n-1 at the death rate, and n != 0 to 0 at
// the jump rate. jump == 0 is admitted as the degenerate pure-BD case.
struct BDJumpModel {
    double birth = 0.0;
    double death = 0.0;
    double jump = 0.0;

    void require_valid() const;
    bool symmetric_rates() const { return birth == death; }
};

// Restriction of the lattice chain to a finite window (lo < 0 < hi): the
// outward rate at each boundary state is dropped and the diagonal adjusted
// so rows still sum to 0.
GeneratorMatrix truncate_bdjump(const BDJumpModel& model, const StateSpace& window);

}  // namespace symchain
