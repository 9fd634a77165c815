#include "symchain/generator.hpp"

#include <cmath>
#include <string>

namespace symchain {

GeneratorMatrix validate_generator(const Eigen::MatrixXd& entries, const StateSpace& space) {
    const int n = space.size();
    if (entries.rows() != entries.cols()) {
        throw ValidationError("NotSquare", "generator must be square, got " + std::to_string(entries.rows()) + "x" +
                                               std::to_string(entries.cols()));
    }
    if (entries.rows() != n) {
        throw ValidationError("SizeMismatch", "matrix dimension " + std::to_string(entries.rows()) +
                                                  " does not match space size " + std::to_string(n));
    }
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            if (k != j && entries(k, j) < 0.0) {
                throw ValidationError("NegativeOffDiagonal", "q(" + std::to_string(space.label_of(k)) + "," +
                                                                 std::to_string(space.label_of(j)) +
                                                                 ") = " + std::to_string(entries(k, j)));
            }
        }
        if (entries(k, k) > 0.0) {
            throw ValidationError("PositiveDiagonal", "q(" + std::to_string(space.label_of(k)) + "," +
                                                          std::to_string(space.label_of(k)) +
                                                          ") = " + std::to_string(entries(k, k)));
        }
        const double residual = entries.row(k).sum();
        if (std::abs(residual) > kRowSumTol) {
            throw ValidationError("RowSumNonzero", "row " + std::to_string(space.label_of(k)) +
                                                       " sums to " + std::to_string(residual));
        }
    }
    return GeneratorMatrix{space, entries};
}

void BDJumpModel::require_valid() const {
    if (!(birth > 0.0) || !(death > 0.0) || jump < 0.0 || !std::isfinite(birth) || !std::isfinite(death) ||
        !std::isfinite(jump)) {
        throw ValidationError("InvalidRate", "need birth > 0, death > 0, jump >= 0");
    }
}

GeneratorMatrix truncate_bdjump(const BDJumpModel& model, const StateSpace& window) {
    model.require_valid();
    if (window.kind != StateSpace::Kind::LatticeWindow || !(window.lo < 0 && 0 < window.hi)) {
        throw ValidationError("InvalidSpace", "truncation window must satisfy lo < 0 < hi");
    }
    if (window.hi - window.lo < 2) {
        throw ValidationError("WindowTooSmall", "window [" + std::to_string(window.lo) + "," +
                                                    std::to_string(window.hi) + "] has fewer than 3 states");
    }

    const int n = window.size();
    const int origin = window.index_of(0);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (i + 1 < n) q(i, i + 1) += model.birth;
        if (i - 1 >= 0) q(i, i - 1) += model.death;
        if (i != origin) q(i, origin) += model.jump;  // accumulates with the neighbor rate at |label| == 1
        q(i, i) = -(q.row(i).sum() - q(i, i));
    }
    return validate_generator(q, window);
}

}  // namespace symchain
