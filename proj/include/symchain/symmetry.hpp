#pragma once

#include <optional>
#include <vector>

#include "symchain/generator.hpp"
#include "symchain/transient.hpp"

namespace symchain {

// Positive weights {x_n} witnessing the reflection relation
// q_{N-k,N-n} = (x_n/x_k) q_{k,n}. Weights are defined only up to a common
// factor; we fix the gauge so the leftmost state has weight 1.
struct SymmetryCertificate {
    StateSpace space;
    double center = 0.0;          // N/2 for finite spaces, 0 for windows
    std::vector<double> weights;  // by matrix index

    double weight_at_index(int index) const { return weights[static_cast<std::size_t>(index)]; }
    double weight(int label) const { return weight_at_index(space.index_of(label)); }
    // x_n / x_k
    double ratio(int n_label, int k_label) const { return weight(n_label) / weight(k_label); }

    // Positivity, length, and the ratio identity x_n/x_k = x_{N-k}/x_{N-n}.
    void require_valid(double tol = 1e-9) const;
};

SymmetryCertificate constant_certificate(const StateSpace& space);

struct SymmetryCheck {
    bool pass = false;
    double max_residual = 0.0;
    // Labels of the worst-residual entry (q_{k,n} vs its reflection).
    int worst_from = 0;
    int worst_to = 0;
};

// Generator-level criterion: |q_{N-k,N-n} - (x_n/x_k) q_{k,n}| within
// tol * max(1, |q_{k,n}|) for every pair.
SymmetryCheck verify_generator_symmetry(const GeneratorMatrix& q, const SymmetryCertificate& cert,
                                        double tol = 1e-9);

struct SymmetryDetection {
    enum class Status { Symmetric, StructuralZeroMismatch, InconsistentRatios };

    Status status = Status::Symmetric;
    std::optional<SymmetryCertificate> certificate;
    // Witness of the violated entry pair / constraint, as labels.
    int witness_from = 0;
    int witness_to = 0;
    double witness_residual = 0.0;
    // States the ratio graph never reached; their weight defaults to 1 and
    // is reported rather than guessed.
    std::vector<int> unconstrained;

    bool symmetric() const { return status == Status::Symmetric; }
};

// Builds the ratio graph log x_n - log x_k = log(q_{N-k,N-n} / q_{k,n})
// over pairs with matching nonzero pattern, propagates weights by BFS from
// the leftmost state, then re-verifies every constraint. Rates below
// 1e-14 count as structural zeros.
SymmetryDetection detect_symmetry(const GeneratorMatrix& q, double tol = 1e-9);

struct ProbabilitySymmetryCheck {
    bool pass = false;
    double max_residual = 0.0;
    int worst_step = 0;
    int worst_from = 0;
    int worst_to = 0;
};

// Time-domain counterpart: p_{N-k,N-n}(t) = (x_n/x_k) p_{k,n}(t) at every
// grid point.
ProbabilitySymmetryCheck verify_probability_symmetry(const TransitionMatrixSequence& p,
                                                     const SymmetryCertificate& cert, double tol);

struct Remark1Report {
    bool weights_constant = false;
    double max_weight_deviation = 0.0;
    bool stationary_symmetric = false;
    double max_stationary_deviation = 0.0;

    bool pass() const { return weights_constant && stationary_symmetric; }
};

// Structural consequences of symmetry for an ergodic chain: the weights
// collapse to a constant and the stationary law is symmetric about the
// center.
Remark1Report check_remark1(const GeneratorMatrix& q, const StationaryDistribution& pi,
                            const SymmetryCertificate& cert, double tol = 1e-8);

}  // namespace symchain
