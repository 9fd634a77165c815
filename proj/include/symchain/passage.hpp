#pragma once

#include <optional>
#include <vector>

#include "symchain/symmetry.hpp"

namespace symchain {

// First-passage setting for a chain with a central state s: the state
// count is odd (N = 2s), no rates jump across s, s exchanges probability
// with both sides, and each side is irreducible on its own.
struct PassageProblem {
    GeneratorMatrix q;
    int center_label = 0;
    int center_index = 0;
    std::optional<SymmetryCertificate> cert;

    bool below_center(int label) const { return label < center_label; }
    bool above_center(int label) const { return label > center_label; }
};

// Errors: OddN, CrossJump(i,j), NoFluxAtS, ReducibleSubchain.
PassageProblem build_passage_problem(const GeneratorMatrix& q,
                                     std::optional<SymmetryCertificate> cert = std::nullopt);

// Entrance fluxes at s: upward sums p_{k,i}(t) q_{i,s} over i < s,
// downward sums p_{k,j}(t) q_{j,s} over j > s.
struct CurrentPair {
    DensityTrace upward;
    DensityTrace downward;
};
CurrentPair currents(const PassageProblem& prob, const TransitionMatrixSequence& p, int from_label);

// First-passage density from `start` to s via the renewal-type Volterra
// equation g = h_start - g * h_{s,s}, discretized with the product
// trapezoidal rule (O(h^2)) and marched forward in t.
DensityTrace fpt_density_volterra(const PassageProblem& prob, const TransitionMatrixSequence& p, int start_label);

// Symmetric shortcut: the density is a pointwise difference of the two
// currents; no integral equation is solved. Requires a certificate.
DensityTrace fpt_density_symmetric(const PassageProblem& prob, const TransitionMatrixSequence& p, int start_label);

// s-avoiding transition probabilities p^<s>_{k,n}(t) for every n != s,
// by renewal subtraction with the supplied first-passage density from k.
// Opposite-side entries are computed, not short-circuited to zero.
struct AvoidingRow {
    std::vector<int> labels;           // every state except s, matrix order
    std::vector<DensityTrace> traces;  // parallel to labels

    const DensityTrace& at(int label) const;
};
AvoidingRow avoiding_probabilities_renewal(const PassageProblem& prob, const TransitionMatrixSequence& p,
                                           const DensityTrace& fpt_from_k, int from_label);

// Both closed expressions for p^<s>_{k,n}(t) on a symmetric chain; they
// are exact algebra on P entries and must agree, or the certificate is
// wrong upstream (FormsDisagree, a NumericalError).
DensityTrace avoiding_probabilities_symmetric(const PassageProblem& prob, const TransitionMatrixSequence& p,
                                              int from_label, int to_label, double forms_tol = 1e-10);

// Reflection of a first-passage density: from the density started at j,
// the density started at 2s-j, scaled by x_{2s-j}/x_s.
DensityTrace fpt_reflection(const SymmetryCertificate& cert, const DensityTrace& g, int source_label);
DensityTrace fpt_reflection(const PassageProblem& prob, const DensityTrace& g, int source_label);

}  // namespace symchain
