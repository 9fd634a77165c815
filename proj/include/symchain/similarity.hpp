#pragma once

#include <vector>

#include "symchain/symmetry.hpp"

namespace symchain {

// Per-component residual allowed on the harmonic condition Q beta = 0.
// The condition is what keeps the transformed matrix a generator: row k of
// the transform sums to (Q beta)_k / beta_k.
inline constexpr double kHarmonicTol = 1e-10;

// Positive sequence defining the strong-similarity transform
// q~_{k,n} = (beta_n / beta_k) q_{k,n}.
struct SimilarityWeights {
    StateSpace space;
    std::vector<double> beta;  // by matrix index

    double at_index(int index) const { return beta[static_cast<std::size_t>(index)]; }
    double value(int label) const { return at_index(space.index_of(label)); }
    void require_positive() const;
};

// On truncated windows the infinite-chain beta cannot be harmonic at the
// edge rows; ExemptWindowEdges skips the check there and re-closes those
// rows by diagonal adjustment, reporting them.
enum class BoundaryPolicy { Strict, ExemptWindowEdges };

struct SimilarityResult {
    GeneratorMatrix transformed;
    std::vector<int> adjusted_rows;  // labels of re-closed boundary rows
};

// Errors: NonHarmonic(k, residual). Diagonal entries carry over unchanged.
SimilarityResult apply_similarity(const GeneratorMatrix& q, const SimilarityWeights& beta,
                                  BoundaryPolicy policy = BoundaryPolicy::Strict);

// Certificate of the transformed chain: x~_n = (beta_{N-n} / beta_n) x_n,
// re-normalized to weight 1 at the leftmost state.
SymmetryCertificate transformed_certificate(const SymmetryCertificate& cert, const SimilarityWeights& beta);

struct Theorem5Result {
    GeneratorMatrix transformed;
    SymmetryCertificate certificate;
    SymmetryCheck check;
};

// Applies the transform and verifies that the predicted certificate passes
// the generator-level symmetry check. A failure here falsifies a theorem,
// so it surfaces as a NumericalError rather than a result.
Theorem5Result verify_theorem5(const GeneratorMatrix& q, const SymmetryCertificate& cert,
                               const SimilarityWeights& beta, double tol = 1e-10,
                               BoundaryPolicy policy = BoundaryPolicy::Strict);

// Family of chains strongly similar to the constant-rate bilateral
// birth-death process. beta solves the harmonic recurrence
// birth * b_{n+1} + death * b_{n-1} = (birth + death) * b_n, whose
// non-constant solution is (death/birth)^n; hence
// beta_n = 1 + eta (death/birth)^n.
struct Example2Family {
    double birth = 0.0;
    double death = 0.0;
    double eta = 0.0;

    double beta(int n) const;
    double birth_rate(int n) const { return beta(n + 1) / beta(n) * birth; }
    double death_rate(int n) const { return beta(n - 1) / beta(n) * death; }

    // beta over a symmetric window, ready for apply_similarity with
    // ExemptWindowEdges.
    SimilarityWeights realize(const StateSpace& window) const;
};

Example2Family example2_family(double birth, double death, double eta);

}  // namespace symchain
