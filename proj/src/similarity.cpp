#include "symchain/similarity.hpp"

#include <cmath>
#include <string>

namespace symchain {

void SimilarityWeights::require_positive() const {
    if (static_cast<int>(beta.size()) != space.size()) {
        throw ValidationError("SizeMismatch", "beta length does not match the state space");
    }
    for (double b : beta) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw ValidationError("InvalidBeta", "beta must be strictly positive");
        }
    }
}

SimilarityResult apply_similarity(const GeneratorMatrix& q, const SimilarityWeights& beta, BoundaryPolicy policy) {
    beta.require_positive();
    if (!(beta.space == q.space)) {
        throw ValidationError("SizeMismatch", "beta and generator live on different spaces");
    }
    const int n = q.size();
    const bool exempt_edges = policy == BoundaryPolicy::ExemptWindowEdges;

    SimilarityResult result;
    Eigen::MatrixXd transformed(n, n);
    for (int k = 0; k < n; ++k) {
        const bool edge = exempt_edges && (k == 0 || k == n - 1);
        if (!edge) {
            double residual = 0.0;
            for (int j = 0; j < n; ++j) residual += q.rates(k, j) * beta.at_index(j);
            if (std::abs(residual) > kHarmonicTol * std::max(1.0, beta.at_index(k))) {
                throw ValidationError("NonHarmonic", "row " + std::to_string(q.space.label_of(k)) +
                                                         " has harmonic residual " + std::to_string(residual));
            }
        }
        for (int j = 0; j < n; ++j) {
            transformed(k, j) = k == j ? q.rates(k, k) : beta.at_index(j) / beta.at_index(k) * q.rates(k, j);
        }
        const double off_sum = transformed.row(k).sum() - transformed(k, k);
        if (std::abs(off_sum + q.rates(k, k)) <= kRowSumTol) {
            // The diagonal carries over untouched (the k = n case of the
            // transform has ratio 1).
            transformed(k, k) = q.rates(k, k);
        } else {
            // Re-close the row. For exempted edge rows this is the stated
            // policy; elsewhere the shift stays inside the harmonic
            // tolerance checked above.
            transformed(k, k) = -off_sum;
            if (edge) result.adjusted_rows.push_back(q.space.label_of(k));
        }
    }
    result.transformed = validate_generator(transformed, q.space);
    return result;
}

SymmetryCertificate transformed_certificate(const SymmetryCertificate& cert, const SimilarityWeights& beta) {
    cert.require_valid();
    beta.require_positive();
    if (!(beta.space == cert.space)) {
        throw ValidationError("SizeMismatch", "beta and certificate live on different spaces");
    }
    const int n = cert.space.size();
    SymmetryCertificate out;
    out.space = cert.space;
    out.center = cert.center;
    out.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int ri = cert.space.reflect_index(i);
        out.weights[static_cast<std::size_t>(i)] =
            beta.at_index(ri) / beta.at_index(i) * cert.weight_at_index(i);
    }
    const double gauge = out.weights[0];
    for (auto& w : out.weights) w /= gauge;
    return out;
}

Theorem5Result verify_theorem5(const GeneratorMatrix& q, const SymmetryCertificate& cert,
                               const SimilarityWeights& beta, double tol, BoundaryPolicy policy) {
    SimilarityResult applied = apply_similarity(q, beta, policy);
    SymmetryCertificate predicted = transformed_certificate(cert, beta);
    const SymmetryCheck check = verify_generator_symmetry(applied.transformed, predicted, tol);
    if (!check.pass) {
        throw NumericalError("SimilaritySymmetryLost",
                             "transformed chain failed its predicted certificate with residual " +
                                 std::to_string(check.max_residual) + " at (" + std::to_string(check.worst_from) +
                                 "," + std::to_string(check.worst_to) + ")");
    }
    return Theorem5Result{std::move(applied.transformed), std::move(predicted), check};
}

double Example2Family::beta(int n) const {
    return 1.0 + eta * std::pow(death / birth, n);
}

SimilarityWeights Example2Family::realize(const StateSpace& window) const {
    if (window.kind != StateSpace::Kind::LatticeWindow || !window.reflectable()) {
        throw ValidationError("InvalidSpace", "realize expects a symmetric lattice window");
    }
    SimilarityWeights weights;
    weights.space = window;
    weights.beta.resize(static_cast<std::size_t>(window.size()));
    for (int i = 0; i < window.size(); ++i) {
        weights.beta[static_cast<std::size_t>(i)] = beta(window.label_of(i));
    }
    weights.require_positive();
    return weights;
}

Example2Family example2_family(double birth, double death, double eta) {
    if (!(birth > 0.0) || !(death > 0.0)) {
        throw ValidationError("InvalidRate", "family needs positive birth and death rates");
    }
    if (eta < 0.0) {
        throw ValidationError("InvalidRate", "eta must be nonnegative");
    }
    return Example2Family{birth, death, eta};
}

}  // namespace symchain
