#include "symchain/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace symchain {

// Rates below this are structural zeros for the purposes of the ratio
// graph: the reflection relation forces q_{k,n} = 0 <=> q_{N-k,N-n} = 0.
constexpr double kStructuralZero = 1e-14;

void SymmetryCertificate::require_valid(double tol) const {
    const int n = space.size();
    if (static_cast<int>(weights.size()) != n) {
        throw ValidationError("InvalidCertificate", "weight count " + std::to_string(weights.size()) +
                                                        " does not match space size " + std::to_string(n));
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw ValidationError("InvalidCertificate", "weights must be strictly positive");
        }
    }
    if (!space.reflectable()) {
        throw ValidationError("AsymmetricWindow", "certificate requires a reflectable space");
    }
    // x_n/x_k = x_{N-k}/x_{N-n}  <=>  x_n * x_{N-n} constant in n.
    const double ref = weights[0] * weights[static_cast<std::size_t>(space.reflect_index(0))];
    for (int i = 1; i < n; ++i) {
        const double prod = weights[static_cast<std::size_t>(i)] *
                            weights[static_cast<std::size_t>(space.reflect_index(i))];
        if (std::abs(prod - ref) > tol * std::max(1.0, std::abs(ref))) {
            throw ValidationError("InvalidCertificate",
                                  "ratio identity violated at state " + std::to_string(space.label_of(i)));
        }
    }
}

SymmetryCertificate constant_certificate(const StateSpace& space) {
    if (!space.reflectable()) {
        throw ValidationError("AsymmetricWindow", "certificate requires a reflectable space");
    }
    return SymmetryCertificate{space, space.center_label(),
                               std::vector<double>(static_cast<std::size_t>(space.size()), 1.0)};
}

SymmetryCheck verify_generator_symmetry(const GeneratorMatrix& q, const SymmetryCertificate& cert, double tol) {
    cert.require_valid();
    if (!(q.space == cert.space)) {
        throw ValidationError("SizeMismatch", "certificate and generator live on different spaces");
    }
    const int n = q.size();
    SymmetryCheck check;
    check.pass = true;
    for (int k = 0; k < n; ++k) {
        const int rk = q.space.reflect_index(k);
        for (int j = 0; j < n; ++j) {
            const int rj = q.space.reflect_index(j);
            const double expected = cert.weight_at_index(j) / cert.weight_at_index(k) * q.rates(k, j);
            const double residual = std::abs(q.rates(rk, rj) - expected) / std::max(1.0, std::abs(q.rates(k, j)));
            if (residual > check.max_residual) {
                check.max_residual = residual;
                check.worst_from = q.space.label_of(k);
                check.worst_to = q.space.label_of(j);
            }
        }
    }
    check.pass = check.max_residual <= tol;
    return check;
}

SymmetryDetection detect_symmetry(const GeneratorMatrix& q, double tol) {
    if (!q.space.reflectable()) {
        throw ValidationError("AsymmetricWindow", "detection requires a reflectable space");
    }
    const int n = q.size();
    SymmetryDetection result;

    // Structural-zero pattern must be reflection-invariant, diagonal
    // included (the diagonal relation is q_{N-k,N-k} = q_{k,k}).
    for (int k = 0; k < n; ++k) {
        const int rk = q.space.reflect_index(k);
        for (int j = 0; j < n; ++j) {
            const int rj = q.space.reflect_index(j);
            const bool zero = std::abs(q.rates(k, j)) < kStructuralZero;
            const bool zero_reflected = std::abs(q.rates(rk, rj)) < kStructuralZero;
            if (zero != zero_reflected) {
                result.status = SymmetryDetection::Status::StructuralZeroMismatch;
                result.witness_from = q.space.label_of(k);
                result.witness_to = q.space.label_of(j);
                result.witness_residual = std::abs(q.rates(rk, rj) - q.rates(k, j));
                return result;
            }
        }
    }

    // Ratio graph: edge k -- j with log x_j - log x_k fixed by the data.
    struct Edge {
        int other;
        double log_gap;  // log x_other - log x_this
    };
    std::vector<std::vector<Edge>> edges(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int rk = q.space.reflect_index(k);
        for (int j = 0; j < n; ++j) {
            if (j == k) continue;
            const int rj = q.space.reflect_index(j);
            if (std::abs(q.rates(k, j)) < kStructuralZero) continue;
            const double gap = std::log(q.rates(rk, rj)) - std::log(q.rates(k, j));
            edges[static_cast<std::size_t>(k)].push_back({j, gap});
            edges[static_cast<std::size_t>(j)].push_back({k, -gap});
        }
    }

    // Propagate from the leftmost state first, then root every other
    // component at weight 1: those weights are unconstrained relative to
    // the main component and get reported, not guessed.
    std::vector<double> log_weight(static_cast<std::size_t>(n), 0.0);
    std::vector<char> reached(static_cast<std::size_t>(n), 0);
    for (int root = 0; root < n; ++root) {
        if (reached[static_cast<std::size_t>(root)]) continue;
        reached[static_cast<std::size_t>(root)] = 1;
        std::deque<int> queue{root};
        std::vector<int> component{root};
        while (!queue.empty()) {
            const int k = queue.front();
            queue.pop_front();
            for (const auto& e : edges[static_cast<std::size_t>(k)]) {
                if (!reached[static_cast<std::size_t>(e.other)]) {
                    reached[static_cast<std::size_t>(e.other)] = 1;
                    log_weight[static_cast<std::size_t>(e.other)] =
                        log_weight[static_cast<std::size_t>(k)] + e.log_gap;
                    queue.push_back(e.other);
                    component.push_back(e.other);
                }
            }
        }
        if (root != 0) {
            for (int member : component) result.unconstrained.push_back(q.space.label_of(member));
        }
    }
    std::sort(result.unconstrained.begin(), result.unconstrained.end());

    // Every constraint must close: cycle consistency in log space.
    for (int k = 0; k < n; ++k) {
        for (const auto& e : edges[static_cast<std::size_t>(k)]) {
            const double residual = std::abs(log_weight[static_cast<std::size_t>(e.other)] -
                                             log_weight[static_cast<std::size_t>(k)] - e.log_gap);
            if (residual > tol) {
                result.status = SymmetryDetection::Status::InconsistentRatios;
                result.witness_from = q.space.label_of(k);
                result.witness_to = q.space.label_of(e.other);
                result.witness_residual = residual;
                return result;
            }
        }
    }

    SymmetryCertificate cert;
    cert.space = q.space;
    cert.center = q.space.center_label();
    cert.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        cert.weights[static_cast<std::size_t>(i)] = std::exp(log_weight[static_cast<std::size_t>(i)] - log_weight[0]);
    }

    // The ratio graph only sees pairs with nonzero rates; the full
    // entrywise criterion is the authority. Checked inline because the
    // certificate's cross-component ratios are gauge choices, not data,
    // when the graph is disconnected.
    SymmetryCheck check;
    for (int k = 0; k < n; ++k) {
        const int rk = q.space.reflect_index(k);
        for (int j = 0; j < n; ++j) {
            const int rj = q.space.reflect_index(j);
            const double expected = cert.weights[static_cast<std::size_t>(j)] /
                                    cert.weights[static_cast<std::size_t>(k)] * q.rates(k, j);
            const double residual = std::abs(q.rates(rk, rj) - expected) / std::max(1.0, std::abs(q.rates(k, j)));
            if (residual > check.max_residual) {
                check.max_residual = residual;
                check.worst_from = q.space.label_of(k);
                check.worst_to = q.space.label_of(j);
            }
        }
    }
    check.pass = check.max_residual <= std::max(tol, 1e-9);
    if (!check.pass) {
        result.status = SymmetryDetection::Status::InconsistentRatios;
        result.witness_from = check.worst_from;
        result.witness_to = check.worst_to;
        result.witness_residual = check.max_residual;
        return result;
    }
    result.status = SymmetryDetection::Status::Symmetric;
    result.certificate = std::move(cert);
    return result;
}

ProbabilitySymmetryCheck verify_probability_symmetry(const TransitionMatrixSequence& p,
                                                     const SymmetryCertificate& cert, double tol) {
    cert.require_valid();
    if (!(p.space == cert.space)) {
        throw ValidationError("SizeMismatch", "certificate and transition sequence live on different spaces");
    }
    const int n = p.space.size();
    ProbabilitySymmetryCheck check;
    for (int step = 0; step < p.grid.size(); ++step) {
        const Eigen::MatrixXd& mat = p.at(step);
        for (int k = 0; k < n; ++k) {
            const int rk = p.space.reflect_index(k);
            for (int j = 0; j < n; ++j) {
                const int rj = p.space.reflect_index(j);
                const double expected = cert.weight_at_index(j) / cert.weight_at_index(k) * mat(k, j);
                const double residual = std::abs(mat(rk, rj) - expected);
                if (residual > check.max_residual) {
                    check.max_residual = residual;
                    check.worst_step = step;
                    check.worst_from = p.space.label_of(k);
                    check.worst_to = p.space.label_of(j);
                }
            }
        }
    }
    check.pass = check.max_residual <= tol;
    return check;
}

Remark1Report check_remark1(const GeneratorMatrix& q, const StationaryDistribution& pi,
                            const SymmetryCertificate& cert, double tol) {
    cert.require_valid();
    if (!is_irreducible(q)) {
        throw ValidationError("Reducible", "Remark 1 assumes an ergodic chain");
    }
    Remark1Report report;
    const int n = q.size();
    const double gauge = cert.weights[0];
    for (int i = 0; i < n; ++i) {
        report.max_weight_deviation =
            std::max(report.max_weight_deviation, std::abs(cert.weights[static_cast<std::size_t>(i)] / gauge - 1.0));
    }
    for (int i = 0; i < n; ++i) {
        const int ri = q.space.reflect_index(i);
        report.max_stationary_deviation =
            std::max(report.max_stationary_deviation, std::abs(pi.probs(i) - pi.probs(ri)));
    }
    report.weights_constant = report.max_weight_deviation <= tol;
    report.stationary_symmetric = report.max_stationary_deviation <= tol;
    return report;
}

}  // namespace symchain
