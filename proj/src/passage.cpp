#include "symchain/passage.hpp"

#include <cmath>
#include <string>

namespace symchain {

namespace {

// Strong connectivity of the positive-rate graph restricted to `members`.
bool subchain_irreducible(const GeneratorMatrix& q, const std::vector<int>& members) {
    if (members.size() <= 1) return true;
    Eigen::MatrixXd sub(members.size(), members.size());
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = 0; b < members.size(); ++b) {
            sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = q.rates(members[a], members[b]);
        }
        sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = 0.0;
        sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = -sub.row(static_cast<Eigen::Index>(a)).sum();
    }
    GeneratorMatrix chain{StateSpace::finite(static_cast<int>(members.size()) - 1), sub};
    return is_irreducible(chain);
}

}  // namespace

PassageProblem build_passage_problem(const GeneratorMatrix& q, std::optional<SymmetryCertificate> cert) {
    if (!q.space.reflectable()) {
        throw ValidationError("AsymmetricWindow", "passage problems require a reflectable space");
    }
    const int n = q.size();
    if (n % 2 == 0) {
        throw ValidationError("OddN", "central state needs an odd state count (N = 2s), got " + std::to_string(n) +
                                          " states");
    }
    const int center = (n - 1) / 2;

    // No rates may jump across the center, in either direction.
    for (int i = 0; i < center; ++i) {
        for (int j = center + 1; j < n; ++j) {
            if (q.rates(i, j) != 0.0 || q.rates(j, i) != 0.0) {
                throw ValidationError("CrossJump", "states " + std::to_string(q.space.label_of(i)) + " and " +
                                                       std::to_string(q.space.label_of(j)) +
                                                       " exchange rate without crossing the center");
            }
        }
    }

    double into_from_below = 0.0, into_from_above = 0.0, out_below = 0.0, out_above = 0.0;
    for (int i = 0; i < center; ++i) {
        into_from_below += q.rates(i, center);
        out_below += q.rates(center, i);
    }
    for (int j = center + 1; j < n; ++j) {
        into_from_above += q.rates(j, center);
        out_above += q.rates(center, j);
    }
    if (!(into_from_below > 0.0)) throw ValidationError("NoFluxAtS", "no rate enters the center from below");
    if (!(into_from_above > 0.0)) throw ValidationError("NoFluxAtS", "no rate enters the center from above");
    if (!(out_below > 0.0)) throw ValidationError("NoFluxAtS", "no rate leaves the center downward");
    if (!(out_above > 0.0)) throw ValidationError("NoFluxAtS", "no rate leaves the center upward");

    std::vector<int> below, above;
    for (int i = 0; i < center; ++i) below.push_back(i);
    for (int j = center + 1; j < n; ++j) above.push_back(j);
    if (!subchain_irreducible(q, below)) {
        throw ValidationError("ReducibleSubchain", "the subchain below the center is not irreducible");
    }
    if (!subchain_irreducible(q, above)) {
        throw ValidationError("ReducibleSubchain", "the subchain above the center is not irreducible");
    }

    if (cert) {
        cert->require_valid();
        if (!(cert->space == q.space)) {
            throw ValidationError("SizeMismatch", "certificate space does not match the chain");
        }
    }
    return PassageProblem{q, q.space.label_of(center), center, std::move(cert)};
}

CurrentPair currents(const PassageProblem& prob, const TransitionMatrixSequence& p, int from_label) {
    if (!(p.space == prob.q.space)) {
        throw ValidationError("GridMismatch", "transition sequence does not match the problem's space");
    }
    const int k = prob.q.space.index_of(from_label);
    const int center = prob.center_index;
    const int n = prob.q.size();

    CurrentPair out{DensityTrace::zeros(p.grid), DensityTrace::zeros(p.grid)};
    for (int step = 0; step < p.grid.size(); ++step) {
        const Eigen::MatrixXd& mat = p.at(step);
        double up = 0.0, down = 0.0;
        for (int i = 0; i < center; ++i) up += mat(k, i) * prob.q.rates(i, center);
        for (int j = center + 1; j < n; ++j) down += mat(k, j) * prob.q.rates(j, center);
        out.upward.values[static_cast<std::size_t>(step)] = up;
        out.downward.values[static_cast<std::size_t>(step)] = down;
    }
    return out;
}

namespace {

// Solves g(t) = f(t) - int_0^t g(u) kernel(t-u) du on the shared grid by
// the product trapezoidal rule, marching forward; g(0) = f(0).
DensityTrace solve_volterra(const DensityTrace& f, const DensityTrace& kernel) {
    require_same_grid(f.grid, kernel.grid);
    const double h = f.grid.h();
    const int points = f.grid.size();
    DensityTrace g = DensityTrace::zeros(f.grid);
    g.values[0] = f.values[0];
    const double diag = 1.0 + 0.5 * h * kernel.values[0];
    for (int m = 1; m < points; ++m) {
        double conv = 0.5 * g.values[0] * kernel.values[static_cast<std::size_t>(m)];
        for (int l = 1; l < m; ++l) {
            conv += g.values[static_cast<std::size_t>(l)] * kernel.values[static_cast<std::size_t>(m - l)];
        }
        g.values[static_cast<std::size_t>(m)] = (f.values[static_cast<std::size_t>(m)] - h * conv) / diag;
    }
    return g;
}

// Trapezoidal convolution (g * f)(t_m) with f(0) weighted half.
DensityTrace convolve(const DensityTrace& g, const DensityTrace& f) {
    require_same_grid(g.grid, f.grid);
    const double h = g.grid.h();
    const int points = g.grid.size();
    DensityTrace out = DensityTrace::zeros(g.grid);
    for (int m = 1; m < points; ++m) {
        double acc = 0.5 * (g.values[0] * f.values[static_cast<std::size_t>(m)] +
                            g.values[static_cast<std::size_t>(m)] * f.values[0]);
        for (int l = 1; l < m; ++l) {
            acc += g.values[static_cast<std::size_t>(l)] * f.values[static_cast<std::size_t>(m - l)];
        }
        out.values[static_cast<std::size_t>(m)] = h * acc;
    }
    return out;
}

}  // namespace

DensityTrace fpt_density_volterra(const PassageProblem& prob, const TransitionMatrixSequence& p, int start_label) {
    if (start_label == prob.center_label) {
        throw ValidationError("StartIsCenter", "first-passage start must differ from the central state");
    }
    const CurrentPair from_start = currents(prob, p, start_label);
    const CurrentPair at_center = currents(prob, p, prob.center_label);
    if (prob.below_center(start_label)) {
        return solve_volterra(from_start.upward, at_center.upward);
    }
    return solve_volterra(from_start.downward, at_center.downward);
}

DensityTrace fpt_density_symmetric(const PassageProblem& prob, const TransitionMatrixSequence& p, int start_label) {
    if (!prob.cert) {
        throw ValidationError("NoCertificate", "the symmetric shortcut needs a symmetry certificate");
    }
    if (start_label == prob.center_label) {
        throw ValidationError("StartIsCenter", "first-passage start must differ from the central state");
    }
    const CurrentPair pair = currents(prob, p, start_label);
    DensityTrace g = DensityTrace::zeros(p.grid);
    const bool below = prob.below_center(start_label);
    for (int j = 0; j < p.grid.size(); ++j) {
        const auto ju = static_cast<std::size_t>(j);
        g.values[ju] = below ? pair.upward.values[ju] - pair.downward.values[ju]
                             : pair.downward.values[ju] - pair.upward.values[ju];
    }
    return g;
}

const DensityTrace& AvoidingRow::at(int label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return traces[i];
    }
    throw ValidationError("StateOutOfRange", "no avoiding trace for state " + std::to_string(label));
}

AvoidingRow avoiding_probabilities_renewal(const PassageProblem& prob, const TransitionMatrixSequence& p,
                                           const DensityTrace& fpt_from_k, int from_label) {
    if (from_label == prob.center_label) {
        throw ValidationError("StartIsCenter", "avoiding probabilities need a start off the center");
    }
    require_same_grid(p.grid, fpt_from_k.grid);
    AvoidingRow row;
    for (int idx = 0; idx < prob.q.size(); ++idx) {
        if (idx == prob.center_index) continue;
        const int n_label = prob.q.space.label_of(idx);
        const DensityTrace through_center = convolve(fpt_from_k, p.trace(prob.center_label, n_label));
        DensityTrace trace = p.trace(from_label, n_label);
        for (int j = 0; j < p.grid.size(); ++j) {
            trace.values[static_cast<std::size_t>(j)] -= through_center.values[static_cast<std::size_t>(j)];
        }
        row.labels.push_back(n_label);
        row.traces.push_back(std::move(trace));
    }
    return row;
}

DensityTrace avoiding_probabilities_symmetric(const PassageProblem& prob, const TransitionMatrixSequence& p,
                                              int from_label, int to_label, double forms_tol) {
    if (!prob.cert) {
        throw ValidationError("NoCertificate", "the symmetric avoiding formulas need a certificate");
    }
    if (from_label == prob.center_label || to_label == prob.center_label) {
        throw ValidationError("StartIsCenter", "avoiding probabilities are defined off the center only");
    }
    const SymmetryCertificate& cert = *prob.cert;
    const int reflected_from = prob.q.space.reflect_label(from_label);
    const int reflected_to = prob.q.space.reflect_label(to_label);
    const double from_ratio = cert.weight(from_label) / cert.weight(prob.center_label);
    const double to_ratio = cert.weight(prob.center_label) / cert.weight(to_label);

    DensityTrace first = p.trace(from_label, to_label);
    const DensityTrace mirrored_from = p.trace(reflected_from, to_label);
    const DensityTrace mirrored_to = p.trace(from_label, reflected_to);
    double worst = 0.0;
    for (int j = 0; j < p.grid.size(); ++j) {
        const auto ju = static_cast<std::size_t>(j);
        const double base = first.values[ju];
        const double form_a = base - from_ratio * mirrored_from.values[ju];
        const double form_b = base - to_ratio * mirrored_to.values[ju];
        worst = std::max(worst, std::abs(form_a - form_b));
        first.values[ju] = form_a;
    }
    if (worst > forms_tol) {
        throw NumericalError("FormsDisagree", "the two avoiding expressions differ by " + std::to_string(worst) +
                                                  "; the symmetry certificate does not hold");
    }
    return first;
}

DensityTrace fpt_reflection(const SymmetryCertificate& cert, const DensityTrace& g, int source_label) {
    const int center = static_cast<int>(std::lround(cert.center));
    if (static_cast<double>(center) != cert.center) {
        throw ValidationError("OddN", "reflection through the center needs an integral central state");
    }
    const int target = cert.space.reflect_label(source_label);
    const double scale = cert.weight(target) / cert.weight(center);
    DensityTrace out = g;
    for (auto& v : out.values) v *= scale;
    return out;
}

DensityTrace fpt_reflection(const PassageProblem& prob, const DensityTrace& g, int source_label) {
    if (!prob.cert) {
        throw ValidationError("NoCertificate", "reflection needs a symmetry certificate");
    }
    return fpt_reflection(*prob.cert, g, source_label);
}

}  // namespace symchain
