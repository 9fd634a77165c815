#include "symchain/bdjump.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace symchain::bdjump {

namespace {

// Start order for the downward recurrence: far enough above both the
// target order and the turning point m ~ x that the minimal solution has
// decayed below double precision relative to the dominant one.
int miller_start(int n_max, double x) {
    const double top = std::max(static_cast<double>(n_max), x);
    return n_max + static_cast<int>(std::ceil(12.0 * std::sqrt(top + 4.0))) + 40 +
           static_cast<int>(std::ceil(std::max(0.0, x - n_max)));
}

constexpr double kRescaleThreshold = 1e250;
constexpr double kRescaleFactor = 1e-250;

}  // namespace

std::vector<double> bessel_i_scaled_upto(int n_max, double x) {
    if (n_max < 0) {
        throw ValidationError("InvalidOrder", "n_max must be nonnegative");
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ValidationError("InvalidArgument", "bessel_i_scaled needs finite x >= 0");
    }
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;  // I_0(0) = 1, I_m(0) = 0
        return out;
    }
    if (x < 1e-8) {
        // Two power-series terms carry full double precision here, and the
        // recurrence ratios 2m/x would overflow long before m reaches the
        // start order.
        for (int m = 0; m <= n_max; ++m) {
            const double lead = std::exp(m * std::log(0.5 * x) - std::lgamma(m + 1.0) - x);
            out[static_cast<std::size_t>(m)] = lead * (1.0 + 0.25 * x * x / (m + 1.0));
        }
        return out;
    }

    const int start = miller_start(n_max, x);
    double above = 0.0;        // f_{m+1}
    double current = 1e-280;   // f_m, arbitrary seed; normalization removes it
    double norm = 0.0;         // accumulates f_0 + 2 sum_{m>=1} f_m
    for (int m = start; m >= 1; --m) {
        const double below = above + (2.0 * m / x) * current;
        norm += 2.0 * current;
        if (m - 1 <= n_max) out[static_cast<std::size_t>(m - 1)] = below;
        above = current;
        current = below;
        if (current > kRescaleThreshold) {
            above *= kRescaleFactor;
            current *= kRescaleFactor;
            norm *= kRescaleFactor;
            for (auto& v : out) v *= kRescaleFactor;
        }
    }
    norm += current;  // f_0 enters once
    for (auto& v : out) v /= norm;
    return out;
}

double bessel_i_scaled(int n, double x) {
    const int order = std::abs(n);  // I_n = I_{-n}
    return bessel_i_scaled_upto(order, x)[static_cast<std::size_t>(order)];
}

namespace {

// Integrand of the jump-renewal term, in overflow-free form:
// e^{-(birth+death+jump) tau} I_n(gamma tau)
//   = [e^{-gamma tau} I_n(gamma tau)] e^{-(birth+death-gamma+jump) tau},
// and birth + death >= gamma = 2 sqrt(birth death).
double renewal_integrand(const BDJumpModel& m, int order, double tau) {
    const double gamma = 2.0 * std::sqrt(m.birth * m.death);
    const double decay = m.birth + m.death - gamma + m.jump;
    return bessel_i_scaled(std::abs(order), gamma * tau) * std::exp(-decay * tau);
}

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double m, double b, double fa, double fm, double fb, double whole,
                            double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    return adaptive_simpson_rec(f, a, m, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 40);
}

void require_time(double t) {
    if (t < 0.0 || !std::isfinite(t)) {
        throw ValidationError("NegativeTime", "time must be finite and >= 0, got " + std::to_string(t));
    }
}

void require_equal_rates(const BDJumpModel& m) {
    if (!m.symmetric_rates()) {
        throw ValidationError("AsymmetricRates", "closed form available only for birth == death");
    }
}

}  // namespace

StationaryRoots stationary_roots(const BDJumpModel& model) {
    model.require_valid();
    const double total = model.birth + model.death + model.jump;
    // (birth+death+jump)^2 - 4 birth death, written cancellation-free.
    const double diff = model.birth - model.death;
    const double disc = diff * diff + model.jump * model.jump + 2.0 * model.jump * (model.birth + model.death);
    const double root = std::sqrt(disc);
    const double z2 = (total + root) / (2.0 * model.birth);
    const double z1 = 2.0 * model.death / (total + root);  // z1 z2 = death/birth
    return StationaryRoots{z1, z2};
}

double stationary_law(const BDJumpModel& model, int n) {
    model.require_valid();
    if (model.jump == 0.0) {
        throw ValidationError("AlphaZero", "the jump-free chain has no stationary law");
    }
    const auto [z1, z2] = stationary_roots(model);
    const double scale = model.jump / (model.birth * (z2 - z1));
    return n < 0 ? scale * std::pow(z1, -n) : scale * std::pow(z2, -n);
}

double hat_transition_probability(const BDJumpModel& model, int k, int n, double t) {
    model.require_valid();
    require_time(t);
    const double gamma = 2.0 * std::sqrt(model.birth * model.death);
    const double drift = std::pow(model.birth / model.death, 0.5 * (n - k));
    const double decay = model.birth + model.death - gamma;
    return drift * bessel_i_scaled(std::abs(n - k), gamma * t) * std::exp(-decay * t);
}

double transition_probability(const BDJumpModel& model, int k, int n, double t, double quad_tol) {
    model.require_valid();
    require_time(t);
    if (!(quad_tol > 0.0)) {
        throw ValidationError("InvalidTolerance", "quad_tol must be positive");
    }
    const double free_walk = hat_transition_probability(model, k, n, t) * std::exp(-model.jump * t);
    if (model.jump == 0.0) return free_walk;
    const double drift = std::pow(model.birth / model.death, 0.5 * n);
    const double renewal =
        adaptive_simpson([&](double tau) { return renewal_integrand(model, n, tau); }, 0.0, t, quad_tol);
    return free_walk + model.jump * drift * renewal;
}

double fpt_density_closed_form(const BDJumpModel& model, int k, double t, double series_tol) {
    model.require_valid();
    require_equal_rates(model);
    if (k < 1) {
        throw ValidationError("StateOutOfRange", "closed-form first passage needs a start k >= 1");
    }
    require_time(t);  // the t = 0 value is the t -> 0+ limit, q_{k,0}
    const double x = 2.0 * model.birth * t;
    // Largest order the series can need before scaled terms are zero to
    // double precision.
    const int hi = k + static_cast<int>(std::ceil(x + 14.0 * std::sqrt(x + 4.0))) + 60;
    const std::vector<double> scaled = bessel_i_scaled_upto(hi + 1, x);

    const double boundary = model.birth * (scaled[static_cast<std::size_t>(k - 1)] -
                                           scaled[static_cast<std::size_t>(k + 1)]);
    double series = 0.0;
    if (model.jump > 0.0) {
        for (int j = 1; k + j <= hi; ++j) {
            const double low = scaled[static_cast<std::size_t>(std::abs(k - j))];
            const double high = scaled[static_cast<std::size_t>(k + j)];
            series += low - high;
            // Remaining orders are monotone decreasing; a per-term budget
            // of series_tol / (terms left) bounds the dropped tail.
            if (j > k && low < series_tol / (hi - (k + j) + 1)) break;
        }
    }
    return std::exp(-model.jump * t) * (boundary + model.jump * series);
}

double avoiding_closed_form(const BDJumpModel& model, int k, int n, double t) {
    model.require_valid();
    require_equal_rates(model);
    if (k == 0 || n == 0) {
        throw ValidationError("CenterState", "avoiding probabilities are defined off state 0");
    }
    if ((k > 0) != (n > 0)) {
        throw ValidationError("CrossJump", "k and n must lie on the same side of 0");
    }
    require_time(t);
    const int a = std::abs(k);
    const int b = std::abs(n);
    const double x = 2.0 * model.birth * t;
    const std::vector<double> scaled = bessel_i_scaled_upto(a + b, x);
    return std::exp(-model.jump * t) *
           (scaled[static_cast<std::size_t>(std::abs(b - a))] - scaled[static_cast<std::size_t>(a + b)]);
}

Figure1Traces figure1_traces(double rate, int k, int n, const TimeGrid& grid, std::vector<double> fpt_alphas,
                             std::vector<double> avoiding_alphas) {
    if (!(rate > 0.0)) {
        throw ValidationError("InvalidRate", "figure traces need a positive birth/death rate");
    }
    Figure1Traces out;
    out.grid = grid;
    out.k = k;
    out.n = n;
    out.fpt_alphas = std::move(fpt_alphas);
    out.avoiding_alphas = std::move(avoiding_alphas);

    for (double alpha : out.fpt_alphas) {
        const BDJumpModel model{rate, rate, alpha};
        DensityTrace trace = DensityTrace::zeros(grid);
        for (int j = 0; j < grid.size(); ++j) {
            trace.values[static_cast<std::size_t>(j)] = fpt_density_closed_form(model, k, grid.t(j));
        }
        out.fpt.push_back(std::move(trace));
    }
    for (double alpha : out.avoiding_alphas) {
        const BDJumpModel model{rate, rate, alpha};
        DensityTrace trace = DensityTrace::zeros(grid);
        for (int j = 0; j < grid.size(); ++j) {
            trace.values[static_cast<std::size_t>(j)] = avoiding_closed_form(model, k, n, grid.t(j));
        }
        out.avoiding.push_back(std::move(trace));
    }
    return out;
}

}  // namespace symchain::bdjump
