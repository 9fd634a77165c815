#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "symchain/generator.hpp"
#include "symchain/time_grid.hpp"
#include "symchain/transient.hpp"

// Shared fixtures and independent oracles for the test suites. Everything
// here stays deliberately separate from the library's computation paths:
// power series instead of the downward recurrence, RK4 instead of
// uniformization, Romberg instead of adaptive Simpson.
namespace testsupport {

// 4-state chain with absorbing endpoints and weights rho^{-n}: two
// interior states coupled to everything, rows 0 and 3 zero.
inline symchain::GeneratorMatrix example1_chain(double a, double b, double rho) {
    const double rho0 = 1.0 + rho;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(4, 4);
    q(1, 0) = a * rho0 + b;
    q(1, 2) = b * rho;
    q(1, 3) = a * rho * rho;
    q(1, 1) = -(a * (rho0 + rho * rho) + b * rho0);
    q(2, 0) = a;
    q(2, 1) = b;
    q(2, 3) = (a * rho0 + b) * rho;
    q(2, 2) = -(a * (rho0 + rho * rho) + b * rho0);
    return symchain::validate_generator(q, symchain::StateSpace::finite(3));
}

// Ehrenfest-type chain: birth a(N-n), death a n.
inline symchain::GeneratorMatrix ehrenfest_chain(int n_max, double a) {
    const int n = n_max + 1;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (i + 1 < n) q(i, i + 1) = a * (n_max - i);
        if (i - 1 >= 0) q(i, i - 1) = a * i;
        q(i, i) = -(q.row(i).sum());
    }
    return symchain::validate_generator(q, symchain::StateSpace::finite(n_max));
}

// Uniform 3-cycle, clockwise rate 1.
inline symchain::GeneratorMatrix three_cycle() {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(3, 3);
    q(0, 1) = q(1, 2) = q(2, 0) = 1.0;
    q.diagonal().setConstant(-1.0);
    return symchain::validate_generator(q, symchain::StateSpace::finite(2));
}

// e^{-x} I_n(x) by the power series, summed to machine precision.
inline double bessel_series_scaled(int n, double x) {
    const int order = std::abs(n);
    double term = std::exp(order * std::log(0.5 * x) - std::lgamma(order + 1.0));
    if (x == 0.0) term = order == 0 ? 1.0 : 0.0;
    double sum = term;
    for (int k = 1; k <= 500 && term > sum * 1e-20; ++k) {
        term *= 0.25 * x * x / (static_cast<double>(k) * (order + k));
        sum += term;
    }
    return sum * std::exp(-x);
}

// P' = P Q integrated by classical RK4 from the identity, sampled at the
// grid points; `substeps` RK4 steps per grid interval.
inline std::vector<Eigen::MatrixXd> rk4_transition(const symchain::GeneratorMatrix& q,
                                                   const symchain::TimeGrid& grid, int substeps) {
    const int n = q.size();
    std::vector<Eigen::MatrixXd> out;
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
    out.push_back(p);
    const double dt = grid.h() / substeps;
    for (int j = 1; j < grid.size(); ++j) {
        for (int s = 0; s < substeps; ++s) {
            const Eigen::MatrixXd k1 = p * q.rates;
            const Eigen::MatrixXd k2 = (p + 0.5 * dt * k1) * q.rates;
            const Eigen::MatrixXd k3 = (p + 0.5 * dt * k2) * q.rates;
            const Eigen::MatrixXd k4 = (p + dt * k3) * q.rates;
            p += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push_back(p);
    }
    return out;
}

// Romberg integration to absolute tolerance; the quadrature oracle.
template <typename F>
double romberg(const F& f, double a, double b, double tol = 1e-12) {
    constexpr int kMaxLevel = 22;
    std::vector<double> row(kMaxLevel, 0.0);
    double h = b - a;
    row[0] = 0.5 * h * (f(a) + f(b));
    long long points = 1;
    for (int level = 1; level < kMaxLevel; ++level) {
        double sum = 0.0;
        for (long long i = 0; i < points; ++i) sum += f(a + (i + 0.5) * h);
        std::vector<double> next(kMaxLevel, 0.0);
        next[0] = 0.5 * (row[0] + h * sum);
        double factor = 1.0;
        for (int m = 1; m <= level; ++m) {
            factor *= 4.0;
            next[m] = next[m - 1] + (next[m - 1] - row[m - 1]) / (factor - 1.0);
        }
        if (level > 3 && std::abs(next[level] - row[level - 1]) < tol) return next[level];
        row = next;
        h *= 0.5;
        points *= 2;
    }
    return row[kMaxLevel - 1];
}

// Dense random generator, irreducible by construction (positive
// off-diagonal band plus random extras).
inline symchain::GeneratorMatrix random_generator(int states, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.1, 2.0);
    std::bernoulli_distribution coin(0.4);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(states, states);
    for (int i = 0; i < states; ++i) {
        for (int j = 0; j < states; ++j) {
            if (i == j) continue;
            if (std::abs(i - j) == 1 || coin(rng)) q(i, j) = u(rng);
        }
        q(i, i) = -(q.row(i).sum());
    }
    return symchain::validate_generator(q, symchain::StateSpace::finite(states - 1));
}

// Random centrally symmetric chain with absorbing endpoints: a birth-death
// skeleton whose rates are tied to strictly increasing weights with
// x_n x_{N-n} constant. These chains have a two-dimensional harmonic cone
// spanned by 1 and x, so they admit nontrivial similarity transforms.
struct SymmetricAbsorbingChain {
    symchain::GeneratorMatrix q;
    std::vector<double> weights;  // by matrix index
};

inline SymmetricAbsorbingChain random_symmetric_absorbing(int n_max, std::mt19937_64& rng) {
    const int n = n_max + 1;
    std::uniform_real_distribution<double> inc(0.2, 1.5);
    std::uniform_real_distribution<double> rate(0.5, 2.0);

    // Log-weights with reflection-symmetric increments.
    std::vector<double> gaps(static_cast<std::size_t>(n_max));
    for (int e = 0; e < (n_max + 1) / 2; ++e) {
        gaps[static_cast<std::size_t>(e)] = inc(rng);
        gaps[static_cast<std::size_t>(n_max - 1 - e)] = gaps[static_cast<std::size_t>(e)];
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    double log_x = 0.0;
    x[0] = 1.0;
    for (int i = 1; i < n; ++i) {
        log_x += gaps[static_cast<std::size_t>(i - 1)];
        x[static_cast<std::size_t>(i)] = std::exp(log_x);
    }

    std::vector<double> up(static_cast<std::size_t>(n), 0.0), down(static_cast<std::size_t>(n), 0.0);
    for (int k = 1; k < n_max; ++k) {
        const int rk = n_max - k;
        if (k < rk) {
            down[static_cast<std::size_t>(k)] = rate(rng);
            up[static_cast<std::size_t>(k)] = down[static_cast<std::size_t>(k)] *
                                              (x[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(k - 1)]) /
                                              (x[static_cast<std::size_t>(k + 1)] - x[static_cast<std::size_t>(k)]);
        } else if (k == rk) {
            down[static_cast<std::size_t>(k)] = rate(rng);
            up[static_cast<std::size_t>(k)] =
                down[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k - 1)] / x[static_cast<std::size_t>(k)];
        } else {
            // Mirror of the row at N-k.
            down[static_cast<std::size_t>(k)] =
                up[static_cast<std::size_t>(rk)] * x[static_cast<std::size_t>(rk + 1)] / x[static_cast<std::size_t>(rk)];
            up[static_cast<std::size_t>(k)] =
                down[static_cast<std::size_t>(rk)] * x[static_cast<std::size_t>(rk - 1)] / x[static_cast<std::size_t>(rk)];
        }
    }

    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n_max; ++k) {
        q(k, k + 1) = up[static_cast<std::size_t>(k)];
        q(k, k - 1) = down[static_cast<std::size_t>(k)];
        q(k, k) = -(up[static_cast<std::size_t>(k)] + down[static_cast<std::size_t>(k)]);
    }
    return SymmetricAbsorbingChain{symchain::validate_generator(q, symchain::StateSpace::finite(n_max)),
                                   std::move(x)};
}

// Random reflection-invariant ergodic chain (constant weights) with no
// cross-center jumps: a mirrored nearest-neighbor backbone plus mirrored
// same-side extras. Valid first-passage input by construction.
inline symchain::GeneratorMatrix random_reflection_invariant(int half_width, std::mt19937_64& rng) {
    const int n = 2 * half_width + 1;
    const int n_max = n - 1;
    const int center = half_width;
    std::uniform_real_distribution<double> rate(0.3, 1.8);
    std::bernoulli_distribution coin(0.3);

    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < n_max; ++e) {
        const int re = n_max - 1 - e;
        if (e > re) break;
        const double u = rate(rng), d = rate(rng);
        q(e, e + 1) = u;
        q(e + 1, e) = d;
        q(re + 1, re) = u;  // mirror: down-rate at the reflected edge
        q(re, re + 1) = d;
    }
    // Mirrored same-side extras (never across the center).
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i - 1; ++j) {
            const bool same_side = (i <= center && j <= center) || (i >= center && j >= center);
            if (!same_side || !coin(rng)) continue;
            const double r = rate(rng);
            q(i, j) += r;
            q(n_max - i, n_max - j) += r;
        }
    }
    for (int i = 0; i < n; ++i) {
        q(i, i) = 0.0;
        q(i, i) = -(q.row(i).sum());
    }
    return symchain::validate_generator(q, symchain::StateSpace::finite(n_max));
}

// Trapezoidal convolution (g * f)(t_m) on a shared grid; test-side oracle
// for the renewal identities.
inline std::vector<double> convolve_trapezoid(const symchain::DensityTrace& g, const symchain::DensityTrace& f) {
    const double h = g.grid.h();
    const int points = g.grid.size();
    std::vector<double> out(static_cast<std::size_t>(points), 0.0);
    for (int m = 1; m < points; ++m) {
        double acc = 0.5 * (g.values[0] * f.values[static_cast<std::size_t>(m)] +
                            g.values[static_cast<std::size_t>(m)] * f.values[0]);
        for (int l = 1; l < m; ++l) acc += g.values[static_cast<std::size_t>(l)] * f.values[static_cast<std::size_t>(m - l)];
        out[static_cast<std::size_t>(m)] = h * acc;
    }
    return out;
}

}  // namespace testsupport
