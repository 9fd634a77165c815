#pragma once

#include <vector>

#include "symchain/generator.hpp"
#include "symchain/time_grid.hpp"

namespace symchain::bdjump {

// e^{-x} I_n(x), the exponentially scaled modified Bessel function of the
// first kind. Computed by Miller's downward recurrence normalized with
// e^{-x} (I_0 + 2 sum_{m>=1} I_m) = 1; the scaled values stay O(1) for
// every x >= 0, so there is no overflow where I_n itself would blow up.
double bessel_i_scaled(int n, double x);

// e^{-x} I_m(x) for m = 0..n_max from a single downward pass.
std::vector<double> bessel_i_scaled_upto(int n_max, double x);

// Roots 0 < z1 < 1 < z2 of the stationary balance; z1 is evaluated via
// z1 z2 = death/birth to dodge cancellation at small jump rates.
struct StationaryRoots {
    double z1 = 0.0;
    double z2 = 0.0;
};
StationaryRoots stationary_roots(const BDJumpModel& model);

// Stationary probability of state n (requires jump > 0): geometric in
// each direction with ratios z1, 1/z2.
double stationary_law(const BDJumpModel& model, int n);

// Transition probability p_{k,n}(t) of the lattice chain: a drifted
// free-walk term plus a jump-renewal integral evaluated by adaptive
// Simpson to absolute tolerance quad_tol.
double transition_probability(const BDJumpModel& model, int k, int n, double t, double quad_tol = 1e-10);

// Transition probability of the jump-free bilateral birth-death process.
double hat_transition_probability(const BDJumpModel& model, int k, int n, double t);

// Downward first-passage density g^-_{k,0}(t) for k >= 1, equal-rate case
// only: a Bessel-difference series truncated once the remaining scaled
// terms drop below series_tol.
double fpt_density_closed_form(const BDJumpModel& model, int k, double t, double series_tol = 1e-12);

// 0-avoiding transition probability for k, n on the same side of 0,
// equal-rate case only.
double avoiding_closed_form(const BDJumpModel& model, int k, int n, double t);

// The two trace families of the paper-style figure: first-passage
// densities g^-_{k,0} per alpha and avoiding probabilities p^<0>_{k,n}
// per alpha, on a shared grid.
struct Figure1Traces {
    TimeGrid grid;
    int k = 0;
    int n = 0;
    std::vector<double> fpt_alphas;
    std::vector<DensityTrace> fpt;
    std::vector<double> avoiding_alphas;
    std::vector<DensityTrace> avoiding;
};
Figure1Traces figure1_traces(double rate, int k, int n, const TimeGrid& grid,
                             std::vector<double> fpt_alphas = {0.1, 0.2, 0.3},
                             std::vector<double> avoiding_alphas = {0.1, 0.2, 0.5, 1.0});

}  // namespace symchain::bdjump
