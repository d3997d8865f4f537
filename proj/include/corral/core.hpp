#pragma once

// Simplex numerics for the 1/2-Tsallis mirror map.
//
// The potential at step sizes eta is
//     Psi(w)      = -4 * sum_i (sqrt(w_i) - w_i / 2) / eta_i
//     grad Psi_i  = -2 * (1 / sqrt(w_i) - 1) / eta_i
//     grad Psi*_i = (1 - eta_i * y_i / 2)^-2
// and Phi(Y) = max_{w in simplex} <Y, w> - Psi(w) is its simplex-restricted
// conjugate. Everything here is a pure function of its arguments.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace corral {

using Vec = std::vector<double>;

/// Raised when an iterative solver fails to reach its tolerance.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Weights on the simplex together with the Lagrange multiplier of the
/// normalization constraint: weights_i = grad Psi*(g_i + nu).
struct NormalizationResult {
    Vec weights;
    double nu = 0.0;
};

double tsallis_potential(std::span<const double> w, std::span<const double> eta);

/// Throws std::domain_error if any w_i is zero.
Vec tsallis_grad(std::span<const double> w, std::span<const double> eta);

/// Throws std::domain_error if 1 - eta_i * y_i / 2 <= 0 for some i.
Vec tsallis_grad_conjugate(std::span<const double> y, std::span<const double> eta);

/// Finds nu with sum_i grad Psi*(g_i + nu) = 1.
///
/// Newton iteration on the scalar equation, safeguarded by a bracket
/// [lo, hi] with hi = min_i(-g_i) (every conjugate denominator >= 1 there,
/// so the sum is >= 1) and lo expanded geometrically until the sum drops
/// below 1. The returned weights are divided by their sum so they form an
/// exact distribution.
NormalizationResult solve_shift(std::span<const double> g, std::span<const double> eta);

/// Phi(Y): value of the simplex-constrained conjugate of Psi.
double simplex_conjugate(std::span<const double> y, std::span<const double> eta);

/// D_Psi(x, y) = Psi(x) - Psi(y) - <grad Psi(y), x - y>. Requires interior points.
double bregman_divergence(std::span<const double> x, std::span<const double> y,
                          std::span<const double> eta);

/// D_Phi(a, b) = Phi(a) - Phi(b) - <grad Phi(b), a - b>, grad Phi(b) = solve_shift(b).
double conjugate_bregman_divergence(std::span<const double> a, std::span<const double> b,
                                    std::span<const double> eta);

/// Element at sorted index ceil(n/2) - 1, i.e. the lower median for even n.
double lower_median(std::span<const double> values);

/// Log-barrier normalization used by the log-barrier corraller: finds lambda
/// with sum_i 1 / (1 / w_i + eta_i * (loss_i - lambda)) = 1.
NormalizationResult solve_log_barrier(std::span<const double> w, std::span<const double> loss,
                                      std::span<const double> eta);

/// True when every entry is >= 0 and the sum is within tol of 1.
bool on_simplex(std::span<const double> w, double tol = 1e-9);

}  // namespace corral
