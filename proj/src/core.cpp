#include "corral/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace corral {

namespace {

void check_sizes(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(what) + ": size mismatch");
    }
    if (a.empty()) {
        throw std::invalid_argument(std::string(what) + ": empty input");
    }
}

void check_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + ": non-finite input");
        }
    }
}

void check_step_sizes(std::span<const double> eta, const char* what) {
    for (double e : eta) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw std::invalid_argument(std::string(what) + ": step sizes must be positive");
        }
    }
}

// Sum of conjugate-gradient coordinates and its derivative in nu.
struct ShiftEval {
    double sum;
    double slope;
};

ShiftEval eval_shift(std::span<const double> g, std::span<const double> eta, double nu) {
    ShiftEval e{0.0, 0.0};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = 1.0 - 0.5 * eta[i] * (g[i] + nu);
        const double inv = 1.0 / x;
        const double inv2 = inv * inv;
        e.sum += inv2;
        e.slope += eta[i] * inv2 * inv;
    }
    return e;
}

}  // namespace

double tsallis_potential(std::span<const double> w, std::span<const double> eta) {
    check_sizes(w, eta, "tsallis_potential");
    check_finite(w, "tsallis_potential");
    check_finite(eta, "tsallis_potential");
    check_step_sizes(eta, "tsallis_potential");
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0.0) {
            throw std::domain_error("tsallis_potential: negative weight");
        }
        acc += (std::sqrt(w[i]) - 0.5 * w[i]) / eta[i];
    }
    return -4.0 * acc;
}

Vec tsallis_grad(std::span<const double> w, std::span<const double> eta) {
    check_sizes(w, eta, "tsallis_grad");
    check_step_sizes(eta, "tsallis_grad");
    Vec out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
            throw std::domain_error("tsallis_grad: gradient unbounded at w_i <= 0");
        }
        out[i] = -2.0 * (1.0 / std::sqrt(w[i]) - 1.0) / eta[i];
    }
    return out;
}

Vec tsallis_grad_conjugate(std::span<const double> y, std::span<const double> eta) {
    check_sizes(y, eta, "tsallis_grad_conjugate");
    check_finite(y, "tsallis_grad_conjugate");
    check_step_sizes(eta, "tsallis_grad_conjugate");
    Vec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = -0.5 * eta[i] * y[i] + 1.0;
        if (!(x > 0.0)) {
            throw std::domain_error("tsallis_grad_conjugate: denominator <= 0");
        }
        out[i] = 1.0 / (x * x);
    }
    return out;
}

NormalizationResult solve_shift(std::span<const double> g, std::span<const double> eta) {
    check_sizes(g, eta, "solve_shift");
    check_finite(g, "solve_shift");
    check_step_sizes(eta, "solve_shift");

    const std::size_t k = g.size();
    const double hi0 = -*std::max_element(g.begin(), g.end());
    const double min_eta = *std::min_element(eta.begin(), eta.end());

    double hi = hi0;
    double width = 2.0 * std::sqrt(static_cast<double>(k)) / min_eta;
    double lo = hi - width;
    for (int expand = 0; eval_shift(g, eta, lo).sum >= 1.0; ++expand) {
        if (expand > 200) {
            throw NumericFailure("solve_shift: could not bracket the multiplier", 0.0);
        }
        width *= 2.0;
        lo = hi - width;
    }

    // f is increasing and convex in nu, so Newton started at the upper end
    // of the bracket approaches the root monotonically from above.
    double nu = hi;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        const ShiftEval e = eval_shift(g, eta, nu);
        residual = e.sum - 1.0;
        if (std::abs(residual) <= 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(k)) {
            converged = true;
            break;
        }
        if (residual > 0.0) {
            hi = nu;
        } else {
            lo = nu;
        }
        double next = nu - residual / e.slope;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (next == nu) {
            converged = std::abs(residual) <= 1e-10;
            break;
        }
        nu = next;
    }
    if (!converged && !(std::abs(residual) <= 1e-10)) {
        throw NumericFailure("solve_shift: no convergence", residual);
    }

    NormalizationResult out;
    out.nu = nu;
    out.weights.resize(k);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double x = 1.0 - 0.5 * eta[i] * (g[i] + nu);
        out.weights[i] = 1.0 / (x * x);
        total += out.weights[i];
    }
    for (double& w : out.weights) {
        w /= total;
    }
    return out;
}

double simplex_conjugate(std::span<const double> y, std::span<const double> eta) {
    const NormalizationResult r = solve_shift(y, eta);
    double inner = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        inner += y[i] * r.weights[i];
    }
    return inner - tsallis_potential(r.weights, eta);
}

double bregman_divergence(std::span<const double> x, std::span<const double> y,
                          std::span<const double> eta) {
    check_sizes(x, y, "bregman_divergence");
    for (double v : x) {
        if (!(v > 0.0)) {
            throw std::domain_error("bregman_divergence: boundary point");
        }
    }
    const Vec gy = tsallis_grad(y, eta);
    double inner = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        inner += gy[i] * (x[i] - y[i]);
    }
    return tsallis_potential(x, eta) - tsallis_potential(y, eta) - inner;
}

double conjugate_bregman_divergence(std::span<const double> a, std::span<const double> b,
                                    std::span<const double> eta) {
    check_sizes(a, b, "conjugate_bregman_divergence");
    const NormalizationResult rb = solve_shift(b, eta);
    double inner = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        inner += rb.weights[i] * (a[i] - b[i]);
    }
    return simplex_conjugate(a, eta) - simplex_conjugate(b, eta) - inner;
}

double lower_median(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("lower_median: empty input");
    }
    Vec sorted(values.begin(), values.end());
    const std::size_t idx = (sorted.size() + 1) / 2 - 1;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(idx), sorted.end());
    return sorted[idx];
}

NormalizationResult solve_log_barrier(std::span<const double> w, std::span<const double> loss,
                                      std::span<const double> eta) {
    check_sizes(w, loss, "solve_log_barrier");
    check_sizes(w, eta, "solve_log_barrier");
    check_finite(loss, "solve_log_barrier");
    check_step_sizes(eta, "solve_log_barrier");
    for (double v : w) {
        if (!(v > 0.0)) {
            throw std::domain_error("solve_log_barrier: weights must be interior");
        }
    }

    const std::size_t k = w.size();
    auto eval = [&](double lambda, double& slope) {
        double sum = 0.0;
        slope = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double p = 1.0 / (1.0 / w[i] + eta[i] * (loss[i] - lambda));
            sum += p;
            slope += eta[i] * p * p;
        }
        return sum;
    };

    // The sum is <= 1 at min(loss) and >= 1 at max(loss) when every
    // denominator is still positive there; it blows up at the first pole
    // loss_i + 1 / (eta_i w_i), so the root lies below that too.
    double lo = *std::min_element(loss.begin(), loss.end());
    double hi = *std::max_element(loss.begin(), loss.end());
    for (std::size_t i = 0; i < k; ++i) {
        hi = std::min(hi, loss[i] + 1.0 / (eta[i] * w[i]));
    }
    double lambda = lo;
    double residual = 0.0;
    if (hi > lo) {
        bool converged = false;
        for (int iter = 0; iter < 200; ++iter) {
            double slope = 0.0;
            residual = eval(lambda, slope) - 1.0;
            if (std::abs(residual) <= 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(k)) {
                converged = true;
                break;
            }
            if (residual > 0.0) {
                hi = lambda;
            } else {
                lo = lambda;
            }
            double next = lambda - residual / slope;
            if (!(next > lo && next < hi)) {
                next = 0.5 * (lo + hi);
            }
            if (next == lambda) {
                converged = std::abs(residual) <= 1e-10;
                break;
            }
            lambda = next;
        }
        if (!converged && !(std::abs(residual) <= 1e-10)) {
            throw NumericFailure("solve_log_barrier: no convergence", residual);
        }
    }

    NormalizationResult out;
    out.nu = lambda;
    out.weights.resize(k);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        out.weights[i] = 1.0 / (1.0 / w[i] + eta[i] * (loss[i] - lambda));
        total += out.weights[i];
    }
    for (double& p : out.weights) {
        p /= total;
    }
    return out;
}

bool on_simplex(std::span<const double> w, double tol) {
    double total = 0.0;
    for (double v : w) {
        if (!(v >= 0.0)) {
            return false;
        }
        total += v;
    }
    return std::abs(total - 1.0) <= tol;
}

}  // namespace corral
