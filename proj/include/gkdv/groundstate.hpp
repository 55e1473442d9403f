#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "gkdv/direction.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/model.hpp"
#include "gkdv/types.hpp"

namespace gkdv {

/// sech evaluated without overflow for large arguments.
inline double sech(double z) {
    const double e = std::exp(-std::fabs(z));
    return 2.0 * e / (1.0 + e * e);
}

/// Closed-form scalar solitary profile Q_w(x) = ((k+1) w sech^2(k sqrt(w) x))^{1/(2k)}.
inline double scalar_q(double omega, int k, double x) {
    if (!(omega > 0) || k < 1) throw ValidationError("scalar_q: requires omega > 0, k >= 1");
    const double s = sech(k * std::sqrt(omega) * x);
    return std::pow((k + 1) * omega * s * s, 1.0 / (2.0 * k));
}

/// Grid whose period scales with the solitary-wave width, long enough that
/// the exponential tail is negligible yet short enough to resolve the peak.
inline Grid suggested_grid(double omega, std::size_t n = 1024) {
    Grid g;
    g.n = n;
    g.length = 64.0 / std::sqrt(omega);
    return g;
}

/// Explicit ground state (alpha Q_w, beta Q_w) along a maximizing direction.
struct GroundStateProfile {
    double omega;
    double alpha;
    double beta;
    int k;
    FieldPair pair;
    double f_max;
    DirectionPoint direction;
};

inline GroundStateProfile build_ground_state(const ModelParams& params, double omega,
                                             const Grid& grid, const DirectionPoint& direction) {
    params.validate();
    grid.validate();
    if (!(omega > 0)) throw ValidationError("build_ground_state: omega must be positive");
    if (lagrange_residual(params, direction) > 1e-8)
        throw ValidationError("build_ground_state: direction is not a critical point");
    if (scalar_q(omega, params.k, 0.5 * grid.length) >= 1e-12)
        throw ValidationError("build_ground_state: domain truncation error (tail above 1e-12)");

    const double f_max = eval_density(params, direction.x0, direction.y0).F;
    const double scale = std::pow(f_max, -1.0 / (2.0 * params.k));

    GroundStateProfile gs;
    gs.omega = omega;
    gs.k = params.k;
    gs.alpha = scale * direction.x0;
    gs.beta = scale * direction.y0;
    gs.f_max = f_max;
    gs.direction = direction;
    gs.pair = FieldPair(grid);
    const auto x = grid.points();
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double q = scalar_q(omega, params.k, x[j]);
        gs.pair.u[j] = gs.alpha * q;
        gs.pair.v[j] = gs.beta * q;
    }
    return gs;
}

/// Max-norm residual of the elliptic system u'' - w u + f(u,v) = 0 (and the
/// v equation) with spectral second derivatives.
inline double elliptic_residual(const ModelParams& params, double omega, const FieldPair& pair) {
    params.validate();
    pair.validate();
    const auto uxx = spectral_derivative(pair.u, pair.grid, 2);
    const auto vxx = spectral_derivative(pair.v, pair.grid, 2);
    double r = 0.0;
    for (std::size_t j = 0; j < pair.grid.n; ++j) {
        const double ru = uxx[j] - omega * pair.u[j] + nonlinearity_f(params, pair.u[j], pair.v[j]);
        const double rv = vxx[j] - omega * pair.v[j] + nonlinearity_g(params, pair.u[j], pair.v[j]);
        r = std::max(r, std::max(std::fabs(ru), std::fabs(rv)));
    }
    return r;
}

/// Relative residuals of the five Pohozaev identities at the omega = 1
/// normalization.
struct PohozaevReport {
    std::array<double, 5> residuals;
    bool trivial; ///< pair was identically zero
};

namespace detail {
inline double rel_gap(double lhs, double rhs) {
    const double scale = std::max(std::fabs(lhs), std::fabs(rhs));
    return scale > 0 ? std::fabs(lhs - rhs) / scale : 0.0;
}
} // namespace detail

inline PohozaevReport pohozaev_report(const ModelParams& params, const FieldPair& pair) {
    const double l2 = l2_norm_sq(pair);
    const double gr = grad_norm_sq(pair);
    const double p = hamiltonian_integral(params, pair);
    PohozaevReport rep;
    rep.trivial = l2 == 0.0;
    const int k = params.k;
    rep.residuals[0] = detail::rel_gap(l2 + gr, (2 * k + 2) * p);
    rep.residuals[1] = detail::rel_gap(l2 - gr, 2 * p);
    rep.residuals[2] = detail::rel_gap(gr, static_cast<double>(k) / (k + 2) * l2);
    rep.residuals[3] = detail::rel_gap(p, l2 / (k + 2));
    rep.residuals[4] = detail::rel_gap(p, gr / k);
    return rep;
}

/// Composite Gauss-Legendre quadrature of int_R sech^{2/k}(x) dx, doubling
/// panels until the result settles to 1e-12.
inline double sech_power_integral(int k) {
    static constexpr std::array<double, 8> nodes = {
        -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
        0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static constexpr std::array<double, 8> weights = {
        0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
        0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    const double upper = 40.0;
    double prev = 0.0;
    for (std::size_t panels = 8;; panels *= 2) {
        double total = 0.0;
        const double hw = upper / static_cast<double>(panels) / 2.0;
        for (std::size_t i = 0; i < panels; ++i) {
            const double mid = (2.0 * static_cast<double>(i) + 1.0) * hw;
            for (std::size_t q = 0; q < nodes.size(); ++q)
                total += weights[q] * std::pow(sech(mid + hw * nodes[q]), 2.0 / k);
        }
        total *= hw * 2.0; // both half-lines by symmetry
        if (std::fabs(total - prev) < 1e-12) return total;
        prev = total;
        if (panels > (1u << 20)) return total;
    }
}

/// Sharp Gagliardo-Nirenberg constant from a ground state at omega = 1.
inline double sharp_constant(const ModelParams& params, const GroundStateProfile& gs) {
    if (std::fabs(gs.omega - 1.0) > 1e-14)
        throw ValidationError("sharp_constant: ground state must be at omega = 1");
    const int k = params.k;
    const double norm2k = std::pow(l2_norm_sq(gs.pair), k); // ||(Phi,Psi)||^{2k}
    return 2.0 / (k + 2) * std::pow((k + 2.0) / k, k / 2.0) / norm2k;
}

/// Residual of the identity K_opt ||(Phi,Psi)||^{k+2} ||d/dx (Phi,Psi)||^{k-2} = 2/k.
inline double sharp_constant_identity_residual(const ModelParams& params,
                                               const GroundStateProfile& gs) {
    const double kopt = sharp_constant(params, gs);
    const int k = params.k;
    const double l2 = std::sqrt(l2_norm_sq(gs.pair));
    const double gr = std::sqrt(grad_norm_sq(gs.pair));
    return detail::rel_gap(kopt * std::pow(l2, k + 2) * std::pow(gr, k - 2), 2.0 / k);
}

struct NehariLevelReport {
    double omega_n;        ///< Nehari level I(gs)
    double lambda1;        ///< (2k+2)/k * omega_n
    double s_of_gs;        ///< S(gs)
    double p_tilde_of_gs;  ///< (2k+2) P(gs)
};

inline NehariLevelReport nehari_level_check(const ModelParams& params,
                                            const GroundStateProfile& gs) {
    if (std::fabs(gs.omega - 1.0) > 1e-14)
        throw ValidationError("nehari_level_check: ground state must be at omega = 1");
    const auto fr = functionals(params, gs.pair);
    NehariLevelReport rep;
    rep.omega_n = fr.i_action;
    rep.lambda1 = (2.0 * params.k + 2.0) / params.k * rep.omega_n;
    rep.s_of_gs = fr.s;
    rep.p_tilde_of_gs = fr.p_tilde;
    return rep;
}

/// Rescales a ground state along the solitary-wave curve
/// phi_w(x) = w^{1/(2k)} phi_1(sqrt(w) x), on a grid adapted to w.
inline GroundStateProfile scale_ground_state(const ModelParams& params,
                                             const GroundStateProfile& gs1, double omega,
                                             const Grid& grid) {
    GroundStateProfile gs = build_ground_state(params, omega, grid, gs1.direction);
    return gs;
}

struct LambdaSecondDerivative {
    double closed_form;
    double finite_difference;
};

/// Lambda''(w) along the solitary-wave branch, Lambda(w) = E + w M: the
/// closed form against a central second difference of numerically evaluated
/// functionals over the scaling family.
inline LambdaSecondDerivative lambda_second_derivative(const ModelParams& params, double omega,
                                                       const GroundStateProfile& gs1) {
    params.validate();
    if (!(omega > 0)) throw ValidationError("lambda_second_derivative: omega must be positive");
    if (params.k < 2) throw ValidationError("lambda_second_derivative: requires k >= 2");
    const int k = params.k;

    LambdaSecondDerivative out;
    out.closed_form = std::pow(gs1.f_max, -1.0 / k) / 2.0 * std::pow(k + 1.0, 1.0 / k) / k *
                      (1.0 / k - 0.5) * std::pow(omega, 1.0 / k - 1.5) * sech_power_integral(k);

    const double h = 1e-3 * omega;
    auto lambda_at = [&](double w) {
        const Grid g = suggested_grid(w, 2048);
        const auto gs = build_ground_state(params, w, g, gs1.direction);
        ModelParams focusing = params;
        focusing.mu = 1;
        const auto fr = functionals(focusing, gs.pair);
        return fr.energy + w * fr.mass;
    };
    out.finite_difference =
        (lambda_at(omega + h) - 2.0 * lambda_at(omega) + lambda_at(omega - h)) / (h * h);
    return out;
}

} // namespace gkdv
