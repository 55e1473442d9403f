#pragma once

#include <cmath>
#include <optional>

#include "gkdv/fourier.hpp"
#include "gkdv/types.hpp"

namespace gkdv {

/// Hamiltonian density H, its partial derivatives f = H_u, g = H_v, and
/// F = (2k+2) H at a single point.
struct DensityRecord {
    double H;
    double f;
    double g;
    double F;
};

inline double density_h(const ModelParams& p, double x, double y) {
    const int k = p.k;
    return p.a / (2 * k + 2) * (ipow(x, 2 * k + 2) + ipow(y, 2 * k + 2)) +
           p.b / (k + 1) * ipow(x * y, k + 1) +
           p.c / k * ipow(x, k + 2) * ipow(y, k) +
           p.d / k * ipow(x, k) * ipow(y, k + 2);
}

inline double nonlinearity_f(const ModelParams& p, double x, double y) {
    const int k = p.k;
    return p.a * ipow(x, 2 * k + 1) + p.b * ipow(x, k) * ipow(y, k + 1) +
           (k + 2.0) / k * p.c * ipow(x, k + 1) * ipow(y, k) +
           p.d * ipow(x, k - 1) * ipow(y, k + 2);
}

inline double nonlinearity_g(const ModelParams& p, double x, double y) {
    const int k = p.k;
    return p.a * ipow(y, 2 * k + 1) + p.b * ipow(y, k) * ipow(x, k + 1) +
           (k + 2.0) / k * p.d * ipow(y, k + 1) * ipow(x, k) +
           p.c * ipow(y, k - 1) * ipow(x, k + 2);
}

inline DensityRecord eval_density(const ModelParams& p, double x, double y) {
    p.validate();
    if (!std::isfinite(x) || !std::isfinite(y))
        throw ValidationError("eval_density: non-finite input");
    DensityRecord r;
    r.H = density_h(p, x, y);
    r.f = nonlinearity_f(p, x, y);
    r.g = nonlinearity_g(p, x, y);
    r.F = (2 * p.k + 2) * r.H;
    return r;
}

/// Conserved and variational quantities of a field pair.
struct FunctionalRecord {
    double mass;     ///< M = (1/2) int (u^2 + v^2)
    double energy;   ///< E = (1/2) int (u_x^2 + v_x^2 - 2 mu H)
    double p;        ///< P = int H
    double p_tilde;  ///< (2k+2) P
    double s;        ///< S = ||(u,v)||_{H1xH1}^2
    double i_action; ///< I = S/2 - mu P
    std::optional<double> j_quotient; ///< present only when P above the membership threshold
};

inline double l2_norm_sq(const FieldPair& pair) {
    double s = 0.0;
    for (std::size_t j = 0; j < pair.grid.n; ++j)
        s += pair.u[j] * pair.u[j] + pair.v[j] * pair.v[j];
    return s * pair.grid.dx();
}

inline double grad_norm_sq(const FieldPair& pair) {
    return derivative_norm_sq(pair.u, pair.grid) + derivative_norm_sq(pair.v, pair.grid);
}

inline double hamiltonian_integral(const ModelParams& p, const FieldPair& pair) {
    double s = 0.0;
    for (std::size_t j = 0; j < pair.grid.n; ++j)
        s += density_h(p, pair.u[j], pair.v[j]);
    return s * pair.grid.dx();
}

/// Membership threshold for the cone {P > 0}; the strict inequality of the
/// continuum definition needs a numerical margin.
inline double p_membership_tol(const FieldPair& pair) {
    return 1e-12 * (1.0 + l2_norm_sq(pair));
}

inline FunctionalRecord functionals(const ModelParams& params, const FieldPair& pair) {
    params.validate();
    pair.validate();
    FunctionalRecord r;
    const double l2 = l2_norm_sq(pair);
    const double gr = grad_norm_sq(pair);
    r.p = hamiltonian_integral(params, pair);
    r.p_tilde = (2 * params.k + 2) * r.p;
    r.mass = 0.5 * l2;
    r.energy = 0.5 * gr - params.mu * r.p;
    r.s = l2 + gr;
    r.i_action = 0.5 * r.s - params.mu * r.p;
    if (r.p > p_membership_tol(pair)) {
        r.j_quotient = std::pow(std::sqrt(l2), params.k + 2) *
                       std::pow(std::sqrt(gr), params.k) / (2.0 * r.p);
    }
    return r;
}

/// Weinstein quotient J; throws when the pair is outside the cone {P > 0}.
inline double j_quotient(const ModelParams& params, const FieldPair& pair) {
    auto r = functionals(params, pair);
    if (!r.j_quotient) throw ValidationError("j_quotient: pair not in the cone P > 0");
    return *r.j_quotient;
}

/// Scale factor projecting onto the Nehari manifold S = (2k+2) P.
inline double nehari_scale(const ModelParams& params, const FieldPair& pair) {
    auto r = functionals(params, pair);
    if (r.p <= p_membership_tol(pair))
        throw ValidationError("nehari_scale: pair not in the cone P > 0");
    return std::pow(r.s / r.p_tilde, 1.0 / (2.0 * params.k));
}

struct GnCheckRecord {
    double lhs;
    double rhs;
    bool holds;
};

/// Gagliardo-Nirenberg inequality 2 P(|u|,|v|) <= kopt ||.||^{k+2} ||d/dx .||^k.
inline GnCheckRecord gn_check(const ModelParams& params, const FieldPair& pair, double kopt) {
    params.validate();
    pair.validate();
    if (!(kopt > 0)) throw ValidationError("gn_check: kopt must be positive");
    FieldPair abs_pair = pair;
    for (auto& x : abs_pair.u) x = std::fabs(x);
    for (auto& x : abs_pair.v) x = std::fabs(x);
    GnCheckRecord r;
    r.lhs = 2.0 * hamiltonian_integral(params, abs_pair);
    const double l2 = std::sqrt(l2_norm_sq(pair));
    const double gr = std::sqrt(grad_norm_sq(pair));
    r.rhs = kopt * std::pow(l2, params.k + 2) * std::pow(gr, params.k);
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-8);
    return r;
}

} // namespace gkdv
