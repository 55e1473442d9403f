#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gkdv/model.hpp"
#include "gkdv/types.hpp"

namespace gkdv {

/// A critical direction on the quarter unit circle.
struct DirectionPoint {
    double x0;
    double y0;
    double theta;
    double f_value;
    double lagrange_residual;
};

/// The numerical maximizer set Y of F on the quarter circle.
struct MaximizerSet {
    std::vector<DirectionPoint> points; ///< sorted by theta
    double f_max;
    std::size_t multiplicity;
};

inline double f_on_circle(const ModelParams& p, double theta) {
    return eval_density(p, std::cos(theta), std::sin(theta)).F;
}

/// Max-norm residual of the constrained stationarity system at a point of
/// the quarter circle, with the multiplier eliminated via its known value
/// theta_L = (k+1) F(x0,y0).
inline double lagrange_residual(const ModelParams& p, const DirectionPoint& point) {
    auto rec = eval_density(p, point.x0, point.y0);
    const double theta_l = (p.k + 1) * rec.F;
    const double rx = (p.k + 1) * rec.f - theta_l * point.x0;
    const double ry = (p.k + 1) * rec.g - theta_l * point.y0;
    return std::max(std::fabs(rx), std::fabs(ry));
}

inline DirectionPoint make_direction_point(const ModelParams& p, double theta) {
    DirectionPoint pt;
    pt.theta = theta;
    pt.x0 = std::cos(theta);
    pt.y0 = std::sin(theta);
    pt.f_value = eval_density(p, pt.x0, pt.y0).F;
    pt.lagrange_residual = lagrange_residual(p, pt);
    return pt;
}

namespace detail {

/// Golden-section refinement of a local maximum bracketed by [lo, hi].
inline double golden_max(const ModelParams& p, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f_on_circle(p, x1);
    double f2 = f_on_circle(p, x2);
    while (b - a > 1e-12) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f_on_circle(p, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f_on_circle(p, x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

/// Maximizes F(x,y) = (2k+2) H(x,y) over the quarter unit circle by a dense
/// theta scan plus golden-section refinement of each local-maximum bracket.
/// Near-ties within 1e-9*(1+f_max) are kept and clustered (radius 1e-6).
inline MaximizerSet maximize_f(const ModelParams& params, std::size_t scan_points = 2048) {
    params.validate();
    if (scan_points < 256) throw ValidationError("maximize_f: scan_points must be >= 256");

    const double half_pi = std::numbers::pi / 2.0;
    const double h = half_pi / static_cast<double>(scan_points);
    std::vector<double> theta(scan_points + 1), val(scan_points + 1);
    for (std::size_t i = 0; i <= scan_points; ++i) {
        theta[i] = std::min(half_pi, h * static_cast<double>(i));
        val[i] = f_on_circle(params, theta[i]);
    }

    // candidates: both boundaries plus every refined interior local maximum
    std::vector<double> candidates{0.0, half_pi};
    for (std::size_t i = 1; i < scan_points; ++i) {
        if (val[i] >= val[i - 1] && val[i] >= val[i + 1])
            candidates.push_back(detail::golden_max(params, theta[i - 1], theta[i + 1]));
    }

    double best = -1.0;
    for (double t : candidates) best = std::max(best, f_on_circle(params, t));

    std::sort(candidates.begin(), candidates.end());
    const double band = 1e-9 * (1.0 + best);
    std::vector<DirectionPoint> pts;
    for (double t : candidates) {
        if (f_on_circle(params, t) < best - band) continue;
        if (!pts.empty() && std::fabs(t - pts.back().theta) < 1e-6) continue; // cluster merge
        pts.push_back(make_direction_point(params, t));
    }

    MaximizerSet set;
    set.points = std::move(pts);
    set.f_max = best;
    set.multiplicity = set.points.size();
    return set;
}

enum class RegimeCase {
    axes,               ///< ground states (alpha Q, 0) and (0, alpha Q)
    axes_and_diagonal,  ///< threshold tie: axes plus the diagonal
    diagonal,           ///< unique diagonal ground state, k > 2
    unique_diagonal_k2, ///< unique diagonal ground state, k = 2 family
};

inline std::string to_string(RegimeCase c) {
    switch (c) {
    case RegimeCase::axes: return "axes";
    case RegimeCase::axes_and_diagonal: return "axes_and_diagonal";
    case RegimeCase::diagonal: return "diagonal";
    case RegimeCase::unique_diagonal_k2: return "unique_diagonal_k2";
    }
    return "?";
}

struct RegimeClassification {
    RegimeCase regime;
    std::vector<DirectionPoint> predicted_directions; ///< sorted by theta
};

/// Classifies the ground-state regime for the two closed-form parameter
/// families (k = 2 with a = c = d, and k > 2 with c = d = gamma*a).
inline RegimeClassification classify_regime(const ModelParams& params) {
    params.validate();
    const double half_pi = std::numbers::pi / 2.0;
    RegimeClassification out;

    if (params.k == 2 && params.a > 0 && params.b > 0 && params.a == params.c &&
        params.c == params.d) {
        out.regime = RegimeCase::unique_diagonal_k2;
        out.predicted_directions = {make_direction_point(params, half_pi / 2.0)};
        return out;
    }

    if (params.k > 2 && params.a > 0 && params.b > 0 && params.c == params.d) {
        const double gamma = params.c / params.a;
        if (gamma > 0 && (params.k % 2 != 0 || gamma >= ipow(2.0, params.k - 1) - params.k / 2.0))
            throw ValidationError(
                "classify_regime: gamma > 0 requires k even and gamma < 2^{k-1} - k/2");
        const double threshold =
            params.a * (ipow(2.0, params.k) - 1.0 - 2.0 * gamma * (params.k + 1) / params.k);
        const double tol = 1e-12 * (std::fabs(threshold) + std::fabs(params.b));
        if (std::fabs(threshold - params.b) <= tol) {
            out.regime = RegimeCase::axes_and_diagonal;
            out.predicted_directions = {make_direction_point(params, 0.0),
                                        make_direction_point(params, half_pi / 2.0),
                                        make_direction_point(params, half_pi)};
        } else if (threshold > params.b) {
            out.regime = RegimeCase::axes;
            out.predicted_directions = {make_direction_point(params, 0.0),
                                        make_direction_point(params, half_pi)};
        } else {
            out.regime = RegimeCase::diagonal;
            out.predicted_directions = {make_direction_point(params, half_pi / 2.0)};
        }
        return out;
    }

    throw ValidationError("classify_regime: unclassified; use maximize_f directly");
}

/// All positive roots of a p(r) - b r^{k-1} - a gamma (r^2+1) r^{k-2} = 0,
/// p(r) = r^{2k-2} + r^{2k-4} + ... + 1, located by sign-change bracketing
/// on a log-spaced grid and bisection. The factored diagonal root r = 1 is
/// excluded.
inline std::vector<double> interior_roots(const ModelParams& params) {
    params.validate();
    if (params.k <= 2 || params.c != params.d)
        throw ValidationError("interior_roots: expects a k > 2 family with c = d");
    const double gamma = params.a > 0 ? params.c / params.a : 0.0;

    auto eval = [&](double r) {
        double p = 0.0;
        for (int j = 0; j < params.k; ++j) p += ipow(r, 2 * j);
        return params.a * p - params.b * ipow(r, params.k - 1) -
               params.a * gamma * (r * r + 1.0) * ipow(r, params.k - 2);
    };

    constexpr std::size_t brackets = 10000;
    const double lo = 1e-6, hi = 1e6;
    const double step = std::pow(hi / lo, 1.0 / static_cast<double>(brackets));
    std::vector<double> roots;
    double r0 = lo, e0 = eval(r0);
    for (std::size_t i = 0; i < brackets; ++i) {
        double r1 = r0 * step, e1 = eval(r1);
        if (e0 == 0.0 || e0 * e1 < 0.0) {
            double a = r0, b = r1;
            while (b - a > 1e-12 * std::max(1.0, a)) {
                double m = 0.5 * (a + b);
                if (eval(a) * eval(m) <= 0.0)
                    b = m;
                else
                    a = m;
            }
            double root = 0.5 * (a + b);
            if (std::fabs(root - 1.0) > 1e-6) roots.push_back(root);
        }
        r0 = r1;
        e0 = e1;
    }
    return roots;
}

/// Maps an interior root r to its direction on the quarter circle.
inline DirectionPoint root_direction(const ModelParams& params, double r) {
    return make_direction_point(params, std::atan2(1.0, r));
}

} // namespace gkdv
