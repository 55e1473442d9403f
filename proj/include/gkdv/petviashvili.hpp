#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "gkdv/fourier.hpp"
#include "gkdv/groundstate.hpp"
#include "gkdv/model.hpp"
#include "gkdv/types.hpp"

namespace gkdv {

struct PetviashviliOptions {
    int max_iter = 500;
    double tol = 1e-12;      ///< L-inf difference of successive iterates
    double gamma_exp = 0.0;  ///< 0 means the default (2k+1)/(2k)
    FieldPair init;

    void validate() const {
        if (max_iter < 1) throw ValidationError("PetviashviliOptions: max_iter must be >= 1");
        if (!(tol > 0)) throw ValidationError("PetviashviliOptions: tol must be positive");
        if (gamma_exp != 0.0 && !(gamma_exp > 1.0))
            throw ValidationError("PetviashviliOptions: gamma_exp must exceed 1");
    }
};

struct PetviashviliResult {
    FieldPair pair;
    int iterations;
    double final_m;       ///< stabilization factor at the last step
    double final_change;  ///< L-inf difference of the last two iterates
};

/// Stabilized fixed-point solve of u'' - w u + f(u,v) = 0 (and the v
/// equation) on the Fourier grid: each step applies (w + xi^2)^{-1} to the
/// transformed nonlinearity and renormalizes by a shared factor m^gamma.
inline PetviashviliResult solve_elliptic(const ModelParams& params, double omega, const Grid& grid,
                                         const PetviashviliOptions& opts) {
    params.validate();
    grid.validate();
    opts.validate();
    if (!(omega > 0)) throw ValidationError("solve_elliptic: omega must be positive");
    FieldPair cur = opts.init;
    if (cur.grid != grid) throw ValidationError("solve_elliptic: init grid mismatch");
    cur.validate();
    if (l2_norm_sq(cur) == 0.0) throw ValidationError("solve_elliptic: init is identically zero");
    if (hamiltonian_integral(params, cur) <= p_membership_tol(cur))
        throw ValidationError("solve_elliptic: init outside the cone P > 0");

    const double gamma =
        opts.gamma_exp > 0 ? opts.gamma_exp : (2.0 * params.k + 1.0) / (2.0 * params.k);
    const auto xi = grid.wavenumbers();
    const std::size_t n = grid.n;
    const double dx = grid.dx();

    std::vector<double> fu(n), gv(n);
    PetviashviliResult res;
    for (int it = 1; it <= opts.max_iter; ++it) {
        double num = omega * l2_norm_sq(cur) + grad_norm_sq(cur);
        double den = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            fu[j] = nonlinearity_f(params, cur.u[j], cur.v[j]);
            gv[j] = nonlinearity_g(params, cur.u[j], cur.v[j]);
            den += fu[j] * cur.u[j] + gv[j] * cur.v[j];
        }
        den *= dx;
        if (!(den > 0.0) || !(num / den > 0.0))
            throw NumericalError("solve_elliptic: left the cone P");
        const double m = num / den;
        const double mg = std::pow(m, gamma);

        auto fh = fft(fu);
        auto gh = fft(gv);
        FieldPair next(grid);
        for (std::size_t j = 0; j < n; ++j) {
            const double inv = 1.0 / (omega + xi[j] * xi[j]);
            fh[j] *= mg * inv;
            gh[j] *= mg * inv;
        }
        next.u = ifft_real(fh);
        next.v = ifft_real(gh);

        double change = 0.0, amp = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            change = std::max(change, std::max(std::fabs(next.u[j] - cur.u[j]),
                                               std::fabs(next.v[j] - cur.v[j])));
            amp = std::max(amp, std::max(std::fabs(next.u[j]), std::fabs(next.v[j])));
        }
        cur = std::move(next);
        if (!(amp > 1e-12)) throw NumericalError("solve_elliptic: collapsed to zero");
        if (change < opts.tol) {
            cur.validate();
            res.pair = std::move(cur);
            res.iterations = it;
            res.final_m = m;
            res.final_change = change;
            return res;
        }
    }
    throw NumericalError("solve_elliptic: no convergence");
}

namespace detail {

/// Sub-grid location of the peak of u^2 + v^2 via quadratic refinement of
/// the discrete argmax.
inline double peak_location(const FieldPair& pair) {
    const std::size_t n = pair.grid.n;
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double e = pair.u[j] * pair.u[j] + pair.v[j] * pair.v[j];
        if (e > best_val) {
            best_val = e;
            best = j;
        }
    }
    const double em = pair.u[(best + n - 1) % n] * pair.u[(best + n - 1) % n] +
                      pair.v[(best + n - 1) % n] * pair.v[(best + n - 1) % n];
    const double ep = pair.u[(best + 1) % n] * pair.u[(best + 1) % n] +
                      pair.v[(best + 1) % n] * pair.v[(best + 1) % n];
    const double denom = em - 2.0 * best_val + ep;
    const double frac = denom < 0.0 ? 0.5 * (em - ep) / denom : 0.0;
    const auto x = pair.grid.points();
    return x[best] + frac * pair.grid.dx();
}

inline FieldPair center_at_origin(const FieldPair& pair) {
    const double loc = peak_location(pair);
    FieldPair out(pair.grid);
    out.u = spectral_shift(pair.u, pair.grid, -loc);
    out.v = spectral_shift(pair.v, pair.grid, -loc);
    return out;
}

} // namespace detail

struct CrossCheckRecord {
    double linf_distance; ///< peak-aligned sup distance to the characterized profile
    double i_gap;         ///< |I(numerical) - I(characterized)|
    PetviashviliResult numerical;
    GroundStateProfile characterized;
};

/// Solves the elliptic system from the canonical symmetric sech seed and
/// compares against the closed-form profile along the predicted direction.
inline CrossCheckRecord cross_check(const ModelParams& params, double omega, const Grid& grid,
                                    int max_iter = 500, double tol = 1e-12) {
    params.validate();
    const auto regime = classify_regime(params);
    // symmetric seeds select the diagonal state when it exists; otherwise an axis
    const DirectionPoint& dir = regime.predicted_directions.size() == 1
                                    ? regime.predicted_directions.front()
                                    : regime.predicted_directions.back();

    PetviashviliOptions opts;
    opts.max_iter = max_iter;
    opts.tol = tol;
    opts.init = FieldPair(grid);
    const auto x = grid.points();
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double s = sech(x[j]);
        opts.init.u[j] = s * (dir.x0 > 1e-12 ? 1.0 : 0.0);
        opts.init.v[j] = s * (dir.y0 > 1e-12 ? 1.0 : 0.0);
    }

    CrossCheckRecord rec;
    rec.numerical = solve_elliptic(params, omega, grid, opts);
    rec.characterized = build_ground_state(params, omega, grid, dir);

    const FieldPair num = detail::center_at_origin(rec.numerical.pair);
    const FieldPair ref = detail::center_at_origin(rec.characterized.pair);
    double dist = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j)
        dist = std::max(dist, std::max(std::fabs(num.u[j] - ref.u[j]),
                                       std::fabs(num.v[j] - ref.v[j])));
    rec.linf_distance = dist;

    const auto fn = functionals(params, rec.numerical.pair);
    const auto fc = functionals(params, rec.characterized.pair);
    rec.i_gap = std::fabs(fn.i_action - fc.i_action);
    return rec;
}

} // namespace gkdv
