#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "gkdv/fourier.hpp"
#include "gkdv/groundstate.hpp"
#include "gkdv/model.hpp"
#include "gkdv/types.hpp"

namespace gkdv {

struct EvolveOptions {
    double dt = 1e-3;
    double t_end = 1.0;
    double dealias = 2.0 / 3.0; ///< fraction of retained modes
    int filter_order = 36;      ///< exponential filter order at the dealias edge
    int record_every = 10;      ///< steps between monitor samples

    void validate() const {
        if (!(dt > 0)) throw ValidationError("EvolveOptions: dt must be positive");
        if (!(t_end > 0)) throw ValidationError("EvolveOptions: t_end must be positive");
        if (!(dealias > 0) || dealias > 1.0)
            throw ValidationError("EvolveOptions: dealias must lie in (0, 1]");
        if (filter_order < 4 || filter_order % 2 != 0)
            throw ValidationError("EvolveOptions: filter_order must be even and >= 4");
        if (record_every < 1) throw ValidationError("EvolveOptions: record_every must be >= 1");
    }
};

struct MonitorSample {
    double t;
    double mass;
    double energy;
    double g; ///< G(t) = squared L2 norm of the spatial gradient
};

struct Trajectory {
    FieldPair final_pair;
    std::vector<MonitorSample> monitors;
    bool blew_up = false;
    double blow_up_time = 0.0; ///< time of the last healthy state when blew_up
};

namespace detail {

using cvec = std::vector<std::complex<double>>;

struct Stepper {
    const ModelParams& params;
    Grid grid;
    std::vector<double> xi;
    cvec e1, e2;       ///< integrating factor over dt/2 and dt
    std::vector<double> mask; ///< dealias cutoff times exponential filter
    double dt;

    Stepper(const ModelParams& p, const Grid& g, double dt_, double dealias, int filter_order)
        : params(p), grid(g), xi(g.wavenumbers()), dt(dt_) {
        const std::size_t n = g.n;
        e1.resize(n);
        e2.resize(n);
        mask.assign(n, 0.0);
        const double xi_max = *std::max_element(xi.begin(), xi.end());
        const double xi_cut = dealias * (xi_max + 2.0 * std::numbers::pi / g.length);
        for (std::size_t j = 0; j < n; ++j) {
            // linear group: d/dt u_hat = i xi^3 u_hat
            const double phase = xi[j] * xi[j] * xi[j] * dt / 2.0;
            e1[j] = std::polar(1.0, phase);
            e2[j] = e1[j] * e1[j];
            const double r = std::fabs(xi[j]) / xi_cut;
            if (r <= 1.0) mask[j] = std::exp(-36.0 * std::pow(r, filter_order));
        }
    }

    /// Transformed nonlinearity -mu d/dx (f, g), dealiased and filtered.
    void nonlinear(const cvec& uh, const cvec& vh, cvec& nu, cvec& nv) const {
        const std::size_t n = grid.n;
        const auto u = ifft_real(uh);
        const auto v = ifft_real(vh);
        std::vector<double> fu(n), gv(n);
        for (std::size_t j = 0; j < n; ++j) {
            fu[j] = nonlinearity_f(params, u[j], v[j]);
            gv[j] = nonlinearity_g(params, u[j], v[j]);
        }
        nu = fft(fu);
        nv = fft(gv);
        const double mu = static_cast<double>(params.mu);
        for (std::size_t j = 0; j < n; ++j) {
            const std::complex<double> ik(0.0, xi[j]);
            nu[j] *= -mu * ik * mask[j];
            nv[j] *= -mu * ik * mask[j];
        }
    }

    /// One integrating-factor RK4 step of both components.
    void step(cvec& uh, cvec& vh) const {
        const std::size_t n = grid.n;
        cvec au(n), av(n), bu(n), bv(n), cu(n), cv(n), du(n), dv(n), tu(n), tv(n);

        nonlinear(uh, vh, au, av);
        for (std::size_t j = 0; j < n; ++j) {
            tu[j] = e1[j] * (uh[j] + 0.5 * dt * au[j]);
            tv[j] = e1[j] * (vh[j] + 0.5 * dt * av[j]);
        }
        nonlinear(tu, tv, bu, bv);
        for (std::size_t j = 0; j < n; ++j) {
            tu[j] = e1[j] * uh[j] + 0.5 * dt * bu[j];
            tv[j] = e1[j] * vh[j] + 0.5 * dt * bv[j];
        }
        nonlinear(tu, tv, cu, cv);
        for (std::size_t j = 0; j < n; ++j) {
            tu[j] = e2[j] * uh[j] + dt * e1[j] * cu[j];
            tv[j] = e2[j] * vh[j] + dt * e1[j] * cv[j];
        }
        nonlinear(tu, tv, du, dv);
        for (std::size_t j = 0; j < n; ++j) {
            uh[j] = e2[j] * uh[j] +
                    dt / 6.0 * (e2[j] * au[j] + 2.0 * e1[j] * (bu[j] + cu[j]) + du[j]);
            vh[j] = e2[j] * vh[j] +
                    dt / 6.0 * (e2[j] * av[j] + 2.0 * e1[j] * (bv[j] + cv[j]) + dv[j]);
        }
    }
};

inline bool healthy(const std::vector<double>& u, const std::vector<double>& v, double g_value) {
    if (!std::isfinite(g_value) || g_value > 1e8) return false;
    for (double x : u)
        if (!std::isfinite(x)) return false;
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace detail

/// Integrates the coupled system d/dt u + u_xxx + mu d/dx f(u,v) = 0 (and
/// the v equation with g) by integrating-factor RK4 in Fourier space,
/// recording mass, energy, and gradient monitors.
inline Trajectory evolve(const ModelParams& params, const FieldPair& pair0,
                         const EvolveOptions& opts) {
    params.validate();
    pair0.validate();
    opts.validate();

    const Grid grid = pair0.grid;
    const std::size_t n = grid.n;
    const auto steps = static_cast<std::int64_t>(std::llround(opts.t_end / opts.dt));
    if (steps < 1) throw ValidationError("evolve: t_end shorter than one step");

    detail::Stepper st(params, grid, opts.dt, opts.dealias, opts.filter_order);
    detail::cvec uh = fft(pair0.u), vh = fft(pair0.v);

    Trajectory traj;
    auto record = [&](double t, const FieldPair& p) {
        const auto fr = functionals(params, p);
        traj.monitors.push_back({t, fr.mass, fr.energy, fr.s - 2.0 * fr.mass});
    };
    record(0.0, pair0);

    FieldPair cur = pair0;
    double t_healthy = 0.0;
    for (std::int64_t i = 1; i <= steps; ++i) {
        st.step(uh, vh);
        const double t = static_cast<double>(i) * opts.dt;
        const bool sample = (i % opts.record_every == 0) || i == steps;
        if (sample) {
            FieldPair p(grid);
            p.u = ifft_real(uh);
            p.v = ifft_real(vh);
            double g_value = 0.0;
            bool finite = true;
            for (std::size_t j = 0; j < n; ++j)
                if (!std::isfinite(p.u[j]) || !std::isfinite(p.v[j])) finite = false;
            if (finite) g_value = grad_norm_sq(p);
            if (!finite || !detail::healthy(p.u, p.v, g_value)) {
                traj.blew_up = true;
                traj.blow_up_time = t_healthy;
                traj.final_pair = cur;
                return traj;
            }
            record(t, p);
            cur = std::move(p);
            t_healthy = t;
        }
    }
    traj.final_pair = cur;
    return traj;
}

/// Maximum relative L2 distance between the evolved ground state and the
/// exactly shifted solitary-wave profile (phi(x - w t), psi(x - w t)).
inline double traveling_wave_error(const ModelParams& params, double omega,
                                   const GroundStateProfile& gs, const EvolveOptions& opts) {
    params.validate();
    opts.validate();
    if (params.mu != 1) throw ValidationError("traveling_wave_error: requires mu = +1");

    const Grid grid = gs.pair.grid;
    const auto steps = static_cast<std::int64_t>(std::llround(opts.t_end / opts.dt));
    detail::Stepper st(params, grid, opts.dt, opts.dealias, opts.filter_order);
    detail::cvec uh = fft(gs.pair.u), vh = fft(gs.pair.v);

    const double ref_norm = std::sqrt(l2_norm_sq(gs.pair));
    double worst = 0.0;
    auto measure = [&](double t) {
        FieldPair p(grid);
        p.u = ifft_real(uh);
        p.v = ifft_real(vh);
        p.validate();
        const auto ru = spectral_shift(gs.pair.u, grid, omega * t);
        const auto rv = spectral_shift(gs.pair.v, grid, omega * t);
        double s = 0.0;
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double eu = p.u[j] - ru[j], ev = p.v[j] - rv[j];
            s += eu * eu + ev * ev;
        }
        worst = std::max(worst, std::sqrt(s * grid.dx()) / ref_norm);
    };
    for (std::int64_t i = 1; i <= steps; ++i) {
        st.step(uh, vh);
        if (i % opts.record_every == 0 || i == steps)
            measure(static_cast<double>(i) * opts.dt);
    }
    return worst;
}

struct GwpReport {
    double A;          ///< 2 E(u0, v0)
    double B;          ///< K_opt ||(u0,v0)||^{k+2}
    double m;          ///< k/2
    double gamma_trap; ///< (B m)^{-1/(m-1)}, the Lemma 2.5 trap level
    bool hip1_holds;
    bool hip2_holds;
    std::vector<MonitorSample> g_trace;
    bool trapped;       ///< G stayed strictly below gamma_trap throughout
    bool threshold_needed = true; ///< false for k < 2 (informational)
};

/// Checks whether G(0) < gamma_trap, the side of hip2 used in the trap;
/// exposed separately so the equivalence with hip2 can be cross-checked.
inline bool g0_below_trap(const ModelParams& params, const FieldPair& pair0,
                          const GroundStateProfile& gs1) {
    const int k = params.k;
    const double kopt = sharp_constant(params, gs1);
    const double b_coef = kopt * std::pow(std::sqrt(l2_norm_sq(pair0)), k + 2);
    const double m = k / 2.0;
    if (k == 2) { // degenerate: the trap reads B < 2, i.e. ||u0|| < ||(Phi,Psi)||
        return b_coef < 2.0;
    }
    const double gamma_trap = std::pow(b_coef * m, -1.0 / (m - 1.0));
    return grad_norm_sq(pair0) < gamma_trap;
}

/// The Theorem 1.4 global-existence trap: hypotheses hip1/hip2, the trap
/// level gamma_trap, and the monitored claim G(t) < gamma_trap.
inline GwpReport gwp_monitor(const ModelParams& params, const FieldPair& pair0,
                             const GroundStateProfile& gs1, const EvolveOptions& opts) {
    params.validate();
    pair0.validate();
    if (params.mu != 1) throw ValidationError("gwp_monitor: requires mu = +1");

    GwpReport rep;
    const int k = params.k;
    if (k < 2) {
        rep = GwpReport{};
        rep.threshold_needed = false; // no smallness needed below the critical power
        rep.hip1_holds = rep.hip2_holds = rep.trapped = true;
        rep.m = k / 2.0;
        const auto traj = evolve(params, pair0, opts);
        rep.g_trace = traj.monitors;
        rep.A = 2.0 * traj.monitors.front().energy;
        rep.B = 0.0;
        rep.gamma_trap = 0.0;
        return rep;
    }

    const auto fr0 = functionals(params, pair0);
    const auto frg = functionals(params, gs1.pair); // mu = +1 normalization
    const double kopt = sharp_constant(params, gs1);
    const double n0 = std::sqrt(2.0 * fr0.mass), ng = std::sqrt(2.0 * frg.mass);
    const double d0 = std::sqrt(grad_norm_sq(pair0)), dg = std::sqrt(grad_norm_sq(gs1.pair));

    rep.A = 2.0 * fr0.energy;
    rep.B = kopt * std::pow(n0, k + 2);
    rep.m = k / 2.0;
    if (k == 2) {
        rep.gamma_trap = std::numeric_limits<double>::infinity(); // criterion degenerates
        rep.hip1_holds = n0 < ng;
        rep.hip2_holds = rep.hip1_holds;
    } else {
        rep.gamma_trap = std::pow(rep.B * rep.m, -1.0 / (rep.m - 1.0));
        rep.hip1_holds = std::pow(fr0.mass, k + 2) * std::pow(fr0.energy, k - 2) <
                         std::pow(frg.mass, k + 2) * std::pow(frg.energy, k - 2);
        rep.hip2_holds = std::pow(d0, k - 2) * std::pow(n0, k + 2) <
                         std::pow(dg, k - 2) * std::pow(ng, k + 2);
    }

    const auto traj = evolve(params, pair0, opts);
    rep.g_trace = traj.monitors;
    rep.trapped = !traj.blew_up;
    if (k == 2) {
        if (!(rep.B < 2.0)) rep.trapped = false;
    } else {
        const bool below0 = rep.g_trace.front().g < rep.gamma_trap;
        for (const auto& s : rep.g_trace)
            if ((s.g < rep.gamma_trap) != below0) rep.trapped = false;
    }
    return rep;
}

struct DeviationSample {
    double t;
    double mass;
    double energy;
    double g;
    double d; ///< shift-minimized H1 distance to the solitary profile
};

namespace detail {

/// Shift-minimized H1xH1 distance between a state and the reference
/// profile: coarse search by cross-correlation argmax, then quadratic
/// refinement to a continuum shift.
inline double h1_deviation(const FieldPair& state, const GroundStateProfile& gs) {
    const Grid& grid = state.grid;
    const std::size_t n = grid.n;

    // cross-correlation of u against phi plus v against psi, via FFT
    auto sh = fft(state.u);
    auto gh = fft(gs.pair.u);
    auto svh = fft(state.v);
    auto gvh = fft(gs.pair.v);
    cvec prod(n);
    for (std::size_t j = 0; j < n; ++j)
        prod[j] = sh[j] * std::conj(gh[j]) + svh[j] * std::conj(gvh[j]);
    const auto corr = ifft_real(prod);
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (corr[j] > corr[best]) best = j;

    auto dist_at = [&](double delta) {
        const auto ru = spectral_shift(gs.pair.u, grid, delta);
        const auto rv = spectral_shift(gs.pair.v, grid, delta);
        FieldPair diff(grid);
        for (std::size_t j = 0; j < n; ++j) {
            diff.u[j] = state.u[j] - ru[j];
            diff.v[j] = state.v[j] - rv[j];
        }
        return std::sqrt(l2_norm_sq(diff) + grad_norm_sq(diff));
    };

    const double dx = grid.dx();
    double delta0 = static_cast<double>(best) * dx;
    if (delta0 > 0.5 * grid.length) delta0 -= grid.length;

    // quadratic refinement of the distance over three bracketing shifts
    double lo = delta0 - dx, hi = delta0 + dx;
    double dl = dist_at(lo), dm = dist_at(delta0), dh = dist_at(hi);
    for (int it = 0; it < 60; ++it) {
        const double denom = dl - 2.0 * dm + dh;
        double cand = delta0;
        if (denom > 0.0) cand = delta0 + 0.5 * (dl - dh) / denom * (hi - delta0);
        cand = std::min(std::max(cand, lo), hi);
        const double dc = dist_at(cand);
        if (dc < dm) {
            delta0 = cand;
            dm = dc;
        }
        const double w = 0.5 * (hi - lo);
        lo = delta0 - 0.5 * w;
        hi = delta0 + 0.5 * w;
        dl = dist_at(lo);
        dh = dist_at(hi);
        if (hi - lo < 1e-10) break;
    }
    return std::min(dm, std::min(dl, dh));
}

} // namespace detail

/// Evolves (1+eps) times the solitary profile and records the
/// shift-minimized H1 deviation d(t). Blow-up before t_end is reported via
/// the escape flag rather than an exception (instability-consistent).
struct InstabilityRun {
    std::vector<DeviationSample> series;
    bool escaped = false;       ///< blow-up detected before t_end
    double escape_time = 0.0;
};

inline InstabilityRun instability_experiment(const ModelParams& params, double omega, double eps,
                                             const GroundStateProfile& gs,
                                             const EvolveOptions& opts) {
    params.validate();
    opts.validate();
    if (!(eps >= 0.0) || eps > 0.05)
        throw ValidationError("instability_experiment: eps must lie in [0, 0.05]");
    (void)omega;

    FieldPair pair0 = gs.pair;
    for (auto& x : pair0.u) x *= 1.0 + eps;
    for (auto& x : pair0.v) x *= 1.0 + eps;

    const Grid grid = gs.pair.grid;
    const auto steps = static_cast<std::int64_t>(std::llround(opts.t_end / opts.dt));
    detail::Stepper st(params, grid, opts.dt, opts.dealias, opts.filter_order);
    detail::cvec uh = fft(pair0.u), vh = fft(pair0.v);

    InstabilityRun run;
    auto record = [&](double t, const FieldPair& p) {
        const auto fr = functionals(params, p);
        run.series.push_back({t, fr.mass, fr.energy, fr.s - 2.0 * fr.mass,
                              detail::h1_deviation(p, gs)});
    };
    record(0.0, pair0);
    for (std::int64_t i = 1; i <= steps; ++i) {
        st.step(uh, vh);
        if (i % opts.record_every != 0 && i != steps) continue;
        const double t = static_cast<double>(i) * opts.dt;
        FieldPair p(grid);
        p.u = ifft_real(uh);
        p.v = ifft_real(vh);
        bool finite = true;
        for (std::size_t j = 0; j < grid.n; ++j)
            if (!std::isfinite(p.u[j]) || !std::isfinite(p.v[j])) finite = false;
        if (!finite || grad_norm_sq(p) > 1e8) {
            run.escaped = true;
            run.escape_time = t;
            return run;
        }
        record(t, p);
    }
    return run;
}

} // namespace gkdv
