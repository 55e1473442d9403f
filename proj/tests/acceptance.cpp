// Acceptance gate: one criterion per invocation (argv[1] in 1..10), one
// PASS/FAIL line per criterion on stdout, exit 0 iff the criterion holds.
// Criteria pinned to under-resolved grids are run faithfully and reported
// honestly; a supplementary (non-gating) line shows the same quantity on a
// resolved grid where relevant.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>

#include "gkdv/direction.hpp"
#include "gkdv/evolution.hpp"
#include "gkdv/groundstate.hpp"
#include "gkdv/model.hpp"
#include "gkdv/petviashvili.hpp"
#include "gkdv/spectral.hpp"

using namespace gkdv;

namespace {

constexpr double kQuarter = std::numbers::pi / 4.0;
const ModelParams k2_family{2, 1.0, 4.0, 1.0, 1.0, 1};
const ModelParams k3_family{3, 1.0, 8.0, 0.0, 0.0, 1};
const double kPinnedLength = 64.0 * std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail += (detail.empty() ? "" : "; ") + what + (ok ? " ok" : " FAILED");
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GroundStateProfile gs_of(const ModelParams& p, double theta, double omega = 1.0,
                         std::size_t n = 1024) {
    return build_ground_state(p, omega, suggested_grid(omega, n),
                              make_direction_point(p, theta));
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion1() {
    Outcome out;
    const Grid pinned{1024, kPinnedLength};
    for (const ModelParams* family : {&k2_family, &k3_family}) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rec = cross_check(*family, 1.0, pinned);
        const double elapsed = seconds_since(t0);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "k=%d pinned-grid linf=%.3e (<1e-7)", family->k,
                      rec.linf_distance);
        out.require(rec.linf_distance < 1e-7, buf);
        std::snprintf(buf, sizeof(buf), "k=%d runtime %.1fs (<30s)", family->k, elapsed);
        out.require(elapsed < 30.0, buf);

        const auto resolved = cross_check(*family, 1.0, Grid{1024, 64.0});
        std::printf("  [supplementary] k=%d resolved grid (n=1024, L=64): linf=%.3e\n",
                    family->k, resolved.linf_distance);
    }
    return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion2() {
    Outcome out;
    struct Case {
        ModelParams params;
        RegimeCase expected;
    };
    const Case cases[] = {
        {{3, 1.0, 1.0, 0.0, 0.0, 1}, RegimeCase::axes},
        {{3, 1.0, 7.0, 0.0, 0.0, 1}, RegimeCase::axes_and_diagonal},
        {{3, 1.0, 8.0, 0.0, 0.0, 1}, RegimeCase::diagonal},
        {{2, 1.0, 4.0, 1.0, 1.0, 1}, RegimeCase::unique_diagonal_k2},
    };
    for (const auto& c : cases) {
        const auto regime = classify_regime(c.params);
        const auto set = maximize_f(c.params);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "k=%d b=%g regime=%s", c.params.k, c.params.b,
                      to_string(regime.regime).c_str());
        out.require(regime.regime == c.expected, buf);
        std::snprintf(buf, sizeof(buf), "k=%d b=%g multiplicity %zu vs %zu", c.params.k,
                      c.params.b, set.multiplicity, regime.predicted_directions.size());
        out.require(set.multiplicity == regime.predicted_directions.size(), buf);
        if (set.multiplicity == regime.predicted_directions.size()) {
            double worst = 0.0;
            for (std::size_t i = 0; i < set.multiplicity; ++i)
                worst = std::max(worst, std::fabs(set.points[i].theta -
                                                  regime.predicted_directions[i].theta));
            std::snprintf(buf, sizeof(buf), "k=%d b=%g max dtheta=%.2e (<1e-6)", c.params.k,
                          c.params.b, worst);
            out.require(worst < 1e-6, buf);
        }
    }
    return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion3() {
    Outcome out;
    struct Case {
        ModelParams params;
        double theta;
    };
    const Case cases[] = {
        {k2_family, kQuarter},
        {{3, 1.0, 1.0, 0.0, 0.0, 1}, 0.0},
        {{3, 1.0, 7.0, 0.0, 0.0, 1}, 0.0},
        {{3, 1.0, 7.0, 0.0, 0.0, 1}, kQuarter},
        {k3_family, kQuarter},
    };
    for (const auto& c : cases) {
        const auto gs = gs_of(c.params, c.theta);
        const auto rep = pohozaev_report(c.params, gs.pair);
        double worst = 0.0;
        for (double r : rep.residuals) worst = std::max(worst, r);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "k=%d b=%g theta=%.3f max residual=%.2e (<1e-8)",
                      c.params.k, c.params.b, c.theta, worst);
        out.require(worst < 1e-8, buf);

        const double ratio = grad_norm_sq(gs.pair) / l2_norm_sq(gs.pair);
        const double expect = static_cast<double>(c.params.k) / (c.params.k + 2);
        std::snprintf(buf, sizeof(buf), "k=%d ratio %.12f vs k/(k+2)=%.12f", c.params.k, ratio,
                      expect);
        out.require(std::fabs(ratio - expect) < 1e-8, buf);
    }
    return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion4() {
    Outcome out;
    for (const ModelParams* family : {&k2_family, &k3_family}) {
        const auto gs = gs_of(*family, kQuarter);
        const double kopt = sharp_constant(*family, gs);
        const auto gn = gn_check(*family, gs.pair, kopt);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "k=%d gn lhs/rhs=%.9f (equality to 1e-6)", family->k,
                      gn.lhs / gn.rhs);
        out.require(std::fabs(gn.lhs / gn.rhs - 1.0) < 1e-6, buf);
        const double idres = sharp_constant_identity_residual(*family, gs);
        std::snprintf(buf, sizeof(buf), "k=%d section-4 identity residual=%.2e (<1e-8)",
                      family->k, idres);
        out.require(idres < 1e-8, buf);
    }
    return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion5() {
    Outcome out;
    for (const ModelParams* family : {&k2_family, &k3_family}) {
        const auto gs = gs_of(*family, kQuarter);
        const auto rep = nehari_level_check(*family, gs);
        const double i_gs = functionals(*family, gs.pair).i_action;
        const double lambda_from_i = (2.0 * family->k + 2.0) / family->k * i_gs;
        auto rel = [](double a, double b) { return std::fabs(a - b) / std::fabs(b); };
        char buf[200];
        std::snprintf(buf, sizeof(buf),
                      "k=%d S=%.10f Ptilde=%.10f lambda1=%.10f ((2k+2)/k)I=%.10f", family->k,
                      rep.s_of_gs, rep.p_tilde_of_gs, rep.lambda1, lambda_from_i);
        out.require(rel(rep.s_of_gs, rep.lambda1) < 1e-8 &&
                        rel(rep.p_tilde_of_gs, rep.lambda1) < 1e-8 &&
                        rel(lambda_from_i, rep.lambda1) < 1e-8,
                    buf);
    }
    return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion6() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();

    // faithful pinned configuration (dealias=1: see the release notes on the
    // filter's interaction with this grid)
    const Grid pinned{1024, kPinnedLength};
    const auto gs = build_ground_state(k2_family, 1.0, pinned,
                                       make_direction_point(k2_family, kQuarter));
    EvolveOptions eo;
    eo.dt = 1e-3;
    eo.t_end = 1.0;
    eo.dealias = 1.0;
    eo.record_every = 100;

    const auto traj = evolve(k2_family, gs.pair, eo);
    const auto& m0 = traj.monitors.front();
    const auto& mN = traj.monitors.back();
    const double mass_drift = std::fabs(mN.mass - m0.mass) / m0.mass;
    const double energy_drift =
        std::fabs(mN.energy - m0.energy) / std::max(std::fabs(m0.energy), m0.mass);

    char buf[200];
    std::snprintf(buf, sizeof(buf), "mass drift=%.3e (<1e-8)", mass_drift);
    out.require(mass_drift < 1e-8, buf);
    std::snprintf(buf, sizeof(buf), "energy drift=%.3e (<1e-8, mass-scaled: E(gs)=0 at k=2)",
                  energy_drift);
    out.require(energy_drift < 1e-8, buf);

    const double tw1 = traveling_wave_error(k2_family, 1.0, gs, eo);
    std::snprintf(buf, sizeof(buf), "traveling-wave error=%.3e (<1e-4)", tw1);
    out.require(tw1 < 1e-4, buf);

    EvolveOptions half = eo;
    half.dt = 5e-4;
    half.record_every = 200;
    const double tw2 = traveling_wave_error(k2_family, 1.0, gs, half);
    std::snprintf(buf, sizeof(buf), "dt-halving ratio=%.2f (>=8)", tw1 / tw2);
    out.require(tw1 / tw2 >= 8.0, buf);

    const double elapsed = seconds_since(t0);
    std::snprintf(buf, sizeof(buf), "runtime %.1fs (<120s)", elapsed);
    out.require(elapsed < 120.0, buf);

    // supplementary: the same quantities on a resolved grid
    const auto gs_res = gs_of(k2_family, kQuarter);
    EvolveOptions res = eo;
    res.dealias = 2.0 / 3.0;
    const auto traj_res = evolve(k2_family, gs_res.pair, res);
    const double md_res = std::fabs(traj_res.monitors.back().mass -
                                    traj_res.monitors.front().mass) /
                          traj_res.monitors.front().mass;
    const double twa = traveling_wave_error(k2_family, 1.0, gs_res, res);
    EvolveOptions res_half = res;
    res_half.dt = 5e-4;
    res_half.record_every = 200;
    const double twb = traveling_wave_error(k2_family, 1.0, gs_res, res_half);
    const auto traj_res_half = evolve(k2_family, gs_res.pair, res_half);
    const double md_res_half = std::fabs(traj_res_half.monitors.back().mass -
                                         traj_res_half.monitors.front().mass) /
                               traj_res_half.monitors.front().mass;
    std::printf("  [supplementary] resolved grid (n=1024, L=64): tw=%.3e ratio=%.1f "
                "mass drift dt=1e-3: %.2e, dt=5e-4: %.2e\n",
                twa, twa / twb, md_res, md_res_half);
    return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion7() {
    Outcome out;
    const auto gs1 = gs_of(k3_family, kQuarter);
    FieldPair half = gs1.pair;
    for (auto& v : half.u) v *= 0.5;
    for (auto& v : half.v) v *= 0.5;

    EvolveOptions eo;
    eo.dt = 1e-3;
    eo.t_end = 5.0;
    eo.record_every = 100;
    const auto rep = gwp_monitor(k3_family, half, gs1, eo);

    char buf[160];
    std::snprintf(buf, sizeof(buf), "hip1=%d hip2=%d", rep.hip1_holds ? 1 : 0,
                  rep.hip2_holds ? 1 : 0);
    out.require(rep.hip1_holds && rep.hip2_holds, buf);
    bool below = true;
    for (const auto& s : rep.g_trace) below = below && s.g < rep.gamma_trap;
    std::snprintf(buf, sizeof(buf), "G(t) < gamma_trap=%.4f over [0,5]", rep.gamma_trap);
    out.require(below && rep.trapped, buf);

    std::mt19937_64 rng(20260823);
    std::uniform_real_distribution<double> amp(0.2, 1.6);
    const double ng = std::sqrt(l2_norm_sq(gs1.pair));
    const double dg = std::sqrt(grad_norm_sq(gs1.pair));
    int agree = 0;
    for (int i = 0; i < 100; ++i) {
        FieldPair p = gs1.pair;
        const double s = amp(rng);
        for (auto& v : p.u) v *= s;
        for (auto& v : p.v) v *= s;
        const double n0 = std::sqrt(l2_norm_sq(p)), d0 = std::sqrt(grad_norm_sq(p));
        const bool hip2 = d0 * std::pow(n0, 5) < dg * std::pow(ng, 5);
        if (hip2 == g0_below_trap(k3_family, p, gs1)) ++agree;
    }
    std::snprintf(buf, sizeof(buf), "hip2 <-> G(0)<gamma cross-check %d/100", agree);
    out.require(agree == 100, buf);
    return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion8() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    char buf[200];

    for (int k : {2, 3}) {
        const ModelParams& p = k == 2 ? k2_family : k3_family;
        const auto dir = make_direction_point(p, kQuarter);
        for (double omega : {1.0, 4.0}) {
            const Grid grid = suggested_grid(omega, 2048);
            const auto l1 = lowest_eigs(assemble({OperatorKind::L1, omega, p, dir}, grid), 1,
                                        grid.dx());
            const double expect = -omega * k * (k + 2);
            const double rel = std::fabs(l1.values[0] - expect) / std::fabs(expect);
            std::snprintf(buf, sizeof(buf), "L1 k=%d w=%g eig=%.8f rel err=%.2e (<5e-6)", k,
                          omega, l1.values[0], rel);
            out.require(rel < 5e-6, buf);
        }
        const Grid g1 = suggested_grid(1.0, 2048);
        const auto l2 = lowest_eigs(assemble({OperatorKind::L2, 1.0, p, dir}, g1), 1, g1.dx());
        std::snprintf(buf, sizeof(buf), "L2 k=%d |eig|=%.2e (<5e-7)", k,
                      std::fabs(l2.values[0]));
        out.require(std::fabs(l2.values[0]) < 5e-7, buf);

        const Grid pinned{2048, kPinnedLength};
        const auto [r1, r2] = kernel_residuals(p, 1.0, pinned);
        std::snprintf(buf, sizeof(buf), "kernel residuals k=%d: %.2e, %.2e (<1e-6)", k, r1, r2);
        out.require(r1 < 1e-6 && r2 < 1e-6, buf);
        const auto [s1, s2] = kernel_residuals(p, 1.0, Grid{2048, 64.0});
        std::printf("  [supplementary] k=%d kernel residuals on L=64: %.2e, %.2e\n", k, s1, s2);
    }

    const Grid g1 = suggested_grid(1.0, 2048);
    const auto dir3 = make_direction_point(k3_family, kQuarter);
    const auto lm = lowest_eigs(assemble({OperatorKind::minus_channel, 1.0, k3_family, dir3}, g1),
                                1, g1.dx());
    std::snprintf(buf, sizeof(buf), "minus-channel lowest eig=%.6f (>0)", lm.values[0]);
    out.require(lm.values[0] > 0.0, buf);

    const auto rep = spectral_report(k3_family, 1.0, g1, dir3);
    std::snprintf(buf, sizeof(buf), "decoupling error=%.2e (<1e-8)", rep.decoupling_error);
    out.require(rep.decoupling_error < 1e-8, buf);

    const double elapsed = seconds_since(t0);
    std::snprintf(buf, sizeof(buf), "runtime %.1fs (<300s)", elapsed);
    out.require(elapsed < 300.0, buf);
    return out;
}

// ---------------------------------------------------------------- criterion 9
Outcome criterion9() {
    Outcome out;
    char buf[160];
    for (double omega : {1.0, 4.0}) {
        const auto v = instability_criterion(k3_family, omega, suggested_grid(omega, 1024));
        std::snprintf(buf, sizeof(buf), "k=3 w=%g verdict=%s lambda''=%.6f", omega,
                      v.verdict.c_str(), v.lambda_dd);
        out.require(v.unstable, buf);
    }
    const auto v2 = instability_criterion(k2_family, 1.0, suggested_grid(1.0, 1024));
    std::snprintf(buf, sizeof(buf), "k=2 verdict=%s |lambda''|=%.2e (<1e-10)",
                  v2.verdict.c_str(), std::fabs(v2.lambda_dd));
    out.require(v2.inconclusive && std::fabs(v2.lambda_dd) < 1e-10, buf);
    // closed form at k=2 vanishes identically; verify through the library too
    const auto gs2 = gs_of(k2_family, kQuarter, 1.0, 2048);
    const auto l2 = lambda_second_derivative(k2_family, 1.0, gs2);
    std::snprintf(buf, sizeof(buf), "k=2 closed form=%.2e (<1e-10)",
                  std::fabs(l2.closed_form));
    out.require(std::fabs(l2.closed_form) < 1e-10, buf);

    const auto gs3 = gs_of(k3_family, kQuarter, 1.0, 2048);
    const auto l3 = lambda_second_derivative(k3_family, 1.0, gs3);
    const double rel = std::fabs(l3.finite_difference - l3.closed_form) /
                       std::fabs(l3.closed_form);
    std::snprintf(buf, sizeof(buf), "k=3 closed=%.8f fd=%.8f rel=%.2e (<1e-5)", l3.closed_form,
                  l3.finite_difference, rel);
    out.require(rel < 1e-5, buf);
    return out;
}

// --------------------------------------------------------------- criterion 10
Outcome criterion10() {
    Outcome out;
    char buf[200];

    // perturbed supercritical run: deviation must grow past 10 d(0)
    const auto gs3 = gs_of(k3_family, kQuarter);
    EvolveOptions eo;
    eo.dt = 1e-4;
    eo.t_end = 0.3;
    eo.record_every = 100;
    const auto run = instability_experiment(k3_family, 1.0, 0.01, gs3, eo);
    const double d0 = run.series.front().d;
    double max_ratio = 0.0;
    for (const auto& s : run.series) max_ratio = std::max(max_ratio, s.d / d0);
    const bool grew = max_ratio > 10.0 || run.escaped;
    std::snprintf(buf, sizeof(buf), "k=3 eps=0.01 max d/d0=%.1f escaped=%d (>10)", max_ratio,
                  run.escaped ? 1 : 0);
    out.require(grew, buf);

    // subcritical control stays bounded over a long window
    ModelParams scalar{1, 1.0, 0.0, 0.0, 0.0, 1};
    const auto gs1 = build_ground_state(scalar, 1.0, suggested_grid(1.0),
                                        make_direction_point(scalar, 0.0));
    EvolveOptions ctl;
    ctl.dt = 1e-4;
    ctl.t_end = 10.0;
    ctl.record_every = 1000;
    const auto control = instability_experiment(scalar, 1.0, 0.01, gs1, ctl);
    const double c0 = control.series.front().d;
    double c_ratio = 0.0;
    for (const auto& s : control.series) c_ratio = std::max(c_ratio, s.d / c0);
    std::snprintf(buf, sizeof(buf), "k=1 control max d/d0=%.2f over [0,10] (<3)", c_ratio);
    out.require(!control.escaped && c_ratio < 3.0, buf);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
        return 2;
    }
    const int which = std::atoi(argv[1]);
    Outcome out;
    switch (which) {
    case 1: out = criterion1(); break;
    case 2: out = criterion2(); break;
    case 3: out = criterion3(); break;
    case 4: out = criterion4(); break;
    case 5: out = criterion5(); break;
    case 6: out = criterion6(); break;
    case 7: out = criterion7(); break;
    case 8: out = criterion8(); break;
    case 9: out = criterion9(); break;
    case 10: out = criterion10(); break;
    default: std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n"); return 2;
    }
    std::printf("CRITERION %d: %s — %s\n", which, out.pass ? "PASS" : "FAIL",
                out.detail.c_str());
    return out.pass ? 0 : 1;
}
