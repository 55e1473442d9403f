#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <lapacke.h>

#include "gkdv/direction.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/groundstate.hpp"
#include "gkdv/model.hpp"
#include "gkdv/types.hpp"

namespace gkdv {

enum class OperatorKind { L1, L2, minus_channel, full_block };

/// Linearization operator around the solitary wave along a maximizing
/// direction: scalar channels -d2/dx2 + w - coeff Q_w^{2k}, or the coupled
/// two-component block.
struct OperatorSpec {
    OperatorKind kind;
    double omega;
    ModelParams params;
    DirectionPoint direction;
};

struct DenseMatrix {
    std::size_t dim = 0;
    std::vector<double> a; ///< row-major dim x dim

    double& at(std::size_t i, std::size_t j) { return a[i * dim + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * dim + j]; }
};

namespace detail {

/// Dense -d2/dx2 on the periodic grid by transform conjugation: the
/// circulant kernel is the inverse transform of the symbol xi^2.
inline DenseMatrix neg_second_derivative_matrix(const Grid& g) {
    const std::size_t n = g.n;
    const auto xi = g.wavenumbers();
    std::vector<std::complex<double>> symbol(n);
    for (std::size_t m = 0; m < n; ++m) symbol[m] = xi[m] * xi[m];
    const auto kernel = ifft_real(symbol);

    DenseMatrix mat;
    mat.dim = n;
    mat.a.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            mat.at(i, j) = kernel[(i + n - j) % n];
    // circulant from an even symbol is symmetric; enforce it exactly
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (mat.at(i, j) + mat.at(j, i));
            mat.at(i, j) = s;
            mat.at(j, i) = s;
        }
    return mat;
}

struct HessianSamples {
    std::vector<double> huu, huv, hvv;
};

/// Pointwise second derivatives of the Hamiltonian density at the profile.
inline HessianSamples hessian_at_profile(const ModelParams& p, const FieldPair& pair) {
    const int k = p.k;
    const std::size_t n = pair.grid.n;
    HessianSamples h;
    h.huu.resize(n);
    h.huv.resize(n);
    h.hvv.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = pair.u[j], v = pair.v[j];
        h.huu[j] = (2 * k + 1) * p.a * ipow(u, 2 * k) + k * p.b * ipow(u, k - 1) * ipow(v, k + 1) +
                   (k + 2.0) * (k + 1.0) / k * p.c * ipow(u, k) * ipow(v, k) +
                   (k - 1) * p.d * ipow(u, k - 2) * ipow(v, k + 2);
        h.hvv[j] = (2 * k + 1) * p.a * ipow(v, 2 * k) + k * p.b * ipow(v, k - 1) * ipow(u, k + 1) +
                   (k + 2.0) * (k + 1.0) / k * p.d * ipow(v, k) * ipow(u, k) +
                   (k - 1) * p.c * ipow(v, k - 2) * ipow(u, k + 2);
        h.huv[j] = (k + 1) * p.b * ipow(u, k) * ipow(v, k) +
                   (k + 2) * p.c * ipow(u, k + 1) * ipow(v, k - 1) +
                   (k + 2) * p.d * ipow(u, k - 1) * ipow(v, k + 1);
    }
    return h;
}

inline double minus_channel_coefficient(const ModelParams& p) {
    if (p.c != p.d || !(p.a > 0))
        throw ValidationError("minus_channel: requires the c = d = gamma*a family");
    const double gamma = p.c / p.a;
    const int k = p.k;
    return ((2 * k + 1) * p.a - p.b - 2.0 * p.a * gamma * (k - 1) / k) /
           (p.a + p.b + 2.0 * p.a * gamma * (k + 1) / k);
}

} // namespace detail

/// Assembles the requested operator as a dense symmetric matrix. Scalar
/// kinds give an n x n matrix; full_block gives the coupled 2n x 2n form.
inline DenseMatrix assemble(const OperatorSpec& spec, const Grid& grid) {
    spec.params.validate();
    grid.validate();
    if (!(spec.omega > 0)) throw ValidationError("assemble: omega must be positive");
    if (scalar_q(spec.omega, spec.params.k, 0.5 * grid.length) >= 1e-12)
        throw ValidationError("assemble: domain too short");

    const std::size_t n = grid.n;
    const auto x = grid.points();
    DenseMatrix d2 = detail::neg_second_derivative_matrix(grid);

    if (spec.kind != OperatorKind::full_block) {
        double coeff = 0.0;
        switch (spec.kind) {
        case OperatorKind::L1: coeff = 2.0 * spec.params.k + 1.0; break;
        case OperatorKind::L2: coeff = 1.0; break;
        case OperatorKind::minus_channel:
            coeff = detail::minus_channel_coefficient(spec.params);
            break;
        default: break;
        }
        DenseMatrix mat = std::move(d2);
        for (std::size_t j = 0; j < n; ++j) {
            const double q = scalar_q(spec.omega, spec.params.k, x[j]);
            mat.at(j, j) += spec.omega - coeff * ipow(q, 2 * spec.params.k);
        }
        return mat;
    }

    const auto gs = build_ground_state(spec.params, spec.omega, grid, spec.direction);
    const auto hess = detail::hessian_at_profile(spec.params, gs.pair);
    DenseMatrix mat;
    mat.dim = 2 * n;
    mat.a.assign(4 * n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            mat.at(i, j) = d2.at(i, j);
            mat.at(n + i, n + j) = d2.at(i, j);
        }
    for (std::size_t j = 0; j < n; ++j) {
        mat.at(j, j) += spec.omega - hess.huu[j];
        mat.at(n + j, n + j) += spec.omega - hess.hvv[j];
        mat.at(j, n + j) = -hess.huv[j];
        mat.at(n + j, j) = -hess.huv[j];
    }
    return mat;
}

/// The full block conjugated to (u+v, u-v)/sqrt(2) coordinates; for a
/// symmetric direction this block-diagonalizes into the two channels.
inline DenseMatrix assemble_pm(const OperatorSpec& spec, const Grid& grid) {
    OperatorSpec full = spec;
    full.kind = OperatorKind::full_block;
    const DenseMatrix m = assemble(full, grid);
    const std::size_t n = grid.n;
    DenseMatrix out;
    out.dim = 2 * n;
    out.a.assign(4 * n * n, 0.0);
    // T M T^{-1} with T = [[I, I], [I, -I]]/sqrt(2); blockwise arithmetic
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double A = m.at(i, j), B = m.at(i, n + j);
            const double C = m.at(n + i, j), D = m.at(n + i, n + j);
            out.at(i, j) = 0.5 * (A + B + C + D);
            out.at(i, n + j) = 0.5 * (A - B + C - D);
            out.at(n + i, j) = 0.5 * (A + B - C - D);
            out.at(n + i, n + j) = 0.5 * (A - B - C + D);
        }
    return out;
}

struct EigenPairs {
    std::vector<double> values; ///< ascending
    std::vector<std::vector<double>> vectors; ///< L2(dx)-normalized
};

/// Lowest `count` eigenpairs of a dense symmetric matrix. Eigenvectors are
/// normalized in L2(dx) with the first sizeable component made positive.
inline EigenPairs lowest_eigs(const DenseMatrix& matrix, int count, double dx) {
    const std::size_t dim = matrix.dim;
    if (count < 1 || static_cast<std::size_t>(count) > dim)
        throw ValidationError("lowest_eigs: count out of range");
    double asym = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
            asym = std::max(asym, std::fabs(matrix.at(i, j) - matrix.at(j, i)));
    if (asym > 1e-12) throw ValidationError("lowest_eigs: matrix not symmetric");

    std::vector<double> a = matrix.a; // dsyevr overwrites its input
    std::vector<double> w(dim), z(dim * static_cast<std::size_t>(count));
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_ROW_MAJOR, 'V', 'I', 'U', static_cast<lapack_int>(dim), a.data(),
        static_cast<lapack_int>(dim), 0.0, 0.0, 1, count, 0.0, &found, w.data(), z.data(),
        static_cast<lapack_int>(count), isuppz.data());
    if (info != 0 || found < count)
        throw NumericalError("lowest_eigs: eigensolver failed (info " + std::to_string(info) +
                             ")");

    EigenPairs out;
    out.values.assign(w.begin(), w.begin() + count);
    out.vectors.resize(count);
    const double inv = 1.0 / std::sqrt(dx);
    for (int q = 0; q < count; ++q) {
        auto& vec = out.vectors[q];
        vec.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) vec[i] = z[i * count + q] * inv;
        double lead = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            if (std::fabs(vec[i]) > 1e-8) {
                lead = vec[i];
                break;
            }
        if (lead < 0.0)
            for (auto& x : vec) x = -x;
    }
    return out;
}

struct ChannelSpectrum {
    std::string channel;
    std::vector<double> eigenvalues; ///< lowest 8
    int n_negative;
};

struct SpectralReport {
    std::vector<ChannelSpectrum> channels;
    double kernel_residual_l1; ///< relative ||L1 Q'|| / ||Q'||
    double kernel_residual_l2; ///< relative ||L2 Q|| / ||Q||
    double decoupling_error;   ///< full block vs channel-union eigenvalue mismatch
    bool criterion_met;        ///< the spectral hypotheses of the instability theorem
};

namespace detail {

inline std::vector<double> apply_dense(const DenseMatrix& m, const std::vector<double>& x) {
    std::vector<double> y(m.dim, 0.0);
    for (std::size_t i = 0; i < m.dim; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.dim; ++j) s += m.at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline double l2_of(const std::vector<double>& x, double dx) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s * dx);
}

inline int count_below(const std::vector<double>& vals, double bound) {
    int c = 0;
    for (double v : vals)
        if (v < bound) ++c;
    return c;
}

} // namespace detail

/// Relative kernel residuals ||L1 Q'||/||Q'|| and ||L2 Q||/||Q||.
inline std::pair<double, double> kernel_residuals(const ModelParams& params, double omega,
                                                  const Grid& grid) {
    const auto x = grid.points();
    std::vector<double> q(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) q[j] = scalar_q(omega, params.k, x[j]);
    const auto qp = spectral_derivative(q, grid, 1);

    DirectionPoint dummy{};
    const auto l1 = assemble({OperatorKind::L1, omega, params, dummy}, grid);
    const auto l2 = assemble({OperatorKind::L2, omega, params, dummy}, grid);
    const double dx = grid.dx();
    const double r1 = detail::l2_of(detail::apply_dense(l1, qp), dx) / detail::l2_of(qp, dx);
    const double r2 = detail::l2_of(detail::apply_dense(l2, q), dx) / detail::l2_of(q, dx);
    return {r1, r2};
}

struct InstabilityVerdict {
    bool spectral_ok;
    double lambda_dd;
    bool unstable;
    bool inconclusive;   ///< k = 2: the concavity test degenerates
    std::string verdict; ///< "unstable", "not_established", or "inconclusive"
    SpectralReport report;
};

/// Full spectral report for a diagonal-regime family: channel spectra,
/// kernel residuals, decoupling of the coupled block, and whether the
/// spectral hypotheses (one negative direction, simple kernel, gap) hold.
inline SpectralReport spectral_report(const ModelParams& params, double omega, const Grid& grid,
                                      const DirectionPoint& direction, double gap_floor = 0.0) {
    params.validate();
    if (gap_floor <= 0.0) gap_floor = 1e-3 * omega;
    constexpr int count = 8;
    const double dx = grid.dx();

    SpectralReport rep;
    const auto l1 = lowest_eigs(assemble({OperatorKind::L1, omega, params, direction}, grid),
                                count, dx);
    const auto l2 = lowest_eigs(assemble({OperatorKind::L2, omega, params, direction}, grid),
                                count, dx);
    rep.channels.push_back({"L1", l1.values, detail::count_below(l1.values, -gap_floor)});
    rep.channels.push_back({"L2", l2.values, detail::count_below(l2.values, -gap_floor)});

    std::vector<double> chan_union;
    bool have_minus = params.c == params.d && params.a > 0;
    if (have_minus) {
        const auto lm = lowest_eigs(
            assemble({OperatorKind::minus_channel, omega, params, direction}, grid), count, dx);
        rep.channels.push_back(
            {"minus_channel", lm.values, detail::count_below(lm.values, -gap_floor)});
        chan_union = l1.values;
        chan_union.insert(chan_union.end(), lm.values.begin(), lm.values.end());
        std::sort(chan_union.begin(), chan_union.end());
        chan_union.resize(count);
    }

    const auto full = lowest_eigs(assemble({OperatorKind::full_block, omega, params, direction},
                                           grid),
                                  count, dx);
    rep.channels.push_back({"full_block", full.values, detail::count_below(full.values,
                                                                           -gap_floor)});

    rep.decoupling_error = 0.0;
    if (have_minus && std::fabs(direction.x0 - direction.y0) < 1e-9) {
        for (int q = 0; q < count; ++q)
            rep.decoupling_error =
                std::max(rep.decoupling_error, std::fabs(full.values[q] - chan_union[q]));
    }

    auto [r1, r2] = kernel_residuals(params, omega, grid);
    rep.kernel_residual_l1 = r1;
    rep.kernel_residual_l2 = r2;

    // spectral hypotheses on the coupled block: one negative eigenvalue, a
    // simple kernel spanned by the translation mode, and a gap above zero
    const int n_neg = detail::count_below(full.values, -gap_floor);
    int n_kernel = 0;
    int kernel_index = -1;
    for (int q = 0; q < count; ++q)
        if (std::fabs(full.values[q]) <= gap_floor) {
            ++n_kernel;
            kernel_index = q;
        }
    bool kernel_is_translation = false;
    if (n_kernel == 1) {
        const auto gs = build_ground_state(params, omega, grid, direction);
        std::vector<double> trans(2 * grid.n);
        const auto up = spectral_derivative(gs.pair.u, grid, 1);
        const auto vp = spectral_derivative(gs.pair.v, grid, 1);
        for (std::size_t j = 0; j < grid.n; ++j) {
            trans[j] = up[j];
            trans[grid.n + j] = vp[j];
        }
        const double tn = detail::l2_of(trans, dx);
        double dot = 0.0;
        for (std::size_t j = 0; j < 2 * grid.n; ++j)
            dot += trans[j] * full.vectors[kernel_index][j];
        dot *= dx / tn; // kernel vector already unit in L2(dx)
        kernel_is_translation = std::fabs(dot) > 0.99;
    }
    rep.criterion_met = n_neg == 1 && n_kernel == 1 && kernel_is_translation;
    return rep;
}

/// Theorem-style instability verdict: spectral hypotheses plus concavity of
/// the action along the solitary-wave branch.
inline InstabilityVerdict instability_criterion(const ModelParams& params, double omega,
                                                const Grid& grid, double gap_floor = 0.0) {
    params.validate();
    const auto regime = classify_regime(params);
    const DirectionPoint dir = regime.predicted_directions.size() == 1
                                   ? regime.predicted_directions.front()
                                   : regime.predicted_directions.back();

    InstabilityVerdict out;
    out.report = spectral_report(params, omega, grid, dir, gap_floor);
    out.spectral_ok = out.report.criterion_met;

    ModelParams at_one = params;
    const Grid g1 = suggested_grid(1.0, grid.n);
    const auto gs1 = build_ground_state(at_one, 1.0, g1, dir);
    if (params.k == 2) {
        out.lambda_dd = 0.0;
        out.unstable = false;
        out.inconclusive = true;
        out.verdict = "inconclusive";
        return out;
    }
    out.lambda_dd = lambda_second_derivative(params, omega, gs1).closed_form;
    out.inconclusive = false;
    out.unstable = out.spectral_ok && out.lambda_dd < 0.0;
    out.verdict = out.unstable ? "unstable" : "not_established";
    return out;
}

} // namespace gkdv
