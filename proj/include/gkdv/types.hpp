#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "gkdv/errors.hpp"

namespace gkdv {

/// Integer power with the convention 0^0 = 1 (polynomial evaluation).
inline double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

/// Physical constants of the coupled system: exponent k, coupling
/// coefficients a..d, and the focusing (+1) / defocusing (-1) sign mu.
struct ModelParams {
    int k = 2;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    int mu = 1;

    void validate() const {
        if (k < 1) throw ValidationError("ModelParams: k must be >= 1");
        if (a < 0 || b < 0 || c < 0 || d < 0)
            throw ValidationError("ModelParams: coefficients a,b,c,d must be nonnegative");
        if (a == 0 && b == 0 && c == 0 && d == 0)
            throw ValidationError("ModelParams: at least one of a,b,c,d must be positive");
        if (mu != 1 && mu != -1) throw ValidationError("ModelParams: mu must be +1 or -1");
    }
};

/// Uniform periodic grid on [-L/2, L/2) with n a power of two.
struct Grid {
    std::size_t n = 0;
    double length = 0.0;

    void validate() const {
        if (n < 16 || (n & (n - 1)) != 0)
            throw ValidationError("Grid: n must be a power of two and >= 16");
        if (!(length > 0.0)) throw ValidationError("Grid: length must be positive");
    }

    double dx() const { return length / static_cast<double>(n); }

    std::vector<double> points() const {
        std::vector<double> x(n);
        const double h = dx();
        for (std::size_t j = 0; j < n; ++j)
            x[j] = -0.5 * length + h * static_cast<double>(j);
        return x;
    }

    /// Fourier wavenumbers 2*pi*m/L in the standard symmetric ordering;
    /// the Nyquist mode appears exactly once (as -n/2).
    std::vector<double> wavenumbers() const {
        std::vector<double> xi(n);
        const double base = 2.0 * std::numbers::pi / length;
        for (std::size_t j = 0; j < n; ++j) {
            const auto m = static_cast<long>(j);
            const long half = static_cast<long>(n) / 2;
            xi[j] = base * static_cast<double>(m < half ? m : m - static_cast<long>(n));
        }
        return xi;
    }

    bool operator==(const Grid&) const = default;
};

/// Sampled real-valued pair (u, v) on a Grid.
struct FieldPair {
    Grid grid;
    std::vector<double> u;
    std::vector<double> v;

    FieldPair() = default;
    explicit FieldPair(const Grid& g)
        : grid(g), u(g.n, 0.0), v(g.n, 0.0) {}
    FieldPair(const Grid& g, std::vector<double> uu, std::vector<double> vv)
        : grid(g), u(std::move(uu)), v(std::move(vv)) {
        if (u.size() != g.n || v.size() != g.n)
            throw ValidationError("FieldPair: component length does not match grid");
    }

    void validate() const {
        grid.validate();
        if (u.size() != grid.n || v.size() != grid.n)
            throw ValidationError("FieldPair: component length does not match grid");
        for (std::size_t j = 0; j < grid.n; ++j)
            if (!std::isfinite(u[j]) || !std::isfinite(v[j]))
                throw ValidationError("FieldPair: non-finite entry");
    }
};

/// Trapezoidal quadrature on the uniform periodic grid (exact for the
/// discretization: all points carry equal weight dx).
inline double integrate(const std::vector<double>& f, const Grid& g) {
    double s = 0.0;
    for (double x : f) s += x;
    return s * g.dx();
}

} // namespace gkdv
