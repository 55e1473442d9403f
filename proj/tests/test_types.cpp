#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "gkdv/fourier.hpp"
#include "gkdv/types.hpp"

using namespace gkdv;

TEST_CASE("ipow conventions") {
    CHECK(ipow(0.0, 0) == 1.0);
    CHECK(ipow(2.0, 10) == 1024.0);
    CHECK(ipow(-3.0, 3) == -27.0);
}

TEST_CASE("ModelParams validation") {
    ModelParams p{2, 1.0, 4.0, 1.0, 1.0, 1};
    CHECK_NOTHROW(p.validate());
    CHECK_THROWS_AS((ModelParams{0, 1, 0, 0, 0, 1}.validate()), ValidationError);
    CHECK_THROWS_AS((ModelParams{2, -1, 0, 0, 0, 1}.validate()), ValidationError);
    CHECK_THROWS_AS((ModelParams{2, 0, 0, 0, 0, 1}.validate()), ValidationError);
    CHECK_THROWS_AS((ModelParams{2, 1, 0, 0, 0, 2}.validate()), ValidationError);
}

TEST_CASE("Grid validation and geometry") {
    Grid g{256, 32.0};
    CHECK_NOTHROW(g.validate());
    CHECK_THROWS_AS((Grid{100, 32.0}.validate()), ValidationError); // not a power of two
    CHECK_THROWS_AS((Grid{8, 32.0}.validate()), ValidationError);   // too small
    CHECK_THROWS_AS((Grid{256, 0.0}.validate()), ValidationError);

    CHECK(g.dx() == Catch::Approx(0.125));
    const auto x = g.points();
    CHECK(x.front() == Catch::Approx(-16.0));
    CHECK(x[128] == Catch::Approx(0.0).margin(1e-15));

    const auto xi = g.wavenumbers();
    const double base = 2.0 * std::numbers::pi / 32.0;
    CHECK(xi[0] == 0.0);
    CHECK(xi[1] == Catch::Approx(base));
    CHECK(xi[255] == Catch::Approx(-base));
    // Nyquist appears exactly once, as the most negative mode
    CHECK(xi[128] == Catch::Approx(-128.0 * base));
    int nyquist_count = 0;
    for (double v : xi)
        if (std::fabs(std::fabs(v) - 128.0 * base) < 1e-12) ++nyquist_count;
    CHECK(nyquist_count == 1);
}

TEST_CASE("FieldPair validation") {
    Grid g{64, 16.0};
    FieldPair p(g);
    CHECK_NOTHROW(p.validate());
    CHECK_THROWS_AS(FieldPair(g, std::vector<double>(63, 0.0), std::vector<double>(64, 0.0)),
                    ValidationError);
    p.u[5] = std::nan("");
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("integrate constant") {
    Grid g{64, 16.0};
    std::vector<double> f(64, 3.0);
    CHECK(integrate(f, g) == Catch::Approx(48.0));
}

TEST_CASE("fft round trip") {
    Grid g{128, 10.0};
    std::mt19937 rng(7);
    std::normal_distribution<double> dist;
    std::vector<double> f(g.n);
    for (auto& x : f) x = dist(rng);
    const auto back = ifft_real(fft(f));
    for (std::size_t j = 0; j < g.n; ++j) CHECK(back[j] == Catch::Approx(f[j]).margin(1e-12));
}

TEST_CASE("spectral derivative of a pure mode is exact") {
    Grid g{128, 2.0 * std::numbers::pi};
    const auto x = g.points();
    std::vector<double> f(g.n);
    for (std::size_t j = 0; j < g.n; ++j) f[j] = std::sin(3.0 * x[j]);
    const auto d1 = spectral_derivative(f, g, 1);
    const auto d2 = spectral_derivative(f, g, 2);
    for (std::size_t j = 0; j < g.n; ++j) {
        CHECK(d1[j] == Catch::Approx(3.0 * std::cos(3.0 * x[j])).margin(1e-10));
        CHECK(d2[j] == Catch::Approx(-9.0 * std::sin(3.0 * x[j])).margin(1e-9));
    }
}

TEST_CASE("spectral shift: exact for band-limited data, grid rotation for delta = dx") {
    Grid g{128, 2.0 * std::numbers::pi};
    const auto x = g.points();
    std::vector<double> f(g.n);
    for (std::size_t j = 0; j < g.n; ++j) f[j] = std::cos(5.0 * x[j]) + 0.3 * std::sin(2.0 * x[j]);
    const double delta = 0.4321;
    const auto shifted = spectral_shift(f, g, delta);
    for (std::size_t j = 0; j < g.n; ++j)
        CHECK(shifted[j] ==
              Catch::Approx(std::cos(5.0 * (x[j] - delta)) + 0.3 * std::sin(2.0 * (x[j] - delta)))
                  .margin(1e-10));

    const auto rot = spectral_shift(f, g, g.dx());
    for (std::size_t j = 0; j < g.n; ++j)
        CHECK(rot[j] == Catch::Approx(f[(j + g.n - 1) % g.n]).margin(1e-10));
}

TEST_CASE("derivative norm squared matches Parseval oracle") {
    Grid g{256, 20.0};
    const auto x = g.points();
    std::vector<double> f(g.n);
    for (std::size_t j = 0; j < g.n; ++j) f[j] = std::exp(-x[j] * x[j]);
    // oracle: quadrature of the analytic derivative -2x e^{-x^2}
    std::vector<double> d(g.n);
    for (std::size_t j = 0; j < g.n; ++j) d[j] = -2.0 * x[j] * std::exp(-x[j] * x[j]);
    double oracle = 0.0;
    for (double y : d) oracle += y * y;
    oracle *= g.dx();
    CHECK(derivative_norm_sq(f, g) == Catch::Approx(oracle).epsilon(1e-10));
}
