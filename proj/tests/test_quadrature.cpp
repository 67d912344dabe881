#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polariton/quadrature.hpp"

using namespace polariton;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    const Rule1D rule = gauss_legendre_rule(6, -1.0, 2.0);
    // x^11 over [-1, 2]: (2^12 - 1)/12
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
        acc += rule.weights[i] * std::pow(rule.nodes[i], 11);
    CHECK(acc == doctest::Approx((std::pow(2.0, 12) - 1.0) / 12.0).epsilon(1e-13));
}

TEST_CASE("gauss-legendre 5-point nodes match reference values") {
    std::vector<double> x, w;
    gauss_legendre(5, x, w);
    CHECK(x[2] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(x[4] == doctest::Approx(0.9061798459386640).epsilon(1e-14));
    CHECK(w[2] == doctest::Approx(0.5688888888888889).epsilon(1e-14));
    CHECK(w[4] == doctest::Approx(0.2369268850561891).epsilon(1e-14));
}

TEST_CASE("sin(theta) integrates to 1 over the half-sphere polar range") {
    const Rule1D rule = gauss_legendre_rule(8, 0.0, 0.5 * std::numbers::pi);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
        acc += rule.weights[i] * std::sin(rule.nodes[i]);
    CHECK(std::abs(acc - 1.0) < 1e-10);
}

TEST_CASE("smooth radial integrand k^2 exp(-k) matches the adaptive oracle") {
    // frozen reference: 2 - 442 e^{-20}, evaluated to 40 digits
    const double reference = 1.999999088970098882157440039054351971127;
    const double oracle =
        adaptive_integrate([](double k) { return k * k * std::exp(-k); }, 0.0, 20.0, 1e-12);
    CHECK(oracle == doctest::Approx(reference).epsilon(1e-11));

    const Rule1D rule = gauss_legendre_rule(24, 0.0, 20.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
        acc += rule.weights[i] * rule.nodes[i] * rule.nodes[i] * std::exp(-rule.nodes[i]);
    CHECK(std::abs(acc - oracle) < 1e-8);
}

TEST_CASE("pv closed form: f == 1 reduces to the antiderivative") {
    const double lam = 1.3, lo = 0.0, hi = 6.0;
    const Rule1D rule = gauss_legendre_rule(200, lo, hi);
    std::vector<double> ones(rule.size(), 1.0);
    const cplx v = pv_quadrature(ones, rule, lam, I0Sign::minus);
    // antiderivative oracle computed independently
    auto F = [lam](double w) { return std::log(std::abs((w - lam) / (w + lam))) / (2 * lam); };
    CHECK(v.real() == doctest::Approx(F(hi) - F(lo)).epsilon(1e-10));
    // -i0+ convention carries +i pi f(lam) / (2 lam)
    CHECK(v.imag() == doctest::Approx(std::numbers::pi / (2.0 * lam)).epsilon(1e-12));
}

TEST_CASE("pv quadrature matches the frozen high-precision Gaussian oracle") {
    // f = exp(-(w-1)^2), lam = 1.3 on [0, 6]; PV part from a 40-digit
    // computation, delta part pi f(lam)/(2 lam)
    const double pv_expected = -0.6294088665025396005945643772035680071036;
    const double delta_expected = 1.104307499051808737409660640389809744732;
    const double lam = 1.3;
    const Rule1D rule = gauss_legendre_rule(300, 0.0, 6.0);
    std::vector<double> f(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i)
        f[i] = std::exp(-(rule.nodes[i] - 1.0) * (rule.nodes[i] - 1.0));
    // the interpolatory subtraction carries the 4-point stencil error at
    // this resolution, a few parts in 1e7
    const cplx v = pv_quadrature(f, rule, lam, I0Sign::minus);
    CHECK(v.real() == doctest::Approx(pv_expected).epsilon(1e-6));
    CHECK(v.imag() == doctest::Approx(delta_expected).epsilon(1e-6));

    const cplx vp = pv_quadrature(f, rule, lam, I0Sign::plus);
    CHECK(vp.imag() == doctest::Approx(-delta_expected).epsilon(1e-6));

    // a finer rule with a wider stencil tightens the match
    const Rule1D fine = gauss_legendre_rule(1200, 0.0, 6.0);
    std::vector<double> ff(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i)
        ff[i] = std::exp(-(fine.nodes[i] - 1.0) * (fine.nodes[i] - 1.0));
    const cplx vf = pv_quadrature(ff, fine, lam, I0Sign::minus, 6);
    CHECK(vf.real() == doctest::Approx(pv_expected).epsilon(1e-11));
    CHECK(vf.imag() == doctest::Approx(delta_expected).epsilon(1e-11));
}

TEST_CASE("complex-shift extrapolation agrees with the pv+delta split") {
    const double lam = 1.3;
    auto f = [](double w) { return std::exp(-(w - 1.0) * (w - 1.0)); };
    const Rule1D rule = gauss_legendre_rule(240, 0.0, 6.0);
    std::vector<double> samples(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) samples[i] = f(rule.nodes[i]);
    const cplx pv = pv_quadrature(samples, rule, lam, I0Sign::minus);
    const cplx cs = complex_shift_integral(
        f, 0.0, 6.0, lam, I0Sign::minus,
        {1e-2 * lam * lam, 1e-3 * lam * lam, 1e-4 * lam * lam});
    CHECK(std::abs(pv - cs) < 1e-4 * std::abs(pv));
}

TEST_CASE("pv quadrature rejects lambda outside the grid range") {
    const Rule1D rule = gauss_legendre_rule(40, 0.0, 2.0);
    std::vector<double> f(rule.size(), 1.0);
    CHECK_THROWS_AS(pv_quadrature(f, rule, 3.0, I0Sign::plus), ConfigError);
}

TEST_CASE("pv quadrature flags node coincidence") {
    const Rule1D rule = gauss_legendre_rule(40, 0.0, 2.0);
    CHECK_THROWS_AS(PVContext(rule, rule.nodes[17], I0Sign::plus), SingularNodeError);
}

TEST_CASE("richardson weights sum to one and kill linear error") {
    const std::vector<double> etas{1e-2, 1e-3, 1e-4};
    const auto c = richardson_weights(etas);
    double sum = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < etas.size(); ++i) {
        sum += c[i];
        lin += c[i] * etas[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(lin) < 1e-18);
}

TEST_CASE("taper window is 1 before the taper region and 0 at the cutoff") {
    const Rule1D rule = composite_gauss_rule(4, 50, 0.0, 10.0);
    const auto win = taper_window(rule, 0.3, 9);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        if (rule.nodes[i] <= 7.0) CHECK(win[i] == 1.0);
        CHECK(win[i] >= 0.0);
        CHECK(win[i] <= 1.0);
    }
    CHECK(win.back() < 1e-6);
}

TEST_CASE("smoothstep endpoints and classic m=1 midpoint") {
    CHECK(smoothstep_poly(9, 0.0) == 0.0);
    CHECK(smoothstep_poly(9, 1.0) == 1.0);
    CHECK(smoothstep_poly(1, 0.5) == doctest::Approx(0.5));  // 3u^2 - 2u^3
}
