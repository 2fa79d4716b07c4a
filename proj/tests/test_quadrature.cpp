#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "check.hpp"
#include "oracles.hpp"
#include "qdiel/fermi.hpp"
#include "qdiel/quadrature.hpp"

using namespace qdiel;

TEST_CASE("polynomials and smooth integrands on an interval")
{
    const QuadratureConfig cfg;
    auto r = integrate_interval([](double x) { return Complex(x * x, 0.0); }, 0.0, 1.0, cfg);
    CHECK(std::abs(r.value - Complex(1.0 / 3.0)) < 1e-15);
    CHECK(r.evaluations == 15);

    r = integrate_interval([](double x) { return std::exp(Complex(0.0, x)); }, 0.0, std::numbers::pi, cfg);
    CHECK(std::abs(r.value - Complex(0.0, 2.0)) < 1e-13);
}

TEST_CASE("error estimate honours the tolerance on success")
{
    QuadratureConfig cfg;
    for (double rt : {1e-6, 1e-10, 1e-12}) {
        cfg.rel_tol = rt;
        auto f      = [](double x) { return Complex(1.0 / (1e-2 + x * x), std::sin(30.0 * x)); };
        const auto r = integrate_interval(f, -1.0, 2.0, cfg);
        CHECK(r.err_estimate <= std::max(rt * std::abs(r.value), cfg.abs_tol));
        const Complex exact(10.0 * (std::atan(20.0) + std::atan(10.0)),
                            (std::cos(30.0) - std::cos(60.0)) / 30.0);
        CHECK(rel(r.value, exact) < 100.0 * rt);
    }
}

TEST_CASE("breakpoints split the initial partition")
{
    const QuadratureConfig cfg;
    const std::array<double, 2> bp{0.5, 0.5};
    auto f       = [](double x) { return Complex(std::abs(x - 0.5), 0.0); };
    const auto r = integrate_interval(f, 0.0, 1.0, cfg, bp);
    CHECK(std::abs(r.value.real() - 0.25) < 1e-15);
    CHECK(r.evaluations == 30);
}

TEST_CASE("failure carries the partial result")
{
    QuadratureConfig cfg;
    cfg.max_intervals = 3;
    auto f = [](double x) { return Complex(1.0 / std::sqrt(x), 0.0); };
    try {
        (void)integrate_interval(f, 0.0, 1.0, cfg);
        FAIL("expected QuadratureFailure");
    } catch (const QuadratureFailure& e) {
        CHECK(e.partial().evaluations > 0);
        CHECK(e.partial().err_estimate > cfg.rel_tol * std::abs(e.partial().value));
        CHECK(std::abs(e.partial().value.real() - 2.0) < 0.5);
    }

    cfg               = {};
    cfg.max_depth     = 2;
    CHECK_THROWS_AS(integrate_interval(f, 0.0, 1.0, cfg), QuadratureFailure);
}

TEST_CASE("configuration validation")
{
    auto bad = [](auto mutate) {
        QuadratureConfig cfg;
        mutate(cfg);
        CHECK_THROWS_AS(cfg.validate(), DomainError);
    };
    bad([](QuadratureConfig& c) { c.rel_tol = 0.0; });
    bad([](QuadratureConfig& c) { c.rel_tol = 1.0; });
    bad([](QuadratureConfig& c) { c.abs_tol = -1.0; });
    bad([](QuadratureConfig& c) { c.max_depth = 0; });
    bad([](QuadratureConfig& c) { c.tail_eps = 0.0; });
    bad([](QuadratureConfig& c) { c.pv_gap = 0.0; });
    bad([](QuadratureConfig& c) { c.max_intervals = 0; });
    CHECK_NOTHROW(QuadratureConfig{}.validate());
    CHECK_THROWS_AS(integrate_interval([](double) { return Complex{}; }, 1.0, 1.0, {}), DomainError);
}

TEST_CASE("tail cut")
{
    const double base = std::sqrt(std::log(1e16));
    CHECK(tail_cut(DegeneracyParam{-5.0}, 1e-16, 1.0) == doctest::Approx(base));
    CHECK(tail_cut(DegeneracyParam{9.0}, 1e-16, 1.0) == doctest::Approx(std::sqrt(9.0 + std::log(1e16))));
    CHECK(tail_cut(DegeneracyParam{0.0}, 1e-16, 1e-2) == doctest::Approx(base + std::log(100.0)));
    CHECK_THROWS_AS(tail_cut(DegeneracyParam{0.0}, 1e-16, 0.0), DomainError);
    // Beyond the cut the kernels are below tail_eps.
    for (double a : {-20.0, 0.0, 20.0}) {
        const double c = tail_cut(DegeneracyParam{a}, 1e-16, 1.0);
        CHECK(oracle::log_fermi(c, a) <= 1e-16);
        CHECK(oracle::f0(c, a) <= 1e-16);
    }
}

TEST_CASE("line integrals of Fermi kernels")
{
    const QuadratureConfig cfg;
    for (double a : {-20.0, -1.0, 0.0, 3.0, 20.0}) {
        const DegeneracyParam alpha{a};
        auto f       = [&](double t) { return Complex(fermi_f0(t, alpha), 0.0); };
        const auto r = integrate_line(f, alpha, cfg);
        const double ref = oracle::simpson([&](double t) { return oracle::f0(t, a); }, -12.0, 12.0);
        CHECK(rel(r.value.real(), ref) < 1e-11);
    }
}

TEST_CASE("line integral with a pole near the axis")
{
    const QuadratureConfig cfg;
    const DegeneracyParam alpha{0.0};
    for (Complex p : {Complex(0.5, 1e-3), Complex(-2.0, 1e-2), Complex(0.0, 3.0)}) {
        auto f       = [&](double t) { return std::exp(-t * t) / (t - p); };
        const auto r = integrate_line(f, alpha, cfg, {{p}, 0.0});
        const Complex expect = std::sqrt(std::numbers::pi) * oracle::plasma_z(p);
        CHECK(rel(r.value, expect) < 1e-9);
    }
    auto f = [](double t) { return Complex(1.0 / (t - 1.0)); };
    CHECK_THROWS_AS(integrate_line(f, alpha, cfg, {{Complex(1.0, 0.0)}, 0.0}), DomainError);
}

TEST_CASE("principal value against the Gaussian Hilbert transform")
{
    QuadratureConfig cfg;
    auto s = [](double t) { return Complex(std::exp(-t * t), 0.0); };
    for (double p : {0.0, 0.3, 1.7, -3.0}) {
        const double expect = std::sqrt(std::numbers::pi) * oracle::plasma_z_series(p).real();
        const auto r        = principal_value(s, p, DegeneracyParam{0.0}, cfg);
        CHECK(std::abs(r.value.real() - expect) < 1e-11);
        CHECK(r.value.imag() == 0.0);
    }
}

TEST_CASE("principal value does not depend on the exclusion gap")
{
    auto s = [](double t) { return Complex(oracle::log_fermi(t, 2.0), 0.0); };
    QuadratureConfig a, b;
    b.pv_gap     = 0.2;
    const auto x = principal_value(s, 0.9, DegeneracyParam{2.0}, a);
    const auto y = principal_value(s, 0.9, DegeneracyParam{2.0}, b);
    CHECK(rel(x.value, y.value) < 1e-10);
}

TEST_CASE("linearity")
{
    const QuadratureConfig cfg;
    const DegeneracyParam alpha{1.0};
    const Complex p(0.4, 0.05);
    auto f = [&](double t) { return fermi_f0(t, alpha) / (t - p); };
    auto g = [&](double t) { return Complex(log_fermi(t, alpha) * std::cos(t), 0.0); };
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const auto rf = integrate_line(f, alpha, cfg, {{p}, 0.0});
    const auto rg = integrate_line(g, alpha, cfg);
    for (int k = 0; k < 20; ++k) {
        const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
        const auto r = integrate_line([&](double t) { return a * f(t) + b * g(t); }, alpha, cfg, {{p}, 0.0});
        const double budget = 2.0 * (r.err_estimate + std::abs(a) * rf.err_estimate + std::abs(b) * rg.err_estimate);
        CHECK(std::abs(r.value - (a * rf.value + b * rg.value)) <= budget);
    }
}

TEST_CASE("reflection and pole conjugation")
{
    const QuadratureConfig cfg;
    for (double a : {-10.0, 0.0, 10.0}) {
        const DegeneracyParam alpha{a};
        // Even s over a pole on the imaginary axis: the real part is odd in t.
        const Complex iv(0.0, 0.3);
        const auto r = integrate_line([&](double t) { return log_fermi(t, alpha) / (t - iv); }, alpha, cfg, {{iv}, 0.0});
        CHECK(std::abs(r.value.real()) <= cfg.abs_tol);

        const Complex w(0.7, 0.02);
        auto s            = [&](double t) { return fermi_f0(t, alpha); };
        const auto up     = integrate_line([&](double t) { return s(t) / (t - w); }, alpha, cfg, {{w}, 0.0});
        const auto down   = integrate_line([&](double t) { return s(t) / (t - std::conj(w)); }, alpha, cfg,
                                           {{std::conj(w)}, 0.0});
        CHECK(std::abs(down.value - std::conj(up.value)) <= up.err_estimate + down.err_estimate + 1e-15);
    }
}

TEST_CASE("principal value agrees with the shrinking-gap oracle")
{
    const QuadratureConfig cfg;
    for (double a : {-5.0, 0.0, 5.0})
        for (double p : {0.7, 0.0, 2.1}) {
            const DegeneracyParam alpha{a};
            const auto r = principal_value([&](double t) { return Complex(fermi_f0(t, alpha)); }, p, alpha, cfg);
            const double ref = oracle::pv_limit([&](double t) { return oracle::f0(t, a); }, p);
            CHECK(std::abs(r.value.real() - ref) <= 10.0 * cfg.rel_tol * std::abs(ref) + 1e-12);
        }
}

TEST_CASE("doubling max_depth never increases the error estimate")
{
    auto singular = [](double x) { return Complex(std::pow(x, -0.3), std::log(x)); };
    auto peaked   = [](double x) { return Complex(1.0 / (1e-6 + x * x), 0.0); };
    for (const Integrand& f : {Integrand(singular), Integrand(peaked)})
        for (int depth : {4, 8, 16, 32}) {
            auto estimate = [&](int d) {
                QuadratureConfig cfg;
                cfg.max_depth = d;
                try {
                    return integrate_interval(f, 0.0, 1.0, cfg).err_estimate;
                } catch (const QuadratureFailure& e) {
                    return e.partial().err_estimate;
                }
            };
            CHECK(estimate(2 * depth) <= estimate(depth));
        }
}
