#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <krein/coefficient.hpp>
#include <krein/measures.hpp>
#include <krein/numerics.hpp>
#include <krein/quadrature.hpp>

#include "oracles.hpp"

using krein::complex;
using krein::two_pi;

TEST(Trapezoid, ZeroIntegrand)
{
    const krein::SampledGrid g({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0});
    EXPECT_EQ(krein::integrate_trapezoid(g), complex(0.0, 0.0));
}

TEST(Trapezoid, ConstantIntegrand)
{
    const krein::SampledGrid g({0.0, 1.0}, {1.0, 1.0});
    EXPECT_DOUBLE_EQ(krein::integrate_trapezoid(g).real(), 1.0);
}

TEST(Trapezoid, SineOnHalfPeriod)
{
    const auto x = krein::uniform_grid(0.0, krein::pi, 1001);
    std::vector<complex> f;
    for (double v : x)
        f.emplace_back(std::sin(v));
    EXPECT_NEAR(krein::integrate_trapezoid(krein::SampledGrid(x, f)).real(), 2.0, 1e-5);
}

TEST(Trapezoid, ExactForPiecewiseAffine)
{
    const std::vector<double> x{0.0, 0.3, 1.0, 2.5};
    std::vector<complex> f;
    for (double v : x)
        f.emplace_back(2.0 * v - 1.0, 0.5 * v);
    // Int_0^2.5 (2x - 1) dx = 3.75, Int 0.5 x dx = 1.5625
    const complex I = krein::integrate_trapezoid(krein::SampledGrid(x, f));
    EXPECT_NEAR(I.real(), 3.75, 1e-14);
    EXPECT_NEAR(I.imag(), 1.5625, 1e-14);
}

TEST(Trapezoid, RejectsBadGrids)
{
    EXPECT_THROW(krein::SampledGrid({0.0}, {1.0}), krein::invalid_input);
    EXPECT_THROW(krein::SampledGrid({0.0, 1.0}, {1.0}), krein::invalid_input);
    EXPECT_THROW(krein::SampledGrid({0.0, 0.0}, {1.0, 1.0}), krein::invalid_input);
    EXPECT_THROW(krein::SampledGrid({1.0, 0.0}, {1.0, 1.0}), krein::invalid_input);
}

TEST(Trapezoid, LinearAndAdditive)
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0), step(0.01, 0.3);
    for (int trial = 0; trial < 20; ++trial)
    {
        std::vector<double> x{0.0};
        for (int k = 0; k < 40; ++k)
            x.push_back(x.back() + step(rng));
        std::vector<complex> f, g, h;
        const complex a(u(rng), u(rng)), b(u(rng), u(rng));
        for (std::size_t k = 0; k < x.size(); ++k)
        {
            f.emplace_back(u(rng), u(rng));
            g.emplace_back(u(rng), u(rng));
            h.push_back(a * f.back() + b * g.back());
        }
        const complex If = krein::trapezoid(x, f), Ig = krein::trapezoid(x, g);
        EXPECT_LT(std::abs(krein::trapezoid(x, h) - (a * If + b * Ig)), 1e-13);

        const std::size_t cut = 17;
        const std::span<const double> xs(x);
        const std::span<const complex> fs(f);
        const complex left  = krein::trapezoid(xs.first(cut + 1), fs.first(cut + 1));
        const complex right = krein::trapezoid(xs.subspan(cut), fs.subspan(cut));
        EXPECT_LT(std::abs(left + right - If), 1e-13);
    }
}

TEST(Quadrature, CoshSinhcMatchesLibm)
{
    for (const complex w : {complex(2.0, 0.0), complex(-3.0, 0.5), complex(1e-3, -2e-3),
                            complex(1e-10, 1e-10), complex(0.0, 0.0), complex(-25.0, 0.0)})
    {
        complex ch, shc;
        krein::cosh_sinhc(w, ch, shc);
        const complex d = std::sqrt(w);
        const complex ref_shc = std::abs(d) > 0.0 ? std::sinh(d) / d : complex(1.0, 0.0);
        EXPECT_LT(std::abs(ch - std::cosh(d)), 1e-13 * std::max(1.0, std::abs(ch))) << w;
        EXPECT_LT(std::abs(shc - ref_shc), 1e-13 * std::max(1.0, std::abs(shc))) << w;
    }
}

TEST(Fejer, KernelBasics)
{
    EXPECT_DOUBLE_EQ(krein::fejer_Phi(0.0), 1.0);
    for (double x : {0.3, -2.0, 7.5})
    {
        const complex R = (std::exp(complex(0.0, x)) - 1.0) / complex(0.0, x);
        EXPECT_LT(std::abs(krein::fejer_R(x) - R), 1e-15);
        EXPECT_NEAR(krein::fejer_Phi(x), std::norm(R), 1e-15);
    }
    // Int Phi = 2 pi; the tails decay like 4/x^2
    const double core = oracle::simpson([](double x) { return krein::fejer_Phi(x); }, -2000.0, 2000.0, 4000000);
    EXPECT_NEAR(core + 2.0 * 4.0 / 2000.0 * 0.5, two_pi, 2e-4);
}

TEST(Fejer, ConstantDensityIsFixedPoint)
{
    for (double c : {1.0, 1.0 / two_pi, 0.37})
    {
        const auto d = krein::LineDensity::constant(c);
        for (double r : {0.5, 1.0, 10.0, 1000.0})
            for (double z : {-12.0, 0.0, 3.3})
                EXPECT_NEAR(krein::fejer_smooth(d, z, r), two_pi * c, 1e-10 * two_pi * c)
                    << "c=" << c << " r=" << r << " z=" << z;
    }
}

TEST(Fejer, UnitPointMass)
{
    const krein::LineDensity d(10.0, std::vector<double>(2049, 0.0), 1e-300, {{0.0, 1.0}});
    EXPECT_NEAR(krein::fejer_smooth(d, 0.0, 10.0), 10.0, 1e-12);
}

TEST(Fejer, RejectsNonpositiveRadius)
{
    const auto d = krein::LineDensity::constant(1.0);
    EXPECT_THROW(krein::fejer_smooth(d, 0.0, 0.0), krein::invalid_input);
    EXPECT_THROW(krein::fejer_smooth(d, 0.0, -1.0), krein::invalid_input);
}

TEST(Fejer, ApproachesDensityOfTruncatedCoefficient)
{
    const auto c = krein::Coefficient::step(0.5, 2.0);
    const auto d = krein::density_from_truncated_coefficient(c);
    const auto s = oracle::rk4_krein({0.0, 2.0}, {0.5}, 1.0, 2.0);
    const double target = 1.0 / std::norm(s.Ps);  // 2 pi sigma'(1)
    double prev = INFINITY;
    for (double r : {10.0, 100.0, 1000.0})
    {
        const double err = std::abs(krein::fejer_smooth(d, 1.0, r) - target) / target;
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 0.01);
}

TEST(Outer, FreeSystemIsOne)
{
    const auto d = krein::LineDensity::constant(krein::LineDensity::free_value);
    for (const complex l : {complex(0.0, 2.0), complex(0.0, 1.0), complex(-3.0, 0.2)})
        EXPECT_LT(std::abs(krein::outer_function(d, l) - 1.0), 1e-12);
}

TEST(Outer, ClosedReductionAtI)
{
    const auto d = krein::LineDensity::from_function(
        [](double x) { return (1.0 + 0.6 * std::exp(-x * x) * std::cos(3.0 * x)) / two_pi; });
    const complex Pi = krein::outer_function(d, {0.0, 1.0});
    EXPECT_NEAR(Pi.real(), krein::outer_at_i(d), 1e-8);
    EXPECT_NEAR(Pi.imag(), 0.0, 1e-12);
}

TEST(Outer, BoundaryModulusOfSmoothDensity)
{
    // |Pi(x + i eps)|^2 -> 1 / (2 pi sigma'(x)) as eps -> 0
    const auto f = [](double x) { return (1.0 + 0.5 * std::exp(-x * x)) / two_pi; };
    const auto d = krein::LineDensity::from_function(f, 10.0, 16384);
    for (double x : {0.0, 0.7, -1.5})
    {
        const double m2 = std::norm(krein::outer_function(d, {x, 1e-3}));
        EXPECT_NEAR(m2 * two_pi * f(x), 1.0, 2e-3) << x;
    }
}

TEST(Outer, MatchesPstarBeyondSupport)
{
    const auto c = krein::Coefficient::step(0.5, 2.0);
    const auto d = krein::density_from_truncated_coefficient(c);
    for (const complex l : {complex(1.0, 1.0), complex(0.0, 1.0), complex(1.0, 2.0)})
    {
        const auto s = oracle::rk4_krein({0.0, 2.0}, {0.5}, l, 2.0);
        EXPECT_LT(std::abs(krein::outer_function(d, l) - s.Ps), 1e-4) << l;
    }
}

TEST(Outer, Errors)
{
    const auto d = krein::LineDensity::constant(1.0);
    EXPECT_THROW(krein::outer_function(d, {1.0, 0.0}), krein::domain_error);
    EXPECT_THROW(krein::outer_function(d, {1.0, -1.0}), krein::domain_error);

    std::vector<double> s(1001, 1.0);
    for (int k = 500; k < 510; ++k)
        s[k] = 0.0;
    const krein::LineDensity gap(10.0, s);
    EXPECT_THROW(krein::outer_function(gap, {0.0, 1.0}), krein::szego_violation);
    EXPECT_THROW(krein::outer_at_i(gap), krein::szego_violation);
}
