#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include <krein/coefficient.hpp>
#include <krein/line_density.hpp>
#include <krein/measures.hpp>

#include "oracles.hpp"

using krein::complex;
using krein::pi;
using krein::two_pi;

TEST(LineDensity, Validation)
{
    EXPECT_THROW(krein::LineDensity(0.0, {1.0, 1.0}), krein::invalid_input);
    EXPECT_THROW(krein::LineDensity(1.0, {1.0}), krein::invalid_input);
    EXPECT_THROW(krein::LineDensity(1.0, {1.0, -0.1}), krein::invalid_input);
    EXPECT_THROW(krein::LineDensity(1.0, {1.0, NAN}), krein::invalid_input);
    EXPECT_THROW(krein::LineDensity(1.0, {1.0, 1.0}, 0.0), krein::invalid_input);
    EXPECT_THROW(krein::LineDensity(1.0, {1.0, 1.0}, 1.0, {{0.0, -1.0}}), krein::invalid_input);
}

TEST(LineDensity, InterpolationAndExterior)
{
    const krein::LineDensity d(1.0, {0.0, 2.0, 4.0}, 0.5);
    EXPECT_DOUBLE_EQ(d(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(d(-0.5), 1.0);
    EXPECT_DOUBLE_EQ(d(0.5), 3.0);
    EXPECT_DOUBLE_EQ(d(1.0), 4.0);
    EXPECT_DOUBLE_EQ(d(1.5), 0.5);
    EXPECT_DOUBLE_EQ(d(-7.0), 0.5);
    EXPECT_DOUBLE_EQ(d.node(2), 1.0);
}

TEST(LineDensity, CsvHasTwoColumns)
{
    const krein::LineDensity d(1.0, {0.25, 0.5, 0.75});
    std::ostringstream os;
    d.write_csv(os);
    EXPECT_EQ(os.str(), "x,sigma_prime\n-1,0.25\n0,0.5\n1,0.75\n");
}

TEST(SzegoLine, FreeDensity)
{
    const auto d = krein::LineDensity::constant(krein::LineDensity::free_value);
    const auto e = krein::szego_entropy_line(d);
    EXPECT_FALSE(e.divergent);
    EXPECT_NEAR(e.value, pi * std::log(two_pi), 1e-10);
}

TEST(SzegoLine, ZeroPlateauDiverges)
{
    auto d = krein::LineDensity::from_function(
        [](double x) { return (x >= 0.0 && x <= 0.1) ? 0.0 : 1.0 / two_pi; });
    const auto e = krein::szego_entropy_line(d);
    EXPECT_TRUE(e.divergent);
    EXPECT_TRUE(std::isinf(e.value));
}

TEST(SzegoLine, MatchesSimpson)
{
    const auto f = [](double x) { return (1.0 + 0.5 * std::sin(x)) / two_pi; };
    const auto d = krein::LineDensity::from_function(f, 10.0, 8193);
    const double window =
        oracle::simpson([&](double x) { return std::abs(std::log(f(x))) / (1.0 + x * x); }, -10.0, 10.0, 20000);
    const double tail = std::log(two_pi) * (pi - 2.0 * std::atan(10.0));
    EXPECT_NEAR(krein::szego_entropy_line(d).value, window + tail, 1e-6);
}

TEST(CircleMeasure, MassValidation)
{
    EXPECT_THROW(krein::CircleMeasure([](double) { return 1.0; }), krein::invalid_input);
    EXPECT_THROW(krein::CircleMeasure([](double) { return -1.0; }), krein::invalid_input);
    EXPECT_NO_THROW(krein::CircleMeasure([](double) { return 0.5 / two_pi; }, {{0.0, 0.5}}));
    const auto m = krein::CircleMeasure::normalized([](double t) { return 3.0 + std::cos(t); });
    EXPECT_NEAR(m.density(0.0), 4.0 / (3.0 * two_pi), 1e-12);
}

TEST(SzegoCircle, KnownEntropies)
{
    const auto leb = krein::szego_entropy_circle(krein::CircleMeasure::lebesgue());
    EXPECT_NEAR(leb.value, -two_pi * std::log(two_pi), 1e-10);

    // Int log(1 + cos t) dt = -2 pi log 2; the zero at t = pi makes the
    // cell rule first order, so halving the cells halves the error
    const double exact = -two_pi * std::log(2.0) - two_pi * std::log(two_pi);
    const auto m       = krein::CircleMeasure::raised_cosine();
    const auto rc      = krein::szego_entropy_circle(m);
    EXPECT_FALSE(rc.divergent);
    EXPECT_NEAR(rc.value, exact, 1e-4);
    const double e1 = std::abs(krein::szego_entropy_circle(m, 1 << 12).value - exact);
    const double e2 = std::abs(krein::szego_entropy_circle(m, 1 << 13).value - exact);
    EXPECT_NEAR(e1 / e2, 2.0, 0.1);
}

TEST(SzegoCircle, ArcVanishingDiverges)
{
    const auto m = krein::CircleMeasure::normalized(
        [](double t) { return std::abs(t) < 0.5 ? 0.0 : 1.0; });
    const auto e = krein::szego_entropy_circle(m);
    EXPECT_TRUE(e.divergent);
    EXPECT_TRUE(std::isinf(e.value) && e.value < 0.0);
}

TEST(SigmaPrime, FreeAndCompact)
{
    EXPECT_NEAR(krein::sigma_prime_exact(krein::Coefficient::zero(), 1.3), 1.0 / two_pi, 1e-15);

    const auto c = krein::Coefficient({0.0, 1.0, 2.5}, {complex(0.8, 0.1), -0.3});
    for (double x : {-2.0, 0.0, 1.0, 4.5})
    {
        const auto s = oracle::rk4_krein({0.0, 1.0, 2.5}, {complex(0.8, 0.1), -0.3}, x, 2.5);
        EXPECT_NEAR(krein::sigma_prime_exact(c, x) * two_pi * std::norm(s.Ps), 1.0, 1e-10) << x;
    }
}

TEST(SigmaPrime, SampledDensityHitsNodes)
{
    const auto c = krein::Coefficient::step(0.5, 2.0);
    const auto d = krein::density_from_truncated_coefficient(c, 5.0, 101);
    EXPECT_EQ(d.size(), 101u);
    EXPECT_DOUBLE_EQ(d.exterior_value(), krein::LineDensity::free_value);
    EXPECT_TRUE(d.point_masses().empty());
    for (std::size_t i : {0u, 37u, 100u})
        EXPECT_DOUBLE_EQ(d.samples()[i], krein::sigma_prime_exact(c, d.node(i)));
}
