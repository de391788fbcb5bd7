#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include <krein/coefficient.hpp>
#include <krein/grids.hpp>
#include <krein/krein.hpp>

#include "oracles.hpp"

using krein::complex;

namespace
{

Eigen::Matrix2cd system_matrix(complex lambda, complex a)
{
    Eigen::Matrix2cd M;
    M << complex(0.0, 1.0) * lambda, -std::conj(a), -a, 0.0;
    return M;
}

double transfer_distance(const krein::Transfer& t, const Eigen::Matrix2cd& E)
{
    return std::max({std::abs(t.m00 - E(0, 0)), std::abs(t.m01 - E(0, 1)),
                     std::abs(t.m10 - E(1, 0)), std::abs(t.m11 - E(1, 1))}) /
           std::max(1.0, E.cwiseAbs().maxCoeff());
}

} // namespace

TEST(Transfer, MatchesMatrixExponentials)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0), h(0.001, 1.5);
    for (int trial = 0; trial < 200; ++trial)
    {
        const complex lambda(u(rng), std::abs(u(rng)));
        const complex a(u(rng), u(rng));
        const double dr = h(rng);
        const auto t    = krein::krein_transfer(lambda, a, dr);
        const auto M    = system_matrix(lambda, a);
        EXPECT_LT(transfer_distance(t, oracle::expm_taylor(M, dr)), 1e-12) << lambda << a << dr;
        EXPECT_LT(transfer_distance(t, oracle::expm_eigen(M, dr)), 1e-9) << lambda << a << dr;
    }
}

TEST(Transfer, CoalescingEigenvalues)
{
    // tau^2 + |a|^2 = 0 for lambda = 2i|a|: a Jordan block
    for (const double s : {0.5, 1.0, 3.0})
    {
        const complex lambda(0.0, 2.0 * s);
        const auto t = krein::krein_transfer(lambda, s, 0.7);
        EXPECT_LT(transfer_distance(t, oracle::expm_taylor(system_matrix(lambda, s), 0.7)), 1e-13);
    }
}

TEST(Transfer, DeterminantIsTraceExponential)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial)
    {
        const complex lambda(u(rng), u(rng)), a(u(rng), u(rng));
        const double dr = 0.1 + std::abs(u(rng));
        const complex d = krein::krein_transfer(lambda, a, dr).det();
        const complex ref = std::exp(complex(0.0, 1.0) * lambda * dr);
        EXPECT_LT(std::abs(d - ref), 1e-11 * std::max(1.0, std::abs(ref)));
    }
}

TEST(Evolve, FreeSystem)
{
    const auto c = krein::Coefficient::zero();
    for (const complex lambda : {complex(1.3, 0.0), complex(-0.4, 0.9), complex(0.0, 2.0)})
        for (double r : {0.0, 0.5, 7.0, 40.0})
        {
            const auto s = krein::evolve(c, lambda, r);
            EXPECT_LT(std::abs(s.P - std::exp(complex(0.0, 1.0) * lambda * r)), 1e-13);
            EXPECT_EQ(s.P_star, complex(1.0, 0.0));
        }
}

TEST(Evolve, RealConstantAtZeroFrequency)
{
    // lambda = 0, a real: P = P_* = e^{-a r}
    for (double a : {0.2, 1.0, -0.7})
    {
        const auto s = krein::evolve(krein::Coefficient::step(a, 10.0), 0.0, 3.0);
        EXPECT_NEAR(std::abs(s.P - std::exp(-a * 3.0)), 0.0, 1e-13);
        EXPECT_NEAR(std::abs(s.P_star - std::exp(-a * 3.0)), 0.0, 1e-13);
    }
}

TEST(Evolve, NegativeRadiusThrows)
{
    EXPECT_THROW(krein::evolve(krein::Coefficient::zero(), 1.0, -1.0), krein::invalid_input);
}

TEST(Propagate, MatchesRungeKutta)
{
    const std::vector<double> br{0.0, 0.4, 1.1, 2.0};
    const std::vector<complex> v{complex(0.8, -0.2), complex(-0.5, 0.3), complex(0.0, 1.2)};
    const krein::Coefficient c(br, v);
    for (const complex lambda : {complex(2.0, 0.0), complex(-1.0, 0.5), complex(0.3, 2.0)})
    {
        const auto t = krein::propagate(c, lambda, krein::uniform_grid(0.0, 3.0, 61));
        for (double r : {0.4, 1.35, 3.0})
        {
            const auto ref = oracle::rk4_krein(br, v, lambda, r);
            const auto i   = t.index_of(r);
            EXPECT_LT(std::abs(t.states[i].P - ref.P), 1e-10) << lambda << " r=" << r;
            EXPECT_LT(std::abs(t.states[i].P_star - ref.Ps), 1e-10);
            EXPECT_NEAR(t.acc_P2[i], ref.accP2, 1e-10);
            EXPECT_LT(std::abs(t.acc_Pstar[i] - ref.accPs), 1e-10);
        }
    }
}

TEST(Propagate, IndependentOfGrid)
{
    const auto c = krein::Coefficient::power_decay(0.9, 0.75, 6.0, 0.05);
    const complex lambda(0.7, 0.3);
    const auto coarse = krein::propagate(c, lambda, std::vector<double>{0.0, 2.5, 6.0});
    const auto fine   = krein::propagate(c, lambda, krein::uniform_grid(0.0, 6.0, 601));
    for (double r : {2.5, 6.0})
    {
        const auto a = coarse.index_of(r), b = fine.index_of(r);
        EXPECT_LT(std::abs(coarse.states[a].P - fine.states[b].P), 1e-12);
        EXPECT_LT(std::abs(coarse.states[a].P_star - fine.states[b].P_star), 1e-12);
        EXPECT_NEAR(coarse.acc_P2[a], fine.acc_P2[b], 1e-11);
        EXPECT_NEAR(coarse.acc_absPstar[a], fine.acc_absPstar[b], 1e-11);
    }
    const auto direct = krein::evolve(c, lambda, 6.0);
    EXPECT_LT(std::abs(direct.P - coarse.states.back().P), 1e-12);
}

TEST(Propagate, GridValidation)
{
    const auto c = krein::Coefficient::zero();
    EXPECT_THROW(krein::propagate(c, 1.0, std::vector<double>{}), krein::invalid_input);
    EXPECT_THROW(krein::propagate(c, 1.0, std::vector<double>{-1.0, 0.0}), krein::invalid_input);
    EXPECT_THROW(krein::propagate(c, 1.0, std::vector<double>{0.0, 1.0, 1.0}), krein::invalid_input);
    const auto t = krein::propagate(c, 1.0, std::vector<double>{0.0, 1.0});
    EXPECT_THROW(t.index_of(0.5), krein::invalid_input);
    EXPECT_EQ(t.index_of(1.0), 1u);
}

TEST(Propagate, ModulusIdentities)
{
    // |P_*|^2 - |P|^2 = 2 Im(lambda) Int |P|^2, an exact consequence of the system
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial)
    {
        std::vector<double> br{0.0};
        std::vector<complex> v;
        for (int k = 0; k < 5; ++k)
        {
            br.push_back(br.back() + 0.2 + std::abs(u(rng)));
            v.emplace_back(u(rng), u(rng));
        }
        const krein::Coefficient c(br, v);
        const complex lambda(3.0 * u(rng), trial % 3 == 0 ? 0.0 : std::abs(u(rng)));
        const auto t = krein::propagate(c, lambda, std::vector<double>{0.0, br.back() + 1.0});
        const auto& s  = t.states.back();
        const double g = std::norm(s.P_star) - std::norm(s.P);
        EXPECT_NEAR(g, 2.0 * lambda.imag() * t.acc_P2.back(), 1e-11 * std::max(1.0, std::norm(s.P_star)));
        if (lambda.imag() > 0.0)
        {
            EXPECT_GT(std::abs(s.P_star), std::abs(s.P));
        }
    }
}

TEST(Propagate, ChristoffelDarbouxConverges)
{
    const krein::Coefficient c({0.0, 1.0, 3.0}, {complex(0.5, 0.5), -0.8});
    const complex lam(1.2, 0.4), mu(-0.5, 0.1);
    double prev = INFINITY;
    for (std::size_t n : {501u, 1001u, 2001u})
    {
        const auto g = krein::uniform_grid(0.0, 5.0, n);
        const double res =
            krein::cd_residual(krein::propagate(c, lam, g), krein::propagate(c, mu, g), 5.0);
        EXPECT_LT(res, prev / 3.5);
        prev = res;
    }
    EXPECT_LT(prev, 1e-5);
}

TEST(Propagate, FreeAverages)
{
    const auto g = krein::default_r_grid(50.0);
    const auto real = krein::propagate(krein::Coefficient::zero(), 2.0, g);
    EXPECT_NEAR(krein::cesaro_mean_p2(real, 50.0), 1.0, 1e-12);
    const auto upper = krein::propagate(krein::Coefficient::zero(), complex(0.0, 1.0), g);
    EXPECT_LT(std::abs(krein::teplyaev_average(upper, 50.0) - 1.0), 1e-12);
    EXPECT_NEAR(krein::abs_pstar_average(upper, 50.0), 1.0, 1e-12);
    EXPECT_NEAR(krein::average_bound(50.0, complex(0.0, 1.0), 1.0), std::sqrt(1.01), 1e-15);
    EXPECT_THROW(krein::cesaro_mean_p2(real, 0.0), krein::invalid_input);
}

TEST(Trajectory, CsvColumns)
{
    const auto t = krein::propagate(krein::Coefficient::zero(), 0.0, std::vector<double>{0.0, 1.0});
    std::ostringstream os;
    t.write_csv(os);
    EXPECT_EQ(os.str(), "r,re_P,im_P,re_Pstar,im_Pstar,acc_P2\n0,1,0,1,0,0\n1,1,0,1,0,1\n");
}

TEST(Grids, DefaultShape)
{
    const auto g = krein::default_r_grid(100.0);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 100.0);
    EXPECT_NEAR(g[1], 0.01, 1e-15);
    for (std::size_t k = 1; k < g.size(); ++k)
    {
        EXPECT_GT(g[k], g[k - 1]);
        if (g[k] > 10.0 + 1e-9 && k + 1 < g.size())
        {
            EXPECT_NEAR(g[k] / g[k - 1], 1.05, 1e-9);
        }
    }
    EXPECT_THROW(krein::default_r_grid(0.0), krein::invalid_input);
}

TEST(Grids, WithRadiiInsertsOnce)
{
    const auto g = krein::with_radii({0.0, 1.0, 2.0}, {1.5, 1.0, 3.0});
    EXPECT_EQ(g, (std::vector<double>{0.0, 1.0, 1.5, 2.0, 3.0}));
}
