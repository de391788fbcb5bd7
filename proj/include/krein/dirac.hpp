///
/// \file dirac.hpp
///
/// Half-line Dirac system J f' + Q f = lambda f, f(0) = (1, 0), with
/// J = [[0, 1], [-1, 0]] and Q = [[-q, p], [p, q]], and its relation to the
/// Krein system with coefficient a(r) = -p(r/2)/2 + i q(r/2)/2:
///
///   phi(t) = e^{-i lambda t} (P(2t) + P_*(2t)) / 2,
///   psi(t) = e^{-i lambda t} (P(2t) - P_*(2t)) / (2i).
///
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include <krein/coefficient.hpp>
#include <krein/errors.hpp>
#include <krein/krein.hpp>
#include <krein/quadrature.hpp>

namespace krein
{

/// Real piecewise-constant p, q on [0, T], zero beyond T.
class DiracPotential
{
public:
    DiracPotential(std::vector<double> breakpoints, std::vector<double> p, std::vector<double> q,
                   std::string description = "piecewise")
        : m_breaks(std::move(breakpoints)), m_p(std::move(p)), m_q(std::move(q)),
          m_description(std::move(description))
    {
        if (m_breaks.empty() || m_breaks.front() != 0.0)
            throw invalid_input("DiracPotential: breakpoints must start at 0");
        if (m_p.size() + 1 != m_breaks.size() || m_q.size() != m_p.size())
            throw invalid_input("DiracPotential: need one (p, q) pair per piece");
        for (std::size_t i = 1; i < m_breaks.size(); ++i)
            if (!(m_breaks[i] > m_breaks[i - 1]))
                throw invalid_input("DiracPotential: breakpoints not strictly increasing");
        for (std::size_t k = 0; k < m_p.size(); ++k)
        {
            if (!std::isfinite(m_p[k]) || !std::isfinite(m_q[k]))
                throw invalid_input("DiracPotential: non-finite value");
            m_l2 += (m_p[k] * m_p[k] + m_q[k] * m_q[k]) * (m_breaks[k + 1] - m_breaks[k]);
        }
    }

    static DiracPotential zero()
    {
        return DiracPotential({0.0}, {}, {}, "zero");
    }

    /// Midpoint sampling of generators on [0, T].
    static DiracPotential sampled(const std::function<double(double)>& p,
                                  const std::function<double(double)>& q, double T,
                                  double max_piece_width, std::string description = "sampled")
    {
        if (!(T > 0.0) || !(max_piece_width > 0.0))
            throw invalid_input("DiracPotential::sampled: radii must be positive");
        const auto n = static_cast<std::size_t>(std::ceil(T / max_piece_width));
        const double h = T / static_cast<double>(n);
        std::vector<double> br(n + 1), pv(n), qv(n);
        for (std::size_t k = 0; k <= n; ++k)
            br[k] = h * static_cast<double>(k);
        br.back() = T;
        for (std::size_t k = 0; k < n; ++k)
        {
            const double mid = 0.5 * (br[k] + br[k + 1]);
            pv[k]            = p(mid);
            qv[k]            = q(mid);
        }
        return DiracPotential(std::move(br), std::move(pv), std::move(qv), std::move(description));
    }

    std::span<const double> breakpoints() const noexcept
    {
        return m_breaks;
    }
    std::span<const double> p() const noexcept
    {
        return m_p;
    }
    std::span<const double> q() const noexcept
    {
        return m_q;
    }
    double support_end() const noexcept
    {
        return m_breaks.back();
    }
    /// Int_0^T (p^2 + q^2) dt.
    double l2_norm_squared() const noexcept
    {
        return m_l2;
    }
    const std::string& description() const noexcept
    {
        return m_description;
    }

private:
    std::vector<double> m_breaks;
    std::vector<double> m_p;
    std::vector<double> m_q;
    std::string m_description;
    double m_l2{0.0};
};

/// a(r) = -p(r/2)/2 + i q(r/2)/2 on [0, 2T].
inline Coefficient potential_to_coefficient(const DiracPotential& pot)
{
    std::vector<double> br(pot.breakpoints().begin(), pot.breakpoints().end());
    for (auto& b : br)
        b *= 2.0;
    std::vector<complex> a(pot.p().size());
    for (std::size_t k = 0; k < a.size(); ++k)
        a[k] = complex(-0.5 * pot.p()[k], 0.5 * pot.q()[k]);
    return Coefficient(std::move(br), std::move(a), "dirac:" + pot.description());
}

struct DiracTrajectory
{
    double lambda{0.0};
    std::vector<double> t;
    std::vector<complex> phi;
    std::vector<complex> psi;
    std::vector<double> acc_f2;  ///< Int_0^t (|phi|^2 + |psi|^2)

    std::size_t size() const noexcept
    {
        return t.size();
    }
};

/// exp(N h) for f' = N f, N = J^{-1}(lambda - Q) = [[p, q - lambda], [lambda + q, -p]].
inline Transfer dirac_transfer(double lambda, double p, double q, double h)
{
    const double w = (p * p + q * q - lambda * lambda) * h * h;
    complex ch, shc;
    cosh_sinhc(complex(w, 0.0), ch, shc);
    const complex s = shc * h;
    return {ch + s * p, s * (q - lambda), s * (lambda + q), ch - s * p};
}

namespace detail
{

template <typename Fn>
void for_each_dirac_segment(const DiracPotential& pot, double t0, double t1, Fn&& fn)
{
    double u = t0;
    const auto br = pot.breakpoints();
    while (u < t1)
    {
        if (u >= pot.support_end())
        {
            fn(u, t1, 0.0, 0.0);
            return;
        }
        const auto k = static_cast<std::size_t>(std::upper_bound(br.begin(), br.end(), u) - br.begin()) - 1;
        const double end = std::min(t1, br[k + 1]);
        fn(u, end, pot.p()[k], pot.q()[k]);
        u = end;
    }
}

} // namespace detail

///
/// Direct exact propagation of the Dirac system, piece by piece. The
/// running integral of |f|^2 uses 4-point Gauss-Legendre cells with the
/// exact in-cell solution.
///
inline DiracTrajectory propagate_dirac(const DiracPotential& pot, double lambda,
                                       std::span<const double> t_grid)
{
    if (t_grid.empty() || t_grid.front() < 0.0)
        throw invalid_input("propagate_dirac: grid must be nonempty and nonnegative");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1]))
            throw invalid_input("propagate_dirac: grid not strictly increasing");

    using GL = GaussLegendre<4>;
    DiracTrajectory out;
    out.lambda = lambda;
    complex f1{1.0, 0.0}, f2{0.0, 0.0};
    double acc  = 0.0;
    double here = 0.0;
    for (double target : t_grid)
    {
        detail::for_each_dirac_segment(pot, here, target, [&](double u, double v, double p, double q) {
            const double len  = v - u;
            const double freq = std::max({1.0, std::abs(lambda), std::hypot(p, q)});
            const std::size_t n =
                std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len * freq / 0.25)));
            const double h = len / static_cast<double>(n);
            std::array<Transfer, 4> sub;
            for (std::size_t k = 0; k < 4; ++k)
                sub[k] = dirac_transfer(lambda, p, q, GL::nodes[k] * h);
            const Transfer full = dirac_transfer(lambda, p, q, h);
            for (std::size_t c = 0; c < n; ++c)
            {
                double cell = 0.0;
                for (std::size_t k = 0; k < 4; ++k)
                {
                    complex a = f1, b = f2;
                    sub[k].apply(a, b);
                    cell += GL::weights[k] * (std::norm(a) + std::norm(b));
                }
                acc += h * cell;
                full.apply(f1, f2);
            }
        });
        here = target;
        out.t.push_back(target);
        out.phi.push_back(f1);
        out.psi.push_back(f2);
        out.acc_f2.push_back(acc);
    }
    return out;
}

inline DiracTrajectory propagate_dirac(const DiracPotential& pot, double lambda,
                                       const std::vector<double>& t_grid)
{
    return propagate_dirac(pot, lambda, std::span<const double>(t_grid));
}

///
/// Dirac solution read off a Krein trajectory of real spectral parameter,
/// sampled at radii 2t. For real lambda |P| = |P_*|, so |f(t)|^2 = |P(2t)|^2
/// and Int_0^t |f|^2 = acc_P2(2t) / 2.
///
inline DiracTrajectory dirac_from_krein(const Trajectory& krein, std::span<const double> t_grid)
{
    if (krein.lambda.imag() != 0.0)
        throw invalid_input("dirac_from_krein: spectral parameter must be real");
    const double lambda = krein.lambda.real();
    const complex i{0.0, 1.0};
    DiracTrajectory out;
    out.lambda = lambda;
    for (double t : t_grid)
    {
        const std::size_t k = krein.index_of(2.0 * t);
        const auto& s       = krein.states[k];
        const complex e     = std::exp(-i * lambda * t);
        out.t.push_back(t);
        out.phi.push_back(0.5 * e * (s.P + s.P_star));
        out.psi.push_back(e * (s.P - s.P_star) / (2.0 * i));
        out.acc_f2.push_back(0.5 * krein.acc_P2[k]);
    }
    return out;
}

/// Every radius of the Krein grid, halved.
inline DiracTrajectory dirac_from_krein(const Trajectory& krein)
{
    std::vector<double> t = krein.r_grid();
    for (auto& v : t)
        v *= 0.5;
    return dirac_from_krein(krein, t);
}

/// max over grid times t >= r_min of (1/t) Int_0^t |f|^2.
inline double cesaro_sup(const DiracTrajectory& tr, double r_min = 0.1)
{
    double best = -1.0;
    for (std::size_t k = 0; k < tr.size(); ++k)
        if (tr.t[k] >= r_min && tr.t[k] > 0.0)
            best = std::max(best, tr.acc_f2[k] / tr.t[k]);
    if (best < 0.0)
        throw invalid_input("cesaro_sup: no grid time >= r_min");
    return best;
}

/// (max - min) / mean of the Cesaro means over grid times in [t0, t1].
inline double cesaro_plateau_variation(const DiracTrajectory& tr, double t0, double t1)
{
    double lo = INFINITY, hi = -INFINITY, sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < tr.size(); ++k)
        if (tr.t[k] >= t0 && tr.t[k] <= t1 && tr.t[k] > 0.0)
        {
            const double m = tr.acc_f2[k] / tr.t[k];
            lo             = std::min(lo, m);
            hi             = std::max(hi, m);
            sum += m;
            ++n;
        }
    if (n == 0)
        throw invalid_input("cesaro_plateau_variation: no grid time in range");
    return (hi - lo) / (sum / static_cast<double>(n));
}

/// Rows `lambda,r,cesaro_mean,cesaro_sup_so_far` for t >= r_min.
inline void write_cesaro_csv(std::ostream& os, const DiracTrajectory& tr, double r_min = 0.1,
                             bool header = true)
{
    if (header)
        os << "lambda,r,cesaro_mean,cesaro_sup_so_far\n";
    char buf[160];
    double sup = -INFINITY;
    for (std::size_t k = 0; k < tr.size(); ++k)
    {
        if (tr.t[k] < r_min || tr.t[k] <= 0.0)
            continue;
        const double m = tr.acc_f2[k] / tr.t[k];
        sup            = std::max(sup, m);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", tr.lambda, tr.t[k], m, sup);
        os << buf;
    }
}

} // namespace krein
