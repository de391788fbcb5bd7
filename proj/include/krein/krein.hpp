///
/// \file krein.hpp
///
/// The Krein system
///
///   dP/dr   = i lambda P - conj(a) P_*,   P(0)   = 1,
///   dP_*/dr = -a P,                       P_*(0) = 1,
///
/// propagated exactly for piecewise-constant coefficients, together with the
/// running integrals needed by the Cesaro and average functionals.
///
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <span>
#include <vector>

#include <krein/coefficient.hpp>
#include <krein/errors.hpp>
#include <krein/quadrature.hpp>

namespace krein
{

struct KreinState
{
    double r{0.0};
    complex lambda{0.0, 0.0};
    complex P{1.0, 0.0};
    complex P_star{1.0, 0.0};
};

/// 2x2 complex transfer matrix acting on (P, P_*).
struct Transfer
{
    complex m00{1.0, 0.0}, m01{0.0, 0.0};
    complex m10{0.0, 0.0}, m11{1.0, 0.0};

    complex det() const
    {
        return m00 * m11 - m01 * m10;
    }

    /// Matrix product (*this) * rhs.
    Transfer operator*(const Transfer& rhs) const
    {
        return {m00 * rhs.m00 + m01 * rhs.m10, m00 * rhs.m01 + m01 * rhs.m11,
                m10 * rhs.m00 + m11 * rhs.m10, m10 * rhs.m01 + m11 * rhs.m11};
    }

    void apply(complex& P, complex& P_star) const
    {
        const complex p = m00 * P + m01 * P_star;
        const complex q = m10 * P + m11 * P_star;
        P               = p;
        P_star          = q;
    }
};

///
/// exp(M dr) for M = [[i lambda, -conj(a)], [-a, 0]].
///
/// With tau = tr(M)/2 and delta^2 = tau^2 + |a|^2 (eigenvalues tau +- delta),
/// exp(M h) = e^{tau h} [cosh(delta h) I + sinh(delta h)/delta (M - tau I)].
/// Both hyperbolic factors are even in delta, so no eigenvector is formed and
/// the coalescing case needs no special branch beyond the series in
/// cosh_sinhc.
///
inline Transfer krein_transfer(complex lambda, complex a, double dr)
{
    const complex i{0.0, 1.0};
    if (a == complex{0.0, 0.0})
        return {std::exp(i * lambda * dr), 0.0, 0.0, 1.0};

    const complex tau = 0.5 * i * lambda;
    const complex w   = (tau * tau + std::norm(a)) * (dr * dr);
    complex ch, shc;
    cosh_sinhc(w, ch, shc);
    const complex e = std::exp(tau * dr);
    const complex s = shc * dr;
    return {e * (ch + s * tau), -e * s * std::conj(a), -e * s * a, e * (ch - s * tau)};
}

/// Exact solution at r + dr of the constant-coefficient system.
inline KreinState step_exact(const KreinState& state, complex a, double dr)
{
    if (!(dr > 0.0))
        throw invalid_input("step_exact: dr must be positive");
    // long steps are composed from shorter ones to keep e^{tau h} and
    // cosh(delta h) from cancelling against each other
    const complex tau   = complex(0.0, 0.5) * state.lambda;
    const double growth = std::max(std::abs(tau), std::sqrt(std::abs(tau * tau + std::norm(a)))) * dr;
    const auto n        = a == complex{0.0, 0.0}
                              ? std::size_t{1}
                              : std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(growth / 2.0)));
    const Transfer t    = krein_transfer(state.lambda, a, dr / static_cast<double>(n));
    KreinState out      = state;
    for (std::size_t k = 0; k < n; ++k)
        t.apply(out.P, out.P_star);
    out.r = state.r + dr;
    return out;
}

/// Calls fn(u, v, a) for each maximal sub-interval [u, v] of [r0, r1] on
/// which the coefficient is constant.
template <typename Fn>
void for_each_segment(const Coefficient& c, double r0, double r1, Fn&& fn)
{
    double u = r0;
    while (u < r1)
    {
        if (u >= c.support_end())
        {
            fn(u, r1, complex{0.0, 0.0});
            return;
        }
        const std::size_t k = c.piece_index(u);
        const double end    = std::min(r1, c.breakpoints()[k + 1]);
        fn(u, end, c.values()[k]);
        u = end;
    }
}

/// Fundamental matrix of the system from r0 to r1.
inline Transfer evolve_transfer(const Coefficient& c, complex lambda, double r0, double r1)
{
    Transfer total;
    for_each_segment(c, r0, r1, [&](double u, double v, complex a) {
        const double h = v - u;
        KreinState e1{0.0, lambda, 1.0, 0.0}, e2{0.0, lambda, 0.0, 1.0};
        e1 = step_exact(e1, a, h);
        e2 = step_exact(e2, a, h);
        total = Transfer{e1.P, e2.P, e1.P_star, e2.P_star} * total;
    });
    return total;
}

/// (P, P_*) at radius r without recording intermediate states.
inline KreinState evolve(const Coefficient& c, complex lambda, double r)
{
    if (r < 0.0)
        throw invalid_input("evolve: negative radius");
    KreinState s{0.0, lambda, 1.0, 1.0};
    for_each_segment(c, 0.0, r, [&](double u, double v, complex a) {
        s   = step_exact(s, a, v - u);
        s.r = v;
    });
    s.r = r;
    return s;
}

///
/// Sampled solution for one spectral parameter with running integrals
///   acc_P2(r)       = Int_0^r |P(s)|^2 ds,
///   acc_Pstar(r)    = Int_0^r P_*(s) ds,
///   acc_absPstar(r) = Int_0^r |P_*(s)| ds.
///
struct Trajectory
{
    complex lambda{0.0, 0.0};
    std::vector<KreinState> states;
    std::vector<double> acc_P2;
    std::vector<complex> acc_Pstar;
    std::vector<double> acc_absPstar;

    std::size_t size() const noexcept
    {
        return states.size();
    }

    double radius(std::size_t i) const
    {
        return states[i].r;
    }

    std::vector<double> r_grid() const
    {
        std::vector<double> r(states.size());
        for (std::size_t i = 0; i < states.size(); ++i)
            r[i] = states[i].r;
        return r;
    }

    /// Index of grid radius r; throws if r is not (to 1e-12 relative) on the grid.
    std::size_t index_of(double r) const
    {
        auto it = std::lower_bound(states.begin(), states.end(), r,
                                   [](const KreinState& s, double v) { return s.r < v; });
        const double tol = 1e-12 * std::max(1.0, std::abs(r));
        if (it != states.end() && std::abs(it->r - r) <= tol)
            return static_cast<std::size_t>(it - states.begin());
        if (it != states.begin() && std::abs(std::prev(it)->r - r) <= tol)
            return static_cast<std::size_t>(it - states.begin()) - 1;
        throw invalid_input("Trajectory: radius not on the grid");
    }

    /// Columns r,re_P,im_P,re_Pstar,im_Pstar,acc_P2.
    void write_csv(std::ostream& os) const
    {
        os << "r,re_P,im_P,re_Pstar,im_Pstar,acc_P2\n";
        char buf[256];
        for (std::size_t i = 0; i < states.size(); ++i)
        {
            const auto& s = states[i];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.r,
                          s.P.real(), s.P.imag(), s.P_star.real(), s.P_star.imag(),
                          acc_P2[i]);
            os << buf;
        }
    }
};

namespace detail
{

struct Accumulators
{
    double p2{0.0};
    complex pstar{0.0, 0.0};
    double abs_pstar{0.0};
};

/// Advances `s` across [u, u + len] with constant a, adding the in-step integrals.
inline void advance_segment(KreinState& s, Accumulators& acc, complex a, double len)
{
    const complex i{0.0, 1.0};
    if (a == complex{0.0, 0.0})
    {
        // P = P0 e^{i lambda t}, P_* constant
        const double y = s.lambda.imag();
        const double x = -2.0 * y * len;
        const double e = std::abs(x) < 1e-12 ? 1.0 + 0.5 * x : std::expm1(x) / x;
        acc.p2 += std::norm(s.P) * len * e;
        acc.pstar += s.P_star * len;
        acc.abs_pstar += std::abs(s.P_star) * len;
        s.P *= std::exp(i * s.lambda * len);
        s.r += len;
        return;
    }

    using GL          = GaussLegendre<4>;
    const double freq = std::max({1.0, std::abs(s.lambda), std::abs(a)});
    const auto cells  = static_cast<std::size_t>(std::ceil(len * freq / 0.25));
    const std::size_t n = std::max<std::size_t>(1, cells);
    const double h      = len / static_cast<double>(n);

    std::array<Transfer, 4> sub;
    for (std::size_t k = 0; k < 4; ++k)
        sub[k] = krein_transfer(s.lambda, a, GL::nodes[k] * h);
    const Transfer full = krein_transfer(s.lambda, a, h);

    for (std::size_t c = 0; c < n; ++c)
    {
        double p2 = 0.0, ap = 0.0;
        complex ps{0.0, 0.0};
        for (std::size_t k = 0; k < 4; ++k)
        {
            complex P = s.P, Q = s.P_star;
            sub[k].apply(P, Q);
            p2 += GL::weights[k] * std::norm(P);
            ps += GL::weights[k] * Q;
            ap += GL::weights[k] * std::abs(Q);
        }
        acc.p2 += h * p2;
        acc.pstar += h * ps;
        acc.abs_pstar += h * ap;
        full.apply(s.P, s.P_star);
    }
    s.r += len;
}

} // namespace detail

///
/// Propagates (P, P_*) from r = 0 and records the state at every radius of
/// r_grid. Steps are split at coefficient breakpoints, so the result is exact
/// for the piecewise-constant model up to rounding.
///
inline Trajectory propagate(const Coefficient& c, complex lambda, std::span<const double> r_grid)
{
    if (r_grid.empty())
        throw invalid_input("propagate: empty grid");
    if (r_grid.front() < 0.0)
        throw invalid_input("propagate: negative radius");
    for (std::size_t k = 1; k < r_grid.size(); ++k)
        if (!(r_grid[k] > r_grid[k - 1]))
            throw invalid_input("propagate: grid not strictly increasing");

    Trajectory t;
    t.lambda = lambda;
    t.states.reserve(r_grid.size());
    t.acc_P2.reserve(r_grid.size());
    t.acc_Pstar.reserve(r_grid.size());
    t.acc_absPstar.reserve(r_grid.size());

    KreinState s{0.0, lambda, 1.0, 1.0};
    detail::Accumulators acc;
    double here = 0.0;
    for (double target : r_grid)
    {
        for_each_segment(c, here, target, [&](double u, double v, complex a) {
            detail::advance_segment(s, acc, a, v - u);
            s.r = v;
        });
        here = target;
        s.r  = target;
        t.states.push_back(s);
        t.acc_P2.push_back(acc.p2);
        t.acc_Pstar.push_back(acc.pstar);
        t.acc_absPstar.push_back(acc.abs_pstar);
    }
    return t;
}

inline Trajectory propagate(const Coefficient& c, complex lambda, const std::vector<double>& r_grid)
{
    return propagate(c, lambda, std::span<const double>(r_grid));
}

inline void require_shared_grid(const Trajectory& a, const Trajectory& b)
{
    if (a.size() != b.size())
        throw invalid_input("trajectories have different grids");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.states[i].r != b.states[i].r)
            throw invalid_input("trajectories have different grids");
    if (a.size() < 2 || a.states.front().r != 0.0)
        throw invalid_input("shared grid must start at r = 0");
}

/// Trapezoid value of Int_0^{r_i} P(s, lambda) conj(P(s, mu)) ds on the shared grid.
inline complex cross_integral(const Trajectory& lam, const Trajectory& mu, std::size_t i)
{
    complex sum{0.0, 0.0};
    for (std::size_t k = 1; k <= i; ++k)
    {
        const double h   = lam.states[k].r - lam.states[k - 1].r;
        const complex f0 = lam.states[k - 1].P * std::conj(mu.states[k - 1].P);
        const complex f1 = lam.states[k].P * std::conj(mu.states[k].P);
        sum += 0.5 * h * (f0 + f1);
    }
    return sum;
}

///
/// Normalized defect of the Christoffel-Darboux identity
///   P(l) conj P(m) - P_*(l) conj P_*(m) = i (l - conj m) Int_0^r P(s,l) conj P(s,m) ds.
///
inline double cd_residual(const Trajectory& lam, const Trajectory& mu, double r)
{
    require_shared_grid(lam, mu);
    const std::size_t i = lam.index_of(r);
    const auto& a       = lam.states[i];
    const auto& b       = mu.states[i];
    const complex lhs   = a.P * std::conj(b.P) - a.P_star * std::conj(b.P_star);
    const complex rhs =
        complex(0.0, 1.0) * (lam.lambda - std::conj(mu.lambda)) * cross_integral(lam, mu, i);
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(a.P_star * b.P_star));
}

/// (1/r) Int_0^r |P(s, x)|^2 ds.
inline double cesaro_mean_p2(const Trajectory& t, double r)
{
    if (!(r > 0.0))
        throw invalid_input("cesaro_mean_p2: r must be positive");
    return t.acc_P2[t.index_of(r)] / r;
}

/// (1/r) Int_0^r P_*(rho, lambda) d rho.
inline complex teplyaev_average(const Trajectory& t, double r)
{
    if (!(r > 0.0))
        throw invalid_input("teplyaev_average: r must be positive");
    return t.acc_Pstar[t.index_of(r)] / r;
}

/// (1/r) Int_0^r |P_*(rho, lambda)| d rho.
inline double abs_pstar_average(const Trajectory& t, double r)
{
    if (!(r > 0.0))
        throw invalid_input("abs_pstar_average: r must be positive");
    return t.acc_absPstar[t.index_of(r)] / r;
}

/// sqrt(1 + 1/(2 r Im lambda)) |Pi(lambda)|, the upper bound for the averages above.
inline double average_bound(double r, complex lambda, complex Pi)
{
    return std::sqrt(1.0 + 1.0 / (2.0 * r * lambda.imag())) * std::abs(Pi);
}

} // namespace krein
