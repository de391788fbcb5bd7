///
/// \file measures.hpp
///
/// Probability measures on the circle, Szego entropies on the line and the
/// circle, and the exact density of a compactly supported Krein system.
///
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <krein/coefficient.hpp>
#include <krein/errors.hpp>
#include <krein/krein.hpp>
#include <krein/line_density.hpp>
#include <krein/quadrature.hpp>

namespace krein
{

/// Value of a Szego-type integral, or a divergence flag.
struct SzegoEntropy
{
    double value;
    bool divergent;
};

///
/// Probability measure mu on [-pi, pi): a density mu'(theta) with respect
/// to d theta plus finitely many atoms.
///
class CircleMeasure
{
public:
    static constexpr std::size_t quadrature_nodes = std::size_t{1} << 14;

    CircleMeasure(std::function<double(double)> density, std::vector<PointMass> atoms = {},
                  std::string description = "circle")
        : m_density(std::move(density)), m_atoms(std::move(atoms)),
          m_description(std::move(description))
    {
        double mass = absolutely_continuous_mass();
        for (const auto& a : m_atoms)
        {
            if (!(a.weight >= 0.0))
                throw invalid_input("CircleMeasure: negative atom");
            mass += a.weight;
        }
        if (std::abs(mass - 1.0) > 1e-10)
            throw invalid_input("CircleMeasure: total mass " + std::to_string(mass) + " != 1");
    }

    /// Rescales an arbitrary nonnegative density (plus atoms) to total mass 1.
    static CircleMeasure normalized(const std::function<double(double)>& density,
                                    std::vector<PointMass> atoms = {},
                                    std::string description = "circle")
    {
        const double ac = trapezoid_mass(density);
        double total    = ac;
        for (const auto& a : atoms)
            total += a.weight;
        if (!(total > 0.0))
            throw invalid_input("CircleMeasure: zero total mass");
        for (auto& a : atoms)
            a.weight /= total;
        return CircleMeasure([density, total](double t) { return density(t) / total; },
                             std::move(atoms), std::move(description));
    }

    static CircleMeasure lebesgue()
    {
        return CircleMeasure([](double) { return 1.0 / two_pi; }, {}, "lebesgue");
    }

    /// mu' = (1 + cos theta) / (2 pi).
    static CircleMeasure raised_cosine()
    {
        return CircleMeasure([](double t) { return (1.0 + std::cos(t)) / two_pi; }, {},
                             "raised-cosine");
    }

    double density(double theta) const
    {
        return m_density(theta);
    }
    std::span<const PointMass> atoms() const noexcept
    {
        return m_atoms;
    }
    const std::string& description() const noexcept
    {
        return m_description;
    }

    /// Periodic trapezoid nodes theta_j = -pi + 2 pi j / N with weight 2 pi / N.
    template <typename Fn>
    void for_each_node(Fn&& fn, std::size_t n = quadrature_nodes) const
    {
        const double h = two_pi / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j)
        {
            const double t = -pi + h * static_cast<double>(j);
            fn(t, m_density(t), h);
        }
    }

private:
    static double trapezoid_mass(const std::function<double(double)>& f)
    {
        const std::size_t n = quadrature_nodes;
        const double h      = two_pi / static_cast<double>(n);
        double s            = 0.0;
        for (std::size_t j = 0; j < n; ++j)
        {
            const double v = f(-pi + h * static_cast<double>(j));
            if (!(v >= 0.0) || !std::isfinite(v))
                throw invalid_input("CircleMeasure: density must be finite and >= 0");
            s += v;
        }
        return s * h;
    }

    double absolutely_continuous_mass() const
    {
        return trapezoid_mass(m_density);
    }

    std::function<double(double)> m_density;
    std::vector<PointMass> m_atoms;
    std::string m_description;
};

///
/// Int |log sigma'(x)| / (1 + x^2) dx over the line. The window is integrated
/// with Gauss-Legendre panels on the interpolant, the exterior analytically.
/// A zero plateau (two or more consecutive zero samples) is reported as +inf.
///
inline SzegoEntropy szego_entropy_line(const LineDensity& d)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (d.longest_zero_run() >= 2)
        return {inf, true};
    double window = 0.0;
    for_each_window_point(d, [&](double x, double sp, double w) {
        window += w * std::abs(std::log(sp)) / (1.0 + x * x);
    });
    if (!std::isfinite(window))
        return {inf, true};
    const double X = d.half_width();
    return {window + std::abs(std::log(d.exterior_value())) * (pi - 2.0 * std::atan(X)), false};
}

///
/// Int_{-pi}^{pi} log mu'(theta) d theta, or -inf when mu' vanishes on an arc.
///
inline SzegoEntropy szego_entropy_circle(const CircleMeasure& m,
                                         std::size_t cells = CircleMeasure::quadrature_nodes)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    using GL             = GaussLegendre<4>;

    std::size_t run = 0, longest = 0;
    m.for_each_node(
        [&](double, double v, double) {
            run     = v <= 0.0 ? run + 1 : 0;
            longest = std::max(longest, run);
        },
        cells);
    if (longest >= 2)
        return {-inf, true};

    const double h = two_pi / static_cast<double>(cells);
    double s       = 0.0;
    for (std::size_t j = 0; j < cells; ++j)
    {
        const double t0 = -pi + h * static_cast<double>(j);
        for (std::size_t k = 0; k < GL::nodes.size(); ++k)
            s += GL::weights[k] * std::log(m.density(t0 + GL::nodes[k] * h));
    }
    s *= h;
    if (!std::isfinite(s))
        return {-inf, true};
    return {s, false};
}

/// sigma'(x) = 1 / (2 pi |P_*(R0, x)|^2) for a coefficient supported in [0, R0].
inline double sigma_prime_exact(const Coefficient& c, double x)
{
    const KreinState s = evolve(c, complex(x, 0.0), c.support_end());
    const double m2    = std::norm(s.P_star);
    if (!(m2 > 0.0) || !std::isfinite(m2))
        throw integrity_error("P_* vanished on the real axis at x = " + std::to_string(x));
    return 1.0 / (two_pi * m2);
}

/// Samples sigma' on [-X, X]; exterior value 1/(2 pi), no point masses.
inline LineDensity density_from_truncated_coefficient(const Coefficient& c,
                                                      double half_width = LineDensity::default_window,
                                                      std::size_t nodes = LineDensity::default_nodes)
{
    return LineDensity::from_function([&](double x) { return sigma_prime_exact(c, x); },
                                      half_width, nodes, LineDensity::free_value);
}

} // namespace krein
