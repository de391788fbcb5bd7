///
/// \file line_density.hpp
///
/// Spectral densities on the real line: samples on a symmetric window,
/// a constant exterior value and optional point masses.
///
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include <krein/errors.hpp>
#include <krein/quadrature.hpp>

namespace krein
{

struct PointMass
{
    double location;
    double weight;
};

///
/// sigma' sampled at uniform nodes on [-X, X], linearly interpolated between
/// nodes, equal to `exterior_value` outside the window.
///
class LineDensity
{
public:
    static constexpr double free_value     = 1.0 / two_pi;
    static constexpr double default_window = 10.0;
    static constexpr std::size_t default_nodes = 4096;

    LineDensity(double half_width, std::vector<double> samples,
                double exterior_value = free_value,
                std::vector<PointMass> point_masses = {})
        : m_half_width(half_width),
          m_samples(std::move(samples)),
          m_exterior(exterior_value),
          m_masses(std::move(point_masses))
    {
        if (!(m_half_width > 0.0))
            throw invalid_input("LineDensity: window half-width must be positive");
        if (m_samples.size() < 2)
            throw invalid_input("LineDensity: at least 2 samples required");
        if (!(m_exterior > 0.0))
            throw invalid_input("LineDensity: exterior value must be positive");
        for (double v : m_samples)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw invalid_input("LineDensity: density must be finite and >= 0");
        for (const auto& m : m_masses)
            if (!(m.weight >= 0.0))
                throw invalid_input("LineDensity: point mass weight must be >= 0");
        m_spacing = 2.0 * m_half_width / static_cast<double>(m_samples.size() - 1);
    }

    static LineDensity from_function(const std::function<double(double)>& f,
                                     double half_width = default_window,
                                     std::size_t nodes = default_nodes,
                                     double exterior_value = free_value,
                                     std::vector<PointMass> point_masses = {})
    {
        auto x = uniform_grid(-half_width, half_width, nodes);
        std::vector<double> s(nodes);
        for (std::size_t i = 0; i < nodes; ++i)
            s[i] = f(x[i]);
        return LineDensity(half_width, std::move(s), exterior_value,
                           std::move(point_masses));
    }

    /// sigma' == value on the whole line.
    static LineDensity constant(double value, double half_width = default_window,
                                std::size_t nodes = default_nodes)
    {
        return LineDensity(half_width, std::vector<double>(nodes, value), value);
    }

    double operator()(double x) const
    {
        if (x < -m_half_width || x > m_half_width)
            return m_exterior;
        const double u = (x + m_half_width) / m_spacing;
        auto i         = static_cast<std::size_t>(u);
        if (i >= m_samples.size() - 1)
            return m_samples.back();
        const double t = u - static_cast<double>(i);
        return (1.0 - t) * m_samples[i] + t * m_samples[i + 1];
    }

    double node(std::size_t i) const
    {
        return i + 1 == m_samples.size()
                   ? m_half_width
                   : -m_half_width + m_spacing * static_cast<double>(i);
    }

    std::span<const double> samples() const noexcept
    {
        return m_samples;
    }
    std::size_t size() const noexcept
    {
        return m_samples.size();
    }
    double half_width() const noexcept
    {
        return m_half_width;
    }
    double spacing() const noexcept
    {
        return m_spacing;
    }
    double exterior_value() const noexcept
    {
        return m_exterior;
    }
    std::span<const PointMass> point_masses() const noexcept
    {
        return m_masses;
    }

    /// Length of the longest run of consecutive zero samples.
    std::size_t longest_zero_run() const
    {
        std::size_t best = 0, run = 0;
        for (double v : m_samples)
        {
            run  = (v <= 0.0) ? run + 1 : 0;
            best = std::max(best, run);
        }
        return best;
    }

    /// Two columns `x,sigma_prime`, one row per window node.
    void write_csv(std::ostream& os) const
    {
        os << "x,sigma_prime\n";
        char buf[64];
        for (std::size_t i = 0; i < m_samples.size(); ++i)
        {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", node(i), m_samples[i]);
            os << buf;
        }
    }

private:
    double m_half_width;
    std::vector<double> m_samples;
    double m_exterior;
    std::vector<PointMass> m_masses;
    double m_spacing{};
};

/// Gauss-Legendre panels over every window cell; `fn(x, sigma_prime(x), w)`
/// receives each quadrature point with its weight.
template <typename Fn>
void for_each_window_point(const LineDensity& d, Fn&& fn)
{
    using GL       = GaussLegendre<4>;
    const auto s   = d.samples();
    const double h = d.spacing();
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
    {
        const double x0 = d.node(i);
        for (std::size_t k = 0; k < GL::nodes.size(); ++k)
        {
            const double t = GL::nodes[k];
            fn(x0 + t * h, (1.0 - t) * s[i] + t * s[i + 1], GL::weights[k] * h);
        }
    }
}

} // namespace krein
