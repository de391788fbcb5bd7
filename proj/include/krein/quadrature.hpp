///
/// \file quadrature.hpp
///
/// Sampled grids, composite trapezoid rule and fixed Gauss-Legendre panels.
///
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <krein/errors.hpp>

namespace krein
{

using complex = std::complex<double>;

inline constexpr double pi     = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

///
/// Complex samples on a strictly increasing set of real abscissae.
///
class SampledGrid
{
public:
    SampledGrid(std::vector<double> points, std::vector<complex> values)
        : m_points(std::move(points)), m_values(std::move(values))
    {
        if (m_points.size() < 2)
            throw invalid_input("SampledGrid: at least 2 points required");
        if (m_points.size() != m_values.size())
            throw invalid_input("SampledGrid: points/values length mismatch");
        for (std::size_t i = 1; i < m_points.size(); ++i)
            if (!(m_points[i] > m_points[i - 1]))
                throw invalid_input("SampledGrid: points not strictly increasing");
    }

    std::span<const double> points() const noexcept
    {
        return m_points;
    }
    std::span<const complex> values() const noexcept
    {
        return m_values;
    }
    std::size_t size() const noexcept
    {
        return m_points.size();
    }

private:
    std::vector<double> m_points;
    std::vector<complex> m_values;
};

/// Composite trapezoid rule over raw spans (no validation beyond sizes).
inline complex trapezoid(std::span<const double> x, std::span<const complex> f)
{
    if (x.size() < 2 || x.size() != f.size())
        throw invalid_input("trapezoid: need >= 2 points of matching length");
    complex sum{0.0, 0.0};
    for (std::size_t i = 1; i < x.size(); ++i)
        sum += 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
    return sum;
}

inline complex integrate_trapezoid(const SampledGrid& grid)
{
    return trapezoid(grid.points(), grid.values());
}

/// Nodes and weights of the Gauss-Legendre rule on [0, 1].
template <std::size_t N>
struct GaussLegendre;

template <>
struct GaussLegendre<4>
{
    static constexpr std::array<double, 4> nodes{
        0.0694318442029737123880267555535953, 0.3300094782075718675986671204483777,
        0.6699905217924281324013328795516223, 0.9305681557970262876119732444464047};
    static constexpr std::array<double, 4> weights{
        0.1739274225687269286865319746109997, 0.3260725774312730713134680253890003,
        0.3260725774312730713134680253890003, 0.1739274225687269286865319746109997};
};

template <>
struct GaussLegendre<8>
{
    static constexpr std::array<double, 8> nodes{
        0.0198550717512318841582195657152635, 0.1016667612931866302042230317620848,
        0.2372337950418355070911304754053768, 0.4082826787521750975302619288199080,
        0.5917173212478249024697380711800920, 0.7627662049581644929088695245946232,
        0.8983332387068133697957769682379152, 0.9801449282487681158417804342847365};
    static constexpr std::array<double, 8> weights{
        0.0506142681451881295762656771549811, 0.1111905172266872352721779972131204,
        0.1568533229389436436689811009933007, 0.1813418916891809914825752246385978,
        0.1813418916891809914825752246385978, 0.1568533229389436436689811009933007,
        0.1111905172266872352721779972131204, 0.0506142681451881295762656771549811};
};

/// n equally spaced points from a to b inclusive.
inline std::vector<double> uniform_grid(double a, double b, std::size_t n)
{
    if (n < 2 || !(b > a))
        throw invalid_input("uniform_grid: need n >= 2 and b > a");
    std::vector<double> x(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = a + h * static_cast<double>(i);
    x.back() = b;
    return x;
}

/// sin(x)/x with the removable singularity filled in.
inline double sinc(double x)
{
    if (std::abs(x) < 1e-6)
        return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

/// sinh(z)/z and cosh(z) as functions of w = z^2 (even, branch free).
inline void cosh_sinhc(complex w, complex& ch, complex& shc)
{
    if (std::abs(w) < 1e-8)
    {
        ch  = 1.0 + w / 2.0 + w * w / 24.0;
        shc = 1.0 + w / 6.0 + w * w / 120.0;
        return;
    }
    const complex z = std::sqrt(w);
    ch              = std::cosh(z);
    shc             = std::sinh(z) / z;
}

} // namespace krein
