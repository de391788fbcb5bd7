///
/// \file coefficient.hpp
///
/// Piecewise-constant Krein coefficient a(r) on [0, R0], zero beyond R0.
///
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <krein/errors.hpp>
#include <krein/quadrature.hpp>

namespace krein
{

class Coefficient
{
public:
    /// breakpoints 0 = r_0 < ... < r_N, values[k] holds a on [r_k, r_{k+1}).
    Coefficient(std::vector<double> breakpoints, std::vector<complex> values,
                std::string description = "piecewise", bool extended = false)
        : m_breaks(std::move(breakpoints)),
          m_values(std::move(values)),
          m_description(std::move(description)),
          m_extended(extended)
    {
        if (m_breaks.empty() || m_breaks.front() != 0.0)
            throw invalid_input("Coefficient: breakpoints must start at 0");
        if (m_values.size() + 1 != m_breaks.size())
            throw invalid_input("Coefficient: need one value per piece");
        for (std::size_t i = 1; i < m_breaks.size(); ++i)
            if (!(m_breaks[i] > m_breaks[i - 1]))
                throw invalid_input("Coefficient: breakpoints not strictly increasing");
        for (const auto& v : m_values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw invalid_input("Coefficient: non-finite value");
        m_real = std::all_of(m_values.begin(), m_values.end(),
                             [](const complex& v) { return v.imag() == 0.0; });
    }

    static Coefficient zero()
    {
        return Coefficient({0.0}, {}, "zero");
    }

    /// c on [0, length), zero afterwards.
    static Coefficient step(complex c, double length)
    {
        if (!(length > 0.0))
            throw invalid_input("Coefficient::step: length must be positive");
        return Coefficient({0.0, length}, {c}, "step");
    }

    ///
    /// Midpoint sampling of a generator on [0, truncation] with pieces no
    /// wider than max_piece_width. The result is the truncation of an
    /// extended coefficient; the radius is part of the model.
    ///
    static Coefficient sampled(const std::function<complex(double)>& gen,
                               double truncation, double max_piece_width,
                               std::string description = "sampled")
    {
        if (!(truncation > 0.0) || !(max_piece_width > 0.0))
            throw invalid_input("Coefficient::sampled: radii must be positive");
        const auto n = static_cast<std::size_t>(std::ceil(truncation / max_piece_width));
        std::vector<double> br(n + 1);
        std::vector<complex> v(n);
        const double h = truncation / static_cast<double>(n);
        for (std::size_t k = 0; k <= n; ++k)
            br[k] = h * static_cast<double>(k);
        br.back() = truncation;
        for (std::size_t k = 0; k < n; ++k)
            v[k] = gen(0.5 * (br[k] + br[k + 1]));
        return Coefficient(std::move(br), std::move(v), std::move(description), true);
    }

    /// a(r) = c (1 + r)^{-p}, square integrable for p > 1/2.
    static Coefficient power_decay(complex c, double p, double truncation,
                                   double max_piece_width)
    {
        return sampled([=](double r) { return c * std::pow(1.0 + r, -p); }, truncation,
                       max_piece_width, "power");
    }

    std::span<const double> breakpoints() const noexcept
    {
        return m_breaks;
    }
    std::span<const complex> values() const noexcept
    {
        return m_values;
    }
    std::size_t pieces() const noexcept
    {
        return m_values.size();
    }
    double support_end() const noexcept
    {
        return m_breaks.back();
    }
    bool real_valued() const noexcept
    {
        return m_real;
    }
    bool extended() const noexcept
    {
        return m_extended;
    }
    const std::string& description() const noexcept
    {
        return m_description;
    }

    /// Index of the piece containing r (r < support_end).
    std::size_t piece_index(double r) const
    {
        auto it = std::upper_bound(m_breaks.begin(), m_breaks.end(), r);
        return static_cast<std::size_t>(it - m_breaks.begin()) - 1;
    }

    complex operator()(double r) const
    {
        if (r < 0.0 || r >= support_end())
            return {0.0, 0.0};
        return m_values[piece_index(r)];
    }

    double l2_norm_squared() const
    {
        double s = 0.0;
        for (std::size_t k = 0; k < m_values.size(); ++k)
            s += std::norm(m_values[k]) * (m_breaks[k + 1] - m_breaks[k]);
        return s;
    }

private:
    std::vector<double> m_breaks;
    std::vector<complex> m_values;
    std::string m_description;
    bool m_extended;
    bool m_real{true};
};

} // namespace krein
