///
/// \file numerics.hpp
///
/// Fejer-kernel smoothing of line measures and the outer function with
/// boundary modulus |Pi(x)|^2 = 1 / (2 pi sigma'(x)).
///
#pragma once

#include <cmath>
#include <complex>

#include <krein/errors.hpp>
#include <krein/line_density.hpp>
#include <krein/quadrature.hpp>

namespace krein
{

/// R(x) = (e^{ix} - 1)/(ix) = e^{ix/2} sinc(x/2).
inline complex fejer_R(double x)
{
    return std::polar(sinc(0.5 * x), 0.5 * x);
}

/// Phi(x) = |R(x)|^2; integrates to 2 pi over the line.
inline double fejer_Phi(double x)
{
    const double s = sinc(0.5 * x);
    return s * s;
}

///
/// (Phi_r * sigma)(z) with Phi_r(x) = r Phi(r x).
///
/// The exterior constant contributes exactly 2 pi c; the window deviation
/// sigma' - c is integrated cell by cell with Gauss-Legendre panels no wider
/// than pi/2 in the scaled variable r x, which resolves the kernel for any r.
///
inline double fejer_smooth(const LineDensity& d, double z, double r)
{
    if (!(r > 0.0))
        throw invalid_input("fejer_smooth: r must be positive");

    using GL       = GaussLegendre<8>;
    const double c = d.exterior_value();
    const auto s   = d.samples();
    const double h = d.spacing();

    const auto panels = static_cast<std::size_t>(std::ceil(r * h / (0.5 * pi)));
    const std::size_t m = panels == 0 ? 1 : panels;
    const double ph     = h / static_cast<double>(m);

    double window = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
    {
        const double g0 = s[i] - c;
        const double g1 = s[i + 1] - c;
        if (g0 == 0.0 && g1 == 0.0)
            continue;
        const double x0 = d.node(i);
        double cell     = 0.0;
        for (std::size_t p = 0; p < m; ++p)
        {
            for (std::size_t k = 0; k < GL::nodes.size(); ++k)
            {
                const double off = (static_cast<double>(p) + GL::nodes[k]) * ph;
                const double t   = off / h;
                const double g   = (1.0 - t) * g0 + t * g1;
                cell += GL::weights[k] * fejer_Phi(r * (z - x0 - off)) * g;
            }
        }
        window += cell * ph;
    }

    double masses = 0.0;
    for (const auto& pm : d.point_masses())
        masses += pm.weight * fejer_Phi(r * (z - pm.location));

    return two_pi * c + r * window + r * masses;
}

///
/// Outer function Pi(lambda) on the upper half-plane.
///
/// Pi = (2 pi)^{-1/2} exp[-(1/(2 pi i)) Int (1/(s - lambda) - s/(1+s^2)) log sigma'(s) ds]
///
/// With log sigma' = log c + log(sigma'/c) 1_window the constant part
/// integrates to pi i, so only the window deviation needs quadrature.
///
inline complex outer_function(const LineDensity& d, complex lambda)
{
    if (!(lambda.imag() > 0.0))
        throw domain_error("outer_function: Im(lambda) must be positive");
    if (d.longest_zero_run() >= 2)
        throw szego_violation("outer_function: density vanishes on an interval");

    const double c = d.exterior_value();
    complex integral{0.0, 0.0};
    bool finite = true;
    for_each_window_point(d, [&](double s, double sp, double w) {
        if (!(sp > 0.0))
        {
            finite = false;
            return;
        }
        const complex kernel = 1.0 / (s - lambda) - s / (1.0 + s * s);
        integral += w * kernel * std::log(sp / c);
    });
    if (!finite)
        throw szego_violation("outer_function: log sigma' not integrable");

    const complex expo = complex(0.0, 1.0) * integral / two_pi;
    return std::exp(expo) / std::sqrt(two_pi * c);
}

/// Pi(i) = (2 pi)^{-1/2} exp[-(1/(2 pi)) Int log sigma'(s) / (1 + s^2) ds].
inline double outer_at_i(const LineDensity& d)
{
    if (d.longest_zero_run() >= 2)
        throw szego_violation("outer_at_i: density vanishes on an interval");
    double window = 0.0;
    for_each_window_point(d, [&](double s, double sp, double w) {
        window += w * std::log(sp) / (1.0 + s * s);
    });
    if (!std::isfinite(window))
        throw szego_violation("outer_at_i: log sigma' not integrable");
    const double X        = d.half_width();
    const double exterior = std::log(d.exterior_value()) * (pi - 2.0 * std::atan(X));
    return std::exp(-(window + exterior) / two_pi) / std::sqrt(two_pi);
}

} // namespace krein
