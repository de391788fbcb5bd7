///
/// \file grids.hpp
///
/// Radius grids for trajectories.
///
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <krein/errors.hpp>

namespace krein
{

///
/// Uniform spacing `step` up to `knee`, then multiplicative growth by `ratio`
/// until r_max. Starts at 0 and always ends exactly at r_max.
///
inline std::vector<double> default_r_grid(double r_max, double step = 0.01, double knee = 10.0,
                                          double ratio = 1.05)
{
    if (!(r_max > 0.0) || !(step > 0.0) || !(ratio > 1.0))
        throw invalid_input("default_r_grid: bad parameters");
    std::vector<double> r{0.0};
    for (long k = 1;; ++k)
    {
        const double v = step * static_cast<double>(k);
        if (v > knee + 1e-12 || v >= r_max)
            break;
        r.push_back(v);
    }
    double v = r.back();
    while (v * ratio < r_max)
    {
        v *= ratio;
        r.push_back(v);
    }
    if (r.back() < r_max)
        r.push_back(r_max);
    return r;
}

/// Sorted union of a grid and extra radii (duplicates within 1e-12 merged).
inline std::vector<double> with_radii(std::vector<double> grid, const std::vector<double>& extra)
{
    grid.insert(grid.end(), extra.begin(), extra.end());
    std::sort(grid.begin(), grid.end());
    std::vector<double> out;
    out.reserve(grid.size());
    for (double v : grid)
        if (out.empty() || v - out.back() > 1e-12 * std::max(1.0, std::abs(v)))
            out.push_back(v);
    return out;
}

} // namespace krein
