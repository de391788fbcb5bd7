///
/// \file result.hpp
///
/// Result rows of an experiment run and their CSV form.
///
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace krein::lab
{

/// Round-trip safe decimal form (17 significant digits).
inline std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

///
/// One measured quantity. Asserted rows carry a tolerance and pass exactly
/// when rel_error <= tolerance; exploratory rows carry neither.
///
struct ResultRow
{
    std::string scenario;
    std::string quantity;
    std::string parameters;
    double measured{0.0};
    double reference{0.0};
    double rel_error{0.0};
    std::optional<double> tolerance;

    std::optional<bool> pass() const
    {
        if (!tolerance)
            return std::nullopt;
        return std::isfinite(rel_error) && rel_error <= *tolerance;
    }
};

/// |m - ref| / |ref|, or |m - ref| when the reference is zero.
inline double relative_error(double measured, double reference)
{
    const double d = std::abs(measured - reference);
    return reference != 0.0 ? d / std::abs(reference) : d;
}

class ResultTable
{
public:
    explicit ResultTable(std::string scenario) : m_scenario(std::move(scenario)) {}

    /// Asserted row comparing against a reference value.
    void check(std::string quantity, std::string parameters, double measured, double reference,
               double tolerance)
    {
        m_rows.push_back({m_scenario, std::move(quantity), std::move(parameters), measured,
                          reference, relative_error(measured, reference), tolerance});
    }

    /// Asserted row whose measured value is itself the error (reference 0).
    void check_error(std::string quantity, std::string parameters, double error, double tolerance)
    {
        m_rows.push_back({m_scenario, std::move(quantity), std::move(parameters), error, 0.0,
                          std::abs(error), tolerance});
    }

    /// Asserted upper bound; the error is the relative excess over the bound.
    void check_bound(std::string quantity, std::string parameters, double measured, double bound,
                     double tolerance)
    {
        const double excess = std::max(0.0, measured - bound) / std::abs(bound);
        m_rows.push_back({m_scenario, std::move(quantity), std::move(parameters), measured, bound,
                          std::isnan(measured) ? NAN : excess, tolerance});
    }

    /// Unasserted row; the reference may be NaN when none exists.
    void report(std::string quantity, std::string parameters, double measured, double reference)
    {
        const double e = std::isnan(reference) ? NAN : relative_error(measured, reference);
        m_rows.push_back({m_scenario, std::move(quantity), std::move(parameters), measured,
                          reference, e, std::nullopt});
    }

    const std::vector<ResultRow>& rows() const noexcept
    {
        return m_rows;
    }

    std::size_t passed() const
    {
        return count(true);
    }
    std::size_t failed() const
    {
        return count(false);
    }
    std::size_t exploratory() const
    {
        std::size_t n = 0;
        for (const auto& r : m_rows)
            n += r.pass().has_value() ? 0 : 1;
        return n;
    }

    void write_csv(std::ostream& os) const
    {
        os << "scenario,quantity,parameters,measured,reference,rel_error,tolerance,pass\n";
        for (const auto& r : m_rows)
        {
            const auto p = r.pass();
            os << r.scenario << ',' << r.quantity << ',' << r.parameters << ',' << fmt(r.measured)
               << ',' << fmt(r.reference) << ',' << fmt(r.rel_error) << ','
               << (r.tolerance ? fmt(*r.tolerance) : std::string()) << ','
               << (p ? (*p ? "true" : "false") : "") << '\n';
        }
    }

private:
    std::size_t count(bool value) const
    {
        std::size_t n = 0;
        for (const auto& r : m_rows)
        {
            const auto p = r.pass();
            n += (p && *p == value) ? 1 : 0;
        }
        return n;
    }

    std::string m_scenario;
    std::vector<ResultRow> m_rows;
};

} // namespace krein::lab
