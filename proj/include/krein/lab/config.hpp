///
/// \file config.hpp
///
/// JSON experiment configuration and the parsers for the model objects it
/// describes (coefficients, potentials, Verblunsky sequences, grids).
///
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include <krein/coefficient.hpp>
#include <krein/dirac.hpp>
#include <krein/errors.hpp>
#include <krein/opuc.hpp>

namespace krein::lab
{

using json = nlohmann::json;

class config_error : public krein::error
{
public:
    using krein::error::error;
};

/// A number, [re, im] or {"re": .., "im": ..}.
inline complex parse_complex(const json& j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_object() && j.contains("re"))
        return {j.at("re").get<double>(), j.value("im", 0.0)};
    throw config_error("expected a complex number, got " + j.dump());
}

inline const json& require(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw config_error(std::string("missing required field '") + key + "'");
    return j.at(key);
}

inline double require_number(const json& j, const char* key)
{
    const json& v = require(j, key);
    if (!v.is_number())
        throw config_error(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

inline std::vector<double> number_list(const json& j, const char* key)
{
    const json& v = require(j, key);
    if (!v.is_array())
        throw config_error(std::string("field '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v)
    {
        if (!e.is_number())
            throw config_error(std::string("field '") + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

inline std::vector<complex> complex_list(const json& j, const char* key)
{
    const json& v = require(j, key);
    if (!v.is_array())
        throw config_error(std::string("field '") + key + "' must be an array");
    std::vector<complex> out;
    for (const auto& e : v)
        out.push_back(parse_complex(e));
    return out;
}

inline void require_increasing(const std::vector<double>& v, const char* what)
{
    if (v.empty())
        throw config_error(std::string(what) + " must not be empty");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1]))
            throw config_error(std::string(what) + " must be strictly increasing");
}

inline Coefficient parse_coefficient(const json& j)
{
    const std::string type = j.value("type", "");
    try
    {
        if (type == "zero")
            return Coefficient::zero();
        if (type == "step")
            return Coefficient::step(parse_complex(require(j, "value")), require_number(j, "length"));
        if (type == "piecewise")
            return Coefficient(number_list(j, "breakpoints"), complex_list(j, "values"));
        if (type == "power")
            return Coefficient::power_decay(parse_complex(require(j, "amplitude")),
                                            require_number(j, "exponent"),
                                            require_number(j, "truncation"),
                                            j.value("max_piece_width", 0.05));
    }
    catch (const invalid_input& e)
    {
        throw config_error(std::string("coefficient: ") + e.what());
    }
    throw config_error("coefficient: unknown type '" + type + "'");
}

inline DiracPotential parse_potential(const json& j)
{
    const std::string type = j.value("type", "");
    try
    {
        if (type == "zero")
            return DiracPotential::zero();
        if (type == "piecewise")
            return DiracPotential(number_list(j, "breakpoints"), number_list(j, "p"),
                                  number_list(j, "q"));
        if (type == "power")
        {
            const double pa = j.value("p_amplitude", 0.0);
            const double qa = j.value("q_amplitude", 0.0);
            const double ex = require_number(j, "exponent");
            return DiracPotential::sampled([=](double t) { return pa * std::pow(1.0 + t, -ex); },
                                           [=](double t) { return qa * std::pow(1.0 + t, -ex); },
                                           require_number(j, "truncation"),
                                           j.value("max_piece_width", 0.05), "power");
        }
    }
    catch (const invalid_input& e)
    {
        throw config_error(std::string("potential: ") + e.what());
    }
    throw config_error("potential: unknown type '" + type + "'");
}

inline VerblunskySeq parse_verblunsky(const json& j)
{
    const std::string type = j.value("type", "list");
    try
    {
        if (type == "list")
            return VerblunskySeq(complex_list(j, "alphas"));
        if (type == "constant")
            return VerblunskySeq::constant(parse_complex(require(j, "value")),
                                           static_cast<std::size_t>(require_number(j, "count")));
        if (type == "decay")
        {
            // alpha_n = amplitude / (n + 1), square summable
            const complex a = parse_complex(require(j, "amplitude"));
            const auto n    = static_cast<std::size_t>(require_number(j, "count"));
            std::vector<complex> al(n);
            for (std::size_t k = 0; k < n; ++k)
                al[k] = a / static_cast<double>(k + 1);
            return VerblunskySeq(std::move(al));
        }
    }
    catch (const invalid_input& e)
    {
        throw config_error(std::string("verblunsky: ") + e.what());
    }
    throw config_error("verblunsky: unknown type '" + type + "'");
}

///
/// {"values": [...]} or {"min": a, "max": b, "count": n, "imag": y}.
///
inline std::vector<complex> parse_spectral_grid(const json& j)
{
    if (j.contains("values"))
        return complex_list(j, "values");
    const double lo = require_number(j, "min");
    const double hi = require_number(j, "max");
    const auto n    = static_cast<std::size_t>(require_number(j, "count"));
    const double y  = j.value("imag", 0.0);
    if (n == 0 || (n > 1 && !(hi > lo)))
        throw config_error("spectral_grid: need count >= 1 and max > min");
    std::vector<complex> out(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        const double x = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
        out[k]         = {x, y};
    }
    return out;
}

///
/// Parsed experiment description. The raw document is kept for the echo in
/// the summary, with the effective seed written back into it.
///
struct ExperimentConfig
{
    std::string scenario;
    json doc;
    std::uint64_t seed{0};

    static ExperimentConfig from_json(json j)
    {
        if (!j.is_object())
            throw config_error("config must be a JSON object");
        ExperimentConfig c;
        const json& s = require(j, "scenario");
        if (!s.is_string())
            throw config_error("'scenario' must be a string");
        c.scenario = s.get<std::string>();
        if (j.contains("seed"))
        {
            const json& v = j.at("seed");
            if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
                throw config_error("'seed' must be a nonnegative integer");
            c.seed = j.at("seed").get<std::uint64_t>();
        }
        c.doc = std::move(j);
        return c;
    }

    static ExperimentConfig parse(const std::string& text)
    {
        try
        {
            return from_json(json::parse(text));
        }
        catch (const json::exception& e)
        {
            throw config_error(std::string("invalid JSON: ") + e.what());
        }
    }

    void override_seed(std::uint64_t s)
    {
        seed       = s;
        doc["seed"] = s;
    }

    bool has(const char* key) const
    {
        return doc.contains(key);
    }

    double number(const char* key, double fallback) const
    {
        if (!doc.contains(key))
            return fallback;
        if (!doc.at(key).is_number())
            throw config_error(std::string("field '") + key + "' must be a number");
        return doc.at(key).get<double>();
    }

    /// Positive tolerance, defaulted when absent.
    double tolerance(const char* key, double fallback) const
    {
        const json& t = doc.contains("tolerances") ? doc.at("tolerances") : json::object();
        const double v = t.contains(key) ? t.at(key).get<double>() : fallback;
        if (!(v > 0.0))
            throw config_error(std::string("tolerance '") + key + "' must be positive");
        return v;
    }

    std::vector<double> schedule(const char* key = "schedule") const
    {
        auto s = number_list(doc, key);
        require_increasing(s, key);
        if (!(s.front() > 0.0))
            throw config_error(std::string(key) + " must be positive");
        return s;
    }
};

} // namespace krein::lab
