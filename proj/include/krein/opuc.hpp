///
/// \file opuc.hpp
///
/// Orthonormal polynomials on the unit circle through their Verblunsky
/// coefficients:
///
///   phi_{n+1}   = (z phi_n - conj(alpha_n) phi_n^*) / rho_n,
///   phi_{n+1}^* = (phi_n^* - alpha_n z phi_n) / rho_n,   rho_n = sqrt(1 - |alpha_n|^2).
///
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <krein/errors.hpp>
#include <krein/measures.hpp>
#include <krein/quadrature.hpp>

namespace krein
{

class VerblunskySeq
{
public:
    VerblunskySeq() = default;

    explicit VerblunskySeq(std::vector<complex> alphas) : m_alphas(std::move(alphas))
    {
        for (const auto& a : m_alphas)
            if (!(std::abs(a) < 1.0))
                throw invalid_input("VerblunskySeq: |alpha| must be < 1");
    }

    /// alpha_n = value for n < count (Geronimus-type, not in the Szego class).
    static VerblunskySeq constant(complex value, std::size_t count)
    {
        return VerblunskySeq(std::vector<complex>(count, value));
    }

    std::span<const complex> alphas() const noexcept
    {
        return m_alphas;
    }
    std::size_t size() const noexcept
    {
        return m_alphas.size();
    }
    /// alpha_n, zero past the stored sequence.
    complex operator[](std::size_t n) const noexcept
    {
        return n < m_alphas.size() ? m_alphas[n] : complex{0.0, 0.0};
    }

private:
    std::vector<complex> m_alphas;
};

struct OpucEval
{
    complex z;
    std::vector<complex> phis;
    std::vector<complex> phi_stars;
};

/// phi_0..phi_degree and their reversals at z (degree defaults to the sequence length).
inline OpucEval eval_opuc(const VerblunskySeq& seq, complex z, std::size_t degree)
{
    OpucEval out{z, std::vector<complex>(degree + 1), std::vector<complex>(degree + 1)};
    complex p{1.0, 0.0}, q{1.0, 0.0};
    out.phis[0] = out.phi_stars[0] = p;
    for (std::size_t n = 0; n < degree; ++n)
    {
        const complex a  = seq[n];
        const double rho = std::sqrt(1.0 - std::norm(a));
        const complex np = (z * p - std::conj(a) * q) / rho;
        const complex nq = (q - a * z * p) / rho;
        p                = np;
        q                = nq;
        out.phis[n + 1]      = p;
        out.phi_stars[n + 1] = q;
    }
    return out;
}

inline OpucEval eval_opuc(const VerblunskySeq& seq, complex z)
{
    return eval_opuc(seq, z, seq.size());
}

///
/// Bernstein-Szego density 1 / (2 pi |phi_N^*(e^{i theta})|^2), exact for
/// sequences that vanish from index N = seq.size() on.
///
inline double bernstein_szego_density(const VerblunskySeq& seq, double theta)
{
    const auto e = eval_opuc(seq, std::polar(1.0, theta));
    return 1.0 / (two_pi * std::norm(e.phi_stars.back()));
}

inline CircleMeasure bernstein_szego_measure(const VerblunskySeq& seq)
{
    return CircleMeasure([seq](double t) { return bernstein_szego_density(seq, t); }, {},
                         "bernstein-szego");
}

/// c_k = Int e^{-ik theta} d mu, k = 0..count.
inline std::vector<complex> circle_moments(const CircleMeasure& m, std::size_t count)
{
    if (count < 1)
        throw invalid_input("circle_moments: count must be >= 1");
    std::vector<complex> c(count + 1, complex{0.0, 0.0});
    m.for_each_node([&](double t, double v, double w) {
        const complex step = std::polar(1.0, -t);
        complex e{1.0, 0.0};
        for (std::size_t k = 0; k <= count; ++k)
        {
            c[k] += w * v * e;
            e *= step;
        }
    });
    for (const auto& a : m.atoms())
        for (std::size_t k = 0; k <= count; ++k)
            c[k] += a.weight * std::polar(1.0, -static_cast<double>(k) * a.location);
    return c;
}

///
/// Levinson-Szego recursion on monic polynomials Phi_n = sum b_j z^j:
///   conj(alpha_n) = <z Phi_n, 1> / ||Phi_n||^2,  <z Phi_n, 1> = sum_j b_j conj(c_{j+1}).
///
inline VerblunskySeq verblunsky_from_moments(std::span<const complex> c)
{
    if (c.size() < 2)
        throw invalid_input("verblunsky_from_moments: need c_0 and c_1");
    if (!(c[0].real() > 0.0))
        throw degenerate_measure("verblunsky_from_moments: c_0 must be positive");

    const std::size_t N = c.size() - 1;
    std::vector<complex> alphas;
    alphas.reserve(N);
    std::vector<complex> b{1.0};  // Phi_n
    double norm2 = c[0].real();   // ||Phi_n||^2
    for (std::size_t n = 0; n < N; ++n)
    {
        complex inner{0.0, 0.0};
        for (std::size_t j = 0; j <= n; ++j)
            inner += b[j] * std::conj(c[j + 1]);
        const complex alpha = std::conj(inner / norm2);
        if (!(std::abs(alpha) < 1.0))
            throw degenerate_measure("verblunsky_from_moments: Toeplitz matrix not positive definite");
        alphas.push_back(alpha);

        // Phi_{n+1} = z Phi_n - conj(alpha) Phi_n^*,  Phi_n^*(z) = z^n conj(Phi_n(1/conj z))
        std::vector<complex> next(n + 2, complex{0.0, 0.0});
        for (std::size_t j = 0; j <= n; ++j)
        {
            next[j + 1] += b[j];
            next[n - j] -= std::conj(alpha) * std::conj(b[j]);
        }
        b = std::move(next);
        norm2 *= 1.0 - std::norm(alpha);
        if (!(norm2 > 0.0))
            throw degenerate_measure("verblunsky_from_moments: vanishing norm");
    }
    return VerblunskySeq(std::move(alphas));
}

enum class ChristoffelMode
{
    sum_formula,
    oracle
};

///
/// w_n(mu, z) = min over deg P < n of (1 / (2 pi |P(z)|^2)) Int |P|^2 d mu.
///
/// sum_formula: 2 pi w_n = (sum_{k<n} |phi_k(z)|^2)^{-1}.
/// oracle: normal equations on the Toeplitz moment matrix of `measure`.
///
inline double christoffel_w(const VerblunskySeq& seq, const CircleMeasure& measure, std::size_t n,
                            complex z, ChristoffelMode mode = ChristoffelMode::sum_formula)
{
    if (n < 1)
        throw invalid_input("christoffel_w: n must be >= 1");
    if (mode == ChristoffelMode::sum_formula)
    {
        const auto e = eval_opuc(seq, z, n - 1);
        double s     = 0.0;
        for (const auto& p : e.phis)
            s += std::norm(p);
        return 1.0 / (two_pi * s);
    }

    using Matrix = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<complex, Eigen::Dynamic, 1>;
    const auto c = circle_moments(measure, n);
    const auto N = static_cast<Eigen::Index>(n);
    Matrix G(N, N);
    // G_{kj} = Int conj(z^k) z^j d mu = c_{k-j}
    for (Eigen::Index k = 0; k < N; ++k)
        for (Eigen::Index j = 0; j < N; ++j)
            G(k, j) = k >= j ? c[static_cast<std::size_t>(k - j)]
                             : std::conj(c[static_cast<std::size_t>(j - k)]);
    Vector v(N);
    complex zp{1.0, 0.0};
    for (Eigen::Index j = 0; j < N; ++j)
    {
        v(j) = std::conj(zp);
        zp *= z;
    }
    Eigen::LLT<Matrix> llt(G);
    if (llt.info() != Eigen::Success)
        throw degenerate_measure("christoffel_w: moment matrix not positive definite");
    const double q = v.dot(llt.solve(v)).real();
    return 1.0 / (two_pi * q);
}

/// (1/n) sum_{k<n} |phi_k(e^{it})|^2, expected to approach 1 / (2 pi mu'(t)).
inline double mnt_discrete_average(const VerblunskySeq& seq, std::size_t n, double t)
{
    if (n < 1)
        throw invalid_input("mnt_discrete_average: n must be >= 1");
    const auto e = eval_opuc(seq, std::polar(1.0, t), n - 1);
    double s     = 0.0;
    for (const auto& p : e.phis)
        s += std::norm(p);
    return s / static_cast<double>(n);
}

/// (1/n) sum_{k<n} phi_k^*(e^{it}). Exploratory; no limit is asserted.
inline complex conjecture_average(const VerblunskySeq& seq, std::size_t n, double t)
{
    if (n < 1)
        throw invalid_input("conjecture_average: n must be >= 1");
    const auto e = eval_opuc(seq, std::polar(1.0, t), n - 1);
    complex s{0.0, 0.0};
    for (const auto& q : e.phi_stars)
        s += q;
    return s / static_cast<double>(n);
}

} // namespace krein
