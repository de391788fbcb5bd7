///
/// \file kernels.hpp
///
/// Reproducing kernels K_r(z', z) = Int_0^r conj(P(s, z')) P(s, z) ds of the
/// Paley-Wiener space PW_r in L^2(sigma), the Christoffel function
/// m_r = 1 / K_r(z0, z0), the extremal function f_r and a direct
/// discretized minimization used as an independent check.
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
#include <krein/krein.hpp>
#include <krein/line_density.hpp>
#include <krein/numerics.hpp>
#include <krein/quadrature.hpp>

namespace krein
{

enum class KernelSource
{
    quadrature,
    cd_formula,
    oracle
};

struct KernelEstimate
{
    complex z0;
    double r;
    double K_diag;
    double m;
    KernelSource source;

    double r_times_m() const
    {
        return r * m;
    }
};

///
/// K_r(z', z) on the shared grid of the two trajectories. The diagonal
/// (same spectral parameter) is read from the trajectory accumulator; the
/// off-diagonal value is the trapezoid rule on the grid.
///
inline complex kernel_at(const Trajectory& t_zprime, const Trajectory& t_z, double r)
{
    require_shared_grid(t_zprime, t_z);
    const std::size_t i = t_z.index_of(r);
    if (t_zprime.lambda == t_z.lambda)
        return {t_z.acc_P2[i], 0.0};
    return cross_integral(t_z, t_zprime, i);
}

///
/// Int_0^r P(s, lambda) conj(P(s, mu)) ds = K_r(mu, lambda) from the
/// Christoffel-Darboux identity, at O(1) cost.
///
inline complex kernel_via_cd(const KreinState& at_lambda, const KreinState& at_mu)
{
    if (at_lambda.r != at_mu.r)
        throw invalid_input("kernel_via_cd: states at different radii");
    const complex gap   = at_lambda.lambda - std::conj(at_mu.lambda);
    const double scale  = std::max(1.0, std::abs(at_lambda.lambda) + std::abs(at_mu.lambda));
    if (std::abs(gap) <= 1e-14 * scale)
        throw degenerate_pair("kernel_via_cd: lambda == conj(mu), use kernel_at");
    const complex num = at_lambda.P * std::conj(at_mu.P) -
                        at_lambda.P_star * std::conj(at_mu.P_star);
    return num / (complex(0.0, 1.0) * gap);
}

/// m_r(sigma, lambda) = 1 / Int_0^r |P(s, lambda)|^2 ds.
inline KernelEstimate christoffel_m(const Trajectory& t, double r)
{
    const double K = t.acc_P2[t.index_of(r)];
    if (!(K > 0.0) || !std::isfinite(K))
        throw integrity_error("christoffel_m: kernel diagonal is not positive");
    return {t.lambda, r, K, 1.0 / K, KernelSource::quadrature};
}

/// f_r(z) = K_r(z0, z) / K_r(z0, z0); equals 1 at z = z0.
inline complex extremal_eval(const Trajectory& t_z0, const Trajectory& t_z, double r)
{
    const complex diag = kernel_at(t_z0, t_z0, r);
    if (!(diag.real() > 0.0))
        throw integrity_error("extremal_eval: kernel diagonal is not positive");
    return kernel_at(t_z0, t_z, r) / diag;
}

///
/// Minimization of Int |f|^2 d sigma over f(x) = Int_0^r phi(s) e^{ixs} ds
/// with phi piecewise constant on n equal cells, subject to f(z0) = 1.
///
/// Basis functions are f_k(x) = delta e^{i x k delta} R(x delta), so the Gram
/// matrix is Hermitian Toeplitz. The exterior constant c contributes
/// 2 pi c delta I exactly (Plancherel); the window deviation sigma' - c and
/// the point masses are integrated numerically.
///
class PaleyWienerOracle
{
public:
    using Matrix = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<complex, Eigen::Dynamic, 1>;

    struct Result
    {
        double minimum;
        std::vector<complex> coeffs;
        double ridge;
        double rcond;
    };

    PaleyWienerOracle(const LineDensity& d, double r, std::size_t n_basis)
        : m_r(r), m_n(n_basis), m_delta(r / static_cast<double>(n_basis))
    {
        if (n_basis < 8)
            throw invalid_input("PaleyWienerOracle: n_basis must be >= 8");
        if (!(r > 0.0))
            throw invalid_input("PaleyWienerOracle: r must be positive");

        std::vector<complex> t(m_n, complex{0.0, 0.0});
        const double c     = d.exterior_value();
        const double delta = m_delta;
        auto add           = [&](double x, double weight) {
            const double amp   = weight * delta * delta * fejer_Phi(x * delta);
            const complex step = std::polar(1.0, x * delta);
            complex phase{1.0, 0.0};
            for (std::size_t m = 0; m < m_n; ++m)
            {
                t[m] += amp * phase;
                phase *= step;
            }
        };
        for_each_window_point(d, [&](double x, double sp, double w) {
            if (sp != c)
                add(x, w * (sp - c));
        });
        for (const auto& pm : d.point_masses())
            add(pm.location, pm.weight);
        t[0] += two_pi * c * delta;

        m_gram.resize(static_cast<Eigen::Index>(m_n), static_cast<Eigen::Index>(m_n));
        for (std::size_t j = 0; j < m_n; ++j)
            for (std::size_t k = 0; k < m_n; ++k)
            {
                const auto jj = static_cast<Eigen::Index>(j);
                const auto kk = static_cast<Eigen::Index>(k);
                m_gram(jj, kk) = k >= j ? t[k - j] : std::conj(t[j - k]);
            }
    }

    std::size_t basis_size() const noexcept
    {
        return m_n;
    }
    double radius() const noexcept
    {
        return m_r;
    }
    const Matrix& gram() const noexcept
    {
        return m_gram;
    }

    complex basis_value(std::size_t k, complex z) const
    {
        // delta e^{i z k delta} (e^{i z delta} - 1)/(i z delta), analytic in z
        const complex arg = z * m_delta;
        complex R;
        if (std::abs(arg) < 1e-6)
            R = 1.0 + complex(0.0, 0.5) * arg - arg * arg / 6.0;
        else
            R = (std::exp(complex(0.0, 1.0) * arg) - 1.0) / (complex(0.0, 1.0) * arg);
        return m_delta * std::exp(complex(0.0, 1.0) * z * (static_cast<double>(k) * m_delta)) * R;
    }

    complex value(std::span<const complex> coeffs, complex z) const
    {
        complex s{0.0, 0.0};
        for (std::size_t k = 0; k < m_n; ++k)
            s += coeffs[k] * basis_value(k, z);
        return s;
    }

    /// Int |sum c_k f_k|^2 d sigma.
    double energy(std::span<const complex> coeffs) const
    {
        Vector c(static_cast<Eigen::Index>(m_n));
        for (std::size_t k = 0; k < m_n; ++k)
            c(static_cast<Eigen::Index>(k)) = coeffs[k];
        return (c.adjoint() * m_gram * c)(0, 0).real();
    }

    Result minimize(complex z0) const
    {
        const auto n = static_cast<Eigen::Index>(m_n);
        Vector v(n);
        for (Eigen::Index k = 0; k < n; ++k)
            v(k) = std::conj(basis_value(static_cast<std::size_t>(k), z0));

        double ridge = 0.0;
        Eigen::LLT<Matrix> llt(m_gram);
        if (llt.info() != Eigen::Success)
        {
            ridge = 1e-12 * m_gram.diagonal().real().mean();
            llt.compute(m_gram + ridge * Matrix::Identity(n, n));
            if (llt.info() != Eigen::Success)
                throw ill_conditioned("PaleyWienerOracle: Gram matrix not positive definite",
                                      llt.rcond());
        }
        const Vector y      = llt.solve(v);
        const double denom  = v.dot(y).real();
        if (!(denom > 0.0))
            throw ill_conditioned("PaleyWienerOracle: non-positive normalizer", llt.rcond());
        Result out{1.0 / denom, std::vector<complex>(m_n), ridge, llt.rcond()};
        for (Eigen::Index k = 0; k < n; ++k)
            out.coeffs[static_cast<std::size_t>(k)] = y(k) / denom;
        return out;
    }

private:
    double m_r;
    std::size_t m_n;
    double m_delta;
    Matrix m_gram;
};

/// Upper bound on m_r(sigma, z0) from the n_basis-cell discretization.
inline double pw_minimize_oracle(const LineDensity& d, complex z0, double r, std::size_t n_basis)
{
    return PaleyWienerOracle(d, r, n_basis).minimize(z0).minimum;
}

} // namespace krein
