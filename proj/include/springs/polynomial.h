#pragma once

#include <complex>
#include <span>
#include <vector>

namespace springs {

/// Real polynomial p(t) on [0, T].
///
/// Coefficients are stored as monomials in the centered variable
/// w = 2t/T - 1, which keeps the coefficient dynamic range of the high
/// degree (up to 4N+2) shortcut polynomials several orders of magnitude
/// below the equivalent expansion in s = t/T.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::vector<double> centered_coeffs, double duration);

    /// Builds from monomial coefficients in s = t/T.
    static Polynomial from_normalized(std::span<const double> s_coeffs, double duration);

    /// scale * s^a * (1 - s)^b, expanded from exact integer binomials.
    static Polynomial power_product(int a, int b, double scale, double duration);

    static Polynomial zero(double duration) { return Polynomial({0.0}, duration); }

    double duration() const { return duration_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const double> coefficients() const { return coeffs_; }

    /// Monomial coefficients in s = t/T (lossy for high degree; reporting only).
    std::vector<double> normalized_coefficients() const;

    double operator()(double t) const;

    /// d^order p / dt^order. Each order lowers the degree by one and
    /// contributes the chain-rule factor 2/T of the centered variable.
    Polynomial derivative(int order = 1) const;

    /// Sum of |c_j| of the centered coefficients: the natural scale for
    /// rounding errors at the interval ends.
    double coefficient_norm() const;

    /// Integral of exp(-i omega tau) p(tau) over [0, t].
    std::complex<double> fourier(double omega, double t) const;
    std::complex<double> fourier(double omega) const { return fourier(omega, duration_); }

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator*=(double factor);
    friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
    friend Polynomial operator*(Polynomial p, double f) { return p *= f; }
    friend Polynomial operator*(double f, Polynomial p) { return p *= f; }
    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);

private:
    std::vector<double> coeffs_{0.0};
    double duration_ = 1.0;
};

/// mu_m = integral over [-1, 1] of v^m exp(-i kappa v), for m = 0..m_max.
std::vector<std::complex<double>> centered_moments(int m_max, double kappa);

}  // namespace springs
