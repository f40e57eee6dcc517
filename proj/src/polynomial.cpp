#include <springs/polynomial.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <springs/errors.h>

namespace springs {

namespace {

// Binomial row C(n, 0..n) as doubles (exact up to n = 1029 in magnitude
// terms but only exact as integers while below 2^53).
std::vector<double> binomial_row(int n)
{
    std::vector<double> row(n + 1, 1.0);
    for (int k = 1; k < n; ++k) {
        row[k] = row[k - 1] * (n - k + 1) / k;
    }
    return row;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// Coefficients of q(v) = p(alpha v + beta) given p's monomial coefficients.
std::vector<double> affine_compose(std::span<const double> c, double alpha, double beta)
{
    const int d = static_cast<int>(c.size()) - 1;
    std::vector<double> out(d + 1, 0.0);
    // Horner on polynomials: q = (...(c_d)(alpha v + beta) + c_{d-1})...
    for (int j = d; j >= 0; --j) {
        std::vector<double> next(d + 1, 0.0);
        for (int i = 0; i < d; ++i) {
            next[i] += out[i] * beta;
            next[i + 1] += out[i] * alpha;
        }
        next[d] += out[d] * beta;
        next[0] += c[j];
        out.swap(next);
    }
    return out;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> centered_coeffs, double duration)
    : coeffs_(std::move(centered_coeffs)), duration_(duration)
{
    if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
        throw InvalidArgument("polynomial duration must be positive and finite");
    }
    if (coeffs_.empty()) {
        coeffs_.push_back(0.0);
    }
}

Polynomial Polynomial::from_normalized(std::span<const double> s_coeffs, double duration)
{
    // s = (1 + w) / 2
    std::vector<double> c = affine_compose(s_coeffs, 0.5, 0.5);
    return Polynomial(std::move(c), duration);
}

Polynomial Polynomial::power_product(int a, int b, double scale, double duration)
{
    if (a < 0 || b < 0) {
        throw InvalidArgument("power_product exponents must be non-negative");
    }
    // s^a (1-s)^b = 2^-(a+b) (1+w)^a (1-w)^b
    std::vector<double> plus = binomial_row(a);
    std::vector<double> minus = binomial_row(b);
    for (int k = 1; k <= b; k += 2) {
        minus[k] = -minus[k];
    }
    std::vector<double> c = convolve(plus, minus);
    for (double& v : c) {
        v = std::ldexp(v, -(a + b)) * scale;
    }
    return Polynomial(std::move(c), duration);
}

std::vector<double> Polynomial::normalized_coefficients() const
{
    // w = 2 s - 1
    return affine_compose(coeffs_, 2.0, -1.0);
}

double Polynomial::operator()(double t) const
{
    const double w = 2.0 * t / duration_ - 1.0;
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * w + *it;
    }
    return acc;
}

Polynomial Polynomial::derivative(int order) const
{
    if (order < 0) {
        throw InvalidArgument("derivative order must be non-negative");
    }
    std::vector<double> c = coeffs_;
    const double chain = 2.0 / duration_;
    for (int k = 0; k < order; ++k) {
        if (c.size() <= 1) {
            c.assign(1, 0.0);
            break;
        }
        std::vector<double> next(c.size() - 1);
        for (std::size_t j = 0; j + 1 < c.size(); ++j) {
            next[j] = c[j + 1] * static_cast<double>(j + 1) * chain;
        }
        c.swap(next);
    }
    return Polynomial(std::move(c), duration_);
}

double Polynomial::coefficient_norm() const
{
    double s = 0.0;
    for (double c : coeffs_) {
        s += std::abs(c);
    }
    return s;
}

std::complex<double> Polynomial::fourier(double omega, double t) const
{
    using namespace std::complex_literals;
    if (t <= 0.0) {
        return 0.0;
    }
    t = std::min(t, duration_);
    std::vector<double> local;
    std::span<const double> c = coeffs_;
    if (t < duration_) {
        const double alpha = t / duration_;
        local = affine_compose(coeffs_, alpha, alpha - 1.0);
        c = local;
    }
    const double kappa = 0.5 * omega * t;
    const auto mu = centered_moments(static_cast<int>(c.size()) - 1, kappa);
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        acc += c[j] * mu[j];
    }
    return 0.5 * t * std::exp(-1i * kappa) * acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& other)
{
    if (other.duration_ != duration_) {
        throw InvalidArgument("cannot add polynomials on different intervals");
    }
    if (other.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(other.coeffs_.size(), 0.0);
    }
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
        coeffs_[j] += other.coeffs_[j];
    }
    return *this;
}

Polynomial& Polynomial::operator*=(double factor)
{
    for (double& c : coeffs_) {
        c *= factor;
    }
    return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs)
{
    if (lhs.duration_ != rhs.duration_) {
        throw InvalidArgument("cannot multiply polynomials on different intervals");
    }
    return Polynomial(convolve(lhs.coeffs_, rhs.coeffs_), lhs.duration_);
}

std::vector<std::complex<double>> centered_moments(int m_max, double kappa)
{
    using namespace std::complex_literals;
    if (m_max < 0) {
        throw InvalidArgument("centered_moments: m_max must be >= 0");
    }
    std::vector<std::complex<double>> mu(m_max + 1);
    const double ak = std::abs(kappa);

    if (ak <= 2.0) {
        // mu_m = sum_n (-i kappa)^n / n! * 2 / (m + n + 1), m + n even
        for (int m = 0; m <= m_max; ++m) {
            std::complex<double> term = 1.0;  // (-i kappa)^n / n!
            std::complex<double> sum = 0.0;
            for (int n = 0; n < 80; ++n) {
                if (n > 0) {
                    term *= -1i * kappa / static_cast<double>(n);
                }
                if ((m + n) % 2 == 0) {
                    sum += term * (2.0 / (m + n + 1));
                }
                if (n > 4 && std::abs(term) < 1e-18 * std::max(std::abs(sum), 1e-300)) {
                    break;
                }
            }
            mu[m] = sum;
        }
        return mu;
    }

    const std::complex<double> em = std::exp(-1i * kappa);
    const std::complex<double> ep = std::exp(1i * kappa);
    auto boundary = [&](int m) {
        return (em - ((m % 2 == 0) ? ep : -ep)) / (-1i * kappa);
    };

    // Upward recurrence is stable while m <= |kappa|.
    const int m_up = std::min(m_max, static_cast<int>(std::floor(ak)));
    mu[0] = 2.0 * std::sin(kappa) / kappa;
    for (int m = 1; m <= m_up; ++m) {
        mu[m] = boundary(m) + (static_cast<double>(m) / (1i * kappa)) * mu[m - 1];
    }
    if (m_max > m_up) {
        // Miller start far above, recurse down; error shrinks by |kappa|/m.
        const int top = m_max + 60 + static_cast<int>(std::ceil(ak));
        std::complex<double> cur = 0.0;
        for (int m = top; m > m_up + 1; --m) {
            cur = (1i * kappa / static_cast<double>(m)) * (cur - boundary(m));
            if (m - 1 <= m_max) {
                mu[m - 1] = cur;
            }
        }
    }
    return mu;
}

}  // namespace springs
