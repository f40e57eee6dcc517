#include <springs/erfi.h>

#include <array>
#include <cmath>
#include <numbers>

#include <springs/errors.h>

namespace springs {

namespace {

constexpr int kTerms = 40;

struct WeidemanTable {
    double L;
    std::array<double, kTerms> a;  // a[j] multiplies Z^j
};

WeidemanTable make_table()
{
    WeidemanTable tab{};
    const int M = 2 * kTerms;
    tab.L = std::sqrt(kTerms / std::numbers::sqrt2);
    // a_j = (1/2M) sum_{k=-M+1}^{M-1} f(t_k) cos(pi j k / M),
    // f(t) = exp(-t^2)(L^2 + t^2), t_k = L tan(k pi / 2M).
    std::array<double, 2 * M> f{};
    for (int k = -M + 1; k < M; ++k) {
        const double t = tab.L * std::tan(0.5 * k * std::numbers::pi / M);
        f[k + M] = std::exp(-t * t) * (tab.L * tab.L + t * t);
    }
    for (int j = 1; j <= kTerms; ++j) {
        double acc = 0.0;
        for (int k = -M + 1; k < M; ++k) {
            acc += f[k + M] * std::cos(std::numbers::pi * j * k / M);
        }
        tab.a[j - 1] = acc / (2.0 * M);
    }
    return tab;
}

const WeidemanTable& table()
{
    static const WeidemanTable tab = make_table();
    return tab;
}

std::complex<double> erfi_series(std::complex<double> z)
{
    const std::complex<double> z2 = z * z;
    std::complex<double> term = z;
    std::complex<double> sum = 0.0;
    for (int n = 0; n < 200; ++n) {
        const std::complex<double> add = term / static_cast<double>(2 * n + 1);
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum)) {
            break;
        }
        term *= z2 / static_cast<double>(n + 1);
    }
    return (2.0 / std::sqrt(std::numbers::pi)) * sum;
}

}  // namespace

std::complex<double> faddeeva_w(std::complex<double> z)
{
    using namespace std::complex_literals;
    const WeidemanTable& tab = table();
    const std::complex<double> den = tab.L - 1i * z;
    const std::complex<double> Z = (tab.L + 1i * z) / den;
    std::complex<double> p = 0.0;
    for (int j = kTerms - 1; j >= 0; --j) {
        p = p * Z + tab.a[j];
    }
    return 2.0 * p / (den * den) + (1.0 / std::sqrt(std::numbers::pi)) / den;
}

std::complex<double> erfi(std::complex<double> z)
{
    using namespace std::complex_literals;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("erfi: non-finite argument");
    }
    const std::complex<double> z2 = z * z;
    if (z2.real() > 700.0) {
        throw DomainError("erfi: argument overflows (Re z^2 > 700)");
    }
    if (std::abs(z) <= 2.0) {
        return erfi_series(z);
    }
    if (z.imag() > 0.0) {
        return -erfi(-z);
    }
    // Erfi(z) = -i erf(i z) = -i (1 - exp(z^2) w(-z)), with -z in the upper half plane.
    return -1i * (1.0 - std::exp(z2) * faddeeva_w(-z));
}

}  // namespace springs
