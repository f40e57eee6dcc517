#include <springs/sta.h>

#include <algorithm>
#include <cmath>

#include <springs/errors.h>

namespace springs {

std::vector<double> char_poly_coeffs(std::span<const double> omegas)
{
    if (omegas.empty()) {
        throw InvalidArgument("char_poly_coeffs needs at least one frequency");
    }
    std::vector<double> c{1.0};
    for (double w : omegas) {
        std::vector<double> next(c.size() + 2, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            next[j] += w * w * c[j];
            next[j + 2] += c[j];
        }
        c.swap(next);
    }
    return c;
}

namespace {

double leading_constant(int n, double duration)
{
    // (-T)^{2N-1} / (2N-1)!
    double k = -1.0;
    for (int j = 1; j <= 2 * n - 1; ++j) {
        k *= duration / j;
    }
    return k;
}

void check_args(int n, double duration)
{
    if (n < 1) {
        throw InvalidArgument("number of springs must be >= 1");
    }
    if (!(duration > 0.0)) {
        throw InvalidArgument("duration must be positive");
    }
}

}  // namespace

Polynomial g_polynomial_min(int n, double duration)
{
    check_args(n, duration);
    return Polynomial::power_product(2 * n, 2 * n - 1, leading_constant(n, duration), duration);
}

Polynomial g_polynomial_zero_ends(int n, double duration)
{
    check_args(n, duration);
    // 1 + (2N+2)(1-s) = (N+2) - (N+1) w
    const Polynomial bracket({n + 2.0, -(n + 1.0)}, duration);
    return Polynomial::power_product(2 * n + 2, 2 * n - 1, leading_constant(n, duration), duration) *
           bracket;
}

double boundary_violation(const Polynomial& g, int n)
{
    const double T = g.duration();
    double worst = 0.0;
    for (int k = 0; k < 2 * n; ++k) {
        const Polynomial d = g.derivative(k);
        const double scale = std::max(1.0, d.coefficient_norm());
        worst = std::max(worst, std::abs(d(0.0)) / scale);
        const double right = k == 2 * n - 1 ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(d(T) - right) / scale);
    }
    return worst;
}

Pulse sta_pulse(std::span<const double> omegas, const Polynomial& g)
{
    const int n = static_cast<int>(omegas.size());
    const double violation = boundary_violation(g, n);
    if (violation > 1e-6) {
        throw InvalidArgument("invalid g: boundary conditions violated by " +
                              std::to_string(violation));
    }
    return Pulse::poly_deriv(g, char_poly_coeffs(omegas));
}

StaDesign design_sta(std::span<const double> omegas, double duration, GFamily family)
{
    const int n = static_cast<int>(omegas.size());
    StaDesign d;
    d.omegas.assign(omegas.begin(), omegas.end());
    d.duration = duration;
    d.g = family == GFamily::ZeroEnds ? g_polynomial_zero_ends(n, duration)
                                      : g_polynomial_min(n, duration);
    d.g_coeffs = char_poly_coeffs(omegas);
    d.pulse = sta_pulse(omegas, d.g);
    return d;
}

double sta_distance_profile(const StaDesign& design, double omega)
{
    double prod = 1.0;
    for (double wk : design.omegas) {
        prod *= omega * omega - wk * wk;
    }
    return std::abs(prod * design.g.fourier(omega));
}

}  // namespace springs
