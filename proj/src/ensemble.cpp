#include <springs/ensemble.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <springs/adiabatic.h>
#include <springs/errors.h>
#include <springs/quadrature.h>

namespace springs {

using namespace std::complex_literals;

FrequencyGrid::FrequencyGrid(std::vector<double> omegas) : omegas_(std::move(omegas))
{
    for (std::size_t k = 0; k < omegas_.size(); ++k) {
        if (!std::isfinite(omegas_[k])) {
            throw InvalidArgument("frequency grid entries must be finite");
        }
        if (k > 0 && !(omegas_[k] > omegas_[k - 1])) {
            throw InvalidArgument("frequency grid must be strictly increasing");
        }
    }
}

FrequencyGrid FrequencyGrid::regular(double lo, double hi, std::size_t n, GridConvention convention)
{
    if (n == 0) {
        throw InvalidArgument("frequency grid needs at least one point");
    }
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (convention == GridConvention::Midpoints) {
            w[k] = lo + (hi - lo) * (2.0 * k + 1.0) / (2.0 * n);
        } else {
            w[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
        }
    }
    return FrequencyGrid(std::move(w));
}

EnsembleProblem::EnsembleProblem(FrequencyGrid g, std::vector<std::complex<double>> z_f, double t_f)
    : grid(std::move(g)), targets(std::move(z_f)), duration(t_f)
{
    if (targets.size() != grid.size()) {
        throw InvalidArgument("ensemble problem: target count differs from grid size");
    }
    if (!(duration > 0.0)) {
        throw InvalidArgument("ensemble problem: duration must be positive");
    }
}

double sinc(double x)
{
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

std::complex<double> exp_integral(double delta, double t)
{
    const double h = 0.5 * delta * t;
    return t * std::exp(1i * h) * sinc(h);
}

namespace {

std::complex<double> sampled_integral(const SampledPulse& p, double omega, double t)
{
    const std::size_t n = p.values.size() - 1;
    const double h = p.duration / static_cast<double>(n);
    // Sub-panels keep each Gauss panel under half a radian of phase.
    const std::size_t sub = 1 + static_cast<std::size_t>(std::abs(omega) * h / 0.5);
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = h * static_cast<double>(i);
        if (a >= t) {
            break;
        }
        const double b = std::min(a + h, t);
        const double ua = p.values[i];
        const double du = (p.values[i + 1] - ua) / h;
        acc += composite_gauss(
            [&](double tau) { return std::exp(-1i * (omega * tau)) * (ua + du * (tau - a)); }, a, b,
            sub, 8);
    }
    return acc;
}

}  // namespace

std::complex<double> spectral_integral(const Pulse& pulse, double omega, double t)
{
    t = std::min(t, pulse.duration());
    if (t <= 0.0) {
        return 0.0;
    }
    return std::visit(
        [&](const auto& p) -> std::complex<double> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ChirpPulse>) {
                return chirp_spectral_integral(p.u0, p.omega_i, p.sweep_rate, omega, t);
            } else if constexpr (std::is_same_v<T, ExpSumPulse>) {
                std::complex<double> acc = 0.0;
                for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
                    acc += p.coeffs[k] * exp_integral(p.omegas[k] - omega, t) +
                           std::conj(p.coeffs[k]) * exp_integral(-p.omegas[k] - omega, t);
                }
                return 0.5 * acc;
            } else if constexpr (std::is_same_v<T, PolyDerivPulse>) {
                return p.field.fourier(omega, t);
            } else {
                return sampled_integral(p, omega, t);
            }
        },
        pulse.variant());
}

SpringState propagate_exact(const Pulse& pulse, double omega, double t)
{
    if (t < 0.0 || t > pulse.duration() * (1.0 + 1e-12)) {
        throw InvalidArgument("propagate_exact: t outside [0, t_f]");
    }
    const SpringState z = std::exp(1i * (omega * t)) * spectral_integral(pulse, omega, t);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw PropagationError(omega, "non-finite spring state");
    }
    return z;
}

SpringState propagate_exact(const Pulse& pulse, double omega)
{
    return propagate_exact(pulse, omega, pulse.duration());
}

std::vector<SpringState> propagate_exact(const Pulse& pulse, std::span<const double> omegas)
{
    std::vector<SpringState> out(omegas.size());
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        out[k] = propagate_exact(pulse, omegas[k]);
    }
    return out;
}

std::vector<std::complex<double>> moment_integrals(int m_max, double omega, double t_f,
                                                   MomentBranch branch)
{
    if (m_max < 0) {
        throw InvalidArgument("moment_integrals: m_max must be >= 0");
    }
    // Normalized mu_m = integral over [0, 1] of s^m exp(-i x s), x = omega t_f.
    const double x = omega * t_f;
    const double ax = std::abs(x);
    if (branch == MomentBranch::Automatic) {
        branch = ax <= kMomentSwitch ? MomentBranch::Taylor : MomentBranch::Recurrence;
    }
    std::vector<std::complex<double>> mu(m_max + 1);
    if (branch == MomentBranch::Taylor) {
        for (int m = 0; m <= m_max; ++m) {
            std::complex<double> term = 1.0;
            std::complex<double> sum = 1.0 / (m + 1.0);
            for (int n = 1; n < 200; ++n) {
                term *= -1i * x / static_cast<double>(n);
                const std::complex<double> add = term / static_cast<double>(m + n + 1);
                sum += add;
                if (std::abs(add) <= 1e-18 * std::abs(sum)) {
                    break;
                }
            }
            mu[m] = sum;
        }
    } else {
        if (x == 0.0) {
            throw InvalidArgument("moment_integrals: recurrence branch needs omega t_f != 0");
        }
        const std::complex<double> e = std::exp(-1i * x);
        // Upward while m <= |x|, Miller-started downward above.
        const int m_up = std::min(m_max, static_cast<int>(std::floor(ax)));
        mu[0] = std::exp(-0.5i * x) * sinc(0.5 * x);
        for (int m = 1; m <= m_up; ++m) {
            mu[m] = (e - static_cast<double>(m) * mu[m - 1]) / (-1i * x);
        }
        if (m_max > m_up) {
            const int top = m_max + 60 + static_cast<int>(std::ceil(ax));
            std::complex<double> cur = 0.0;
            for (int m = top; m > m_up + 1; --m) {
                cur = (e + 1i * x * cur) / static_cast<double>(m);
                if (m - 1 <= m_max) {
                    mu[m - 1] = cur;
                }
            }
        }
    }
    double scale = t_f;
    for (int m = 0; m <= m_max; ++m) {
        mu[m] *= scale;
        scale *= t_f;
    }
    return mu;
}

double distance_to_target(SpringState z, SpringState target)
{
    return std::abs(z - target);
}

double pulse_energy(const Pulse& pulse)
{
    if (const auto* s = pulse.as<SampledPulse>()) {
        // Exact for the piecewise-linear interpolant.
        const std::size_t n = s->values.size() - 1;
        const double h = s->duration / static_cast<double>(n);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = s->values[i];
            const double b = s->values[i + 1];
            acc += h * (a * a + a * b + b * b) / 3.0;
        }
        return acc;
    }
    const double T = pulse.duration();
    auto sq = [&](double t) {
        const double u = pulse(t);
        return u * u;
    };
    std::size_t panels = std::max<std::size_t>(
        16, static_cast<std::size_t>(std::ceil(pulse.bandwidth() * T / std::numbers::pi)));
    double prev = composite_gauss(sq, 0.0, T, panels, 8);
    for (int iter = 0; iter < 20; ++iter) {
        panels *= 2;
        const double cur = composite_gauss(sq, 0.0, T, panels, 8);
        if (std::abs(cur - prev) <= 1e-6 * std::abs(cur) || cur == 0.0) {
            return cur;
        }
        prev = cur;
    }
    return prev;
}

double pulse_max_amplitude(const Pulse& pulse)
{
    if (const auto* s = pulse.as<SampledPulse>()) {
        double m = 0.0;
        for (double v : s->values) m = std::max(m, std::abs(v));
        return m;
    }
    const double T = pulse.duration();
    const std::size_t n = std::max<std::size_t>(
        10001, static_cast<std::size_t>(std::ceil(20.0 * pulse.bandwidth() * T / (2.0 * std::numbers::pi))));
    const double h = T / static_cast<double>(n - 1);
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::abs(pulse(h * static_cast<double>(i)));
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    // Golden-section refinement of |u| on the bracketing cells.
    double a = h * static_cast<double>(best == 0 ? 0 : best - 1);
    double b = std::min(T, h * static_cast<double>(best + 1));
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    auto f = [&](double t) { return std::abs(pulse(t)); };
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int iter = 0; iter < 80 && b - a > 1e-14 * std::max(1.0, T); ++iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return std::max({best_val, fc, fd});
}

std::vector<double> uniform_times(double duration, std::size_t n_points)
{
    if (n_points < 2) {
        throw InvalidArgument("need at least two sample points");
    }
    std::vector<double> t(n_points);
    const double h = duration / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        t[i] = h * static_cast<double>(i);
    }
    t.back() = duration;
    return t;
}

Pulse sample_pulse(const Pulse& pulse, std::size_t n_points)
{
    return Pulse::sampled(pulse.evaluate(uniform_times(pulse.duration(), n_points)), pulse.duration());
}

}  // namespace springs
