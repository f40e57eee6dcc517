#include <springs/pulse.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <springs/errors.h>

namespace springs {

namespace {

void check_duration(double duration)
{
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw InvalidArgument("pulse duration must be positive and finite");
    }
}

}  // namespace

Pulse Pulse::chirp(double u0, double omega_i, double sweep_rate, double duration)
{
    check_duration(duration);
    return Pulse(ChirpPulse{u0, omega_i, sweep_rate, duration});
}

Pulse Pulse::exp_sum(std::vector<std::complex<double>> coeffs, std::vector<double> omegas,
                     double duration)
{
    check_duration(duration);
    if (coeffs.size() != omegas.size()) {
        throw InvalidArgument("exp_sum: coefficient and frequency counts differ");
    }
    return Pulse(ExpSumPulse{std::move(coeffs), std::move(omegas), duration});
}

Pulse Pulse::poly_deriv(Polynomial g, std::vector<double> weights)
{
    Polynomial field = Polynomial::zero(g.duration());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] != 0.0) {
            field += weights[k] * g.derivative(static_cast<int>(k));
        }
    }
    return Pulse(PolyDerivPulse{std::move(g), std::move(weights), std::move(field)});
}

Pulse Pulse::sampled(std::vector<double> values, double duration)
{
    check_duration(duration);
    if (values.size() < 2) {
        throw InvalidArgument("sampled pulse needs at least two samples");
    }
    return Pulse(SampledPulse{std::move(values), duration});
}

Pulse Pulse::zero(double duration)
{
    return exp_sum({}, {}, duration);
}

Pulse Pulse::constant(double value, double duration)
{
    return exp_sum({value}, {0.0}, duration);
}

double Pulse::duration() const
{
    return std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PolyDerivPulse>) {
                return p.g.duration();
            } else {
                return p.duration;
            }
        },
        v_);
}

double Pulse::operator()(double t) const
{
    return std::visit(
        [t](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ChirpPulse>) {
                if (t < 0.0 || t > p.duration) return 0.0;
                return p.u0 * std::cos(p.omega_i * t + 0.5 * p.sweep_rate * t * t);
            } else if constexpr (std::is_same_v<T, ExpSumPulse>) {
                if (t < 0.0 || t > p.duration) return 0.0;
                double acc = 0.0;
                for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
                    const double ph = p.omegas[k] * t;
                    acc += p.coeffs[k].real() * std::cos(ph) - p.coeffs[k].imag() * std::sin(ph);
                }
                return acc;
            } else if constexpr (std::is_same_v<T, PolyDerivPulse>) {
                if (t < 0.0 || t > p.field.duration()) return 0.0;
                return p.field(t);
            } else {
                if (t < 0.0 || t > p.duration) return 0.0;
                const std::size_t n = p.values.size() - 1;
                const double x = t / p.duration * static_cast<double>(n);
                const std::size_t i = std::min(static_cast<std::size_t>(x), n - 1);
                const double f = x - static_cast<double>(i);
                return (1.0 - f) * p.values[i] + f * p.values[i + 1];
            }
        },
        v_);
}

std::vector<double> Pulse::evaluate(const std::vector<double>& times) const
{
    std::vector<double> out(times.size());
    std::transform(times.begin(), times.end(), out.begin(), [this](double t) { return (*this)(t); });
    return out;
}

Pulse Pulse::scaled(double factor) const
{
    return std::visit(
        [factor](auto p) -> Pulse {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ChirpPulse>) {
                p.u0 *= factor;
            } else if constexpr (std::is_same_v<T, ExpSumPulse>) {
                for (auto& c : p.coeffs) c *= factor;
            } else if constexpr (std::is_same_v<T, PolyDerivPulse>) {
                for (auto& w : p.weights) w *= factor;
                p.field *= factor;
            } else {
                for (auto& v : p.values) v *= factor;
            }
            return Pulse(std::move(p));
        },
        v_);
}

double Pulse::bandwidth() const
{
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ChirpPulse>) {
                return std::max(std::abs(p.omega_i), std::abs(p.omega_i + p.sweep_rate * p.duration));
            } else if constexpr (std::is_same_v<T, ExpSumPulse>) {
                double m = 0.0;
                for (double w : p.omegas) m = std::max(m, std::abs(w));
                return m;
            } else if constexpr (std::is_same_v<T, PolyDerivPulse>) {
                return 2.0 * (p.field.degree() + 1) / p.field.duration();
            } else {
                return std::numbers::pi * static_cast<double>(p.values.size()) / p.duration;
            }
        },
        v_);
}

std::string_view Pulse::kind() const
{
    static constexpr std::string_view names[] = {"chirp", "exp_sum", "poly_deriv", "sampled"};
    return names[v_.index()];
}

}  // namespace springs
