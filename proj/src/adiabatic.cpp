#include <springs/adiabatic.h>

#include <cmath>
#include <numbers>

#include <springs/ensemble.h>
#include <springs/erfi.h>
#include <springs/errors.h>

namespace springs {

using namespace std::complex_literals;

Pulse chirp_pulse(const ChirpParams& params)
{
    if (!(params.duration > 0.0)) {
        throw InvalidArgument("chirp duration must be positive");
    }
    return Pulse::chirp(params.u0, params.omega_i, params.sweep_rate(), params.duration);
}

StationaryPhase stationary_phase_prediction(const ChirpParams& params, double omega)
{
    const double s = params.sweep_rate();
    if (!(s > 0.0)) {
        throw InvalidArgument("stationary phase needs a positive sweep rate");
    }
    const double d = omega - params.omega_i;
    const double t1 = d / s;
    StationaryPhase out;
    out.modulus = params.u0 * std::sqrt(std::numbers::pi / (2.0 * s));
    out.phase = omega * params.duration + 0.25 * std::numbers::pi - d * d / (2.0 * s);
    out.in_band = t1 > 0.0 && t1 < params.duration;
    return out;
}

std::complex<double> quadratic_phase_integral(double alpha, double beta, double t)
{
    if (alpha == 0.0) {
        throw InvalidArgument("quadratic_phase_integral: alpha must be nonzero");
    }
    // Principal root: sqrt(alpha) = i sqrt(|alpha|) for alpha < 0.
    const std::complex<double> root =
        alpha > 0.0 ? std::complex<double>(std::sqrt(alpha), 0.0)
                    : std::complex<double>(0.0, std::sqrt(-alpha));
    const std::complex<double> c = std::exp(0.25i * std::numbers::pi) * root;
    const double shift = beta / (2.0 * alpha);
    const std::complex<double> a = c * shift;
    const std::complex<double> b = c * (t + shift);
    const std::complex<double> pref =
        std::exp(-0.25i * std::numbers::pi) / root * std::exp(-1i * (beta * beta / (4.0 * alpha)));
    return pref * (0.5 * std::sqrt(std::numbers::pi)) * (erfi(b) - erfi(a));
}

std::complex<double> chirp_spectral_integral(double u0, double omega_i, double sweep_rate,
                                             double omega, double t)
{
    if (t <= 0.0 || u0 == 0.0) {
        return 0.0;
    }
    if (sweep_rate == 0.0) {
        return 0.5 * u0 * (exp_integral(omega_i - omega, t) + exp_integral(-omega_i - omega, t));
    }
    return 0.5 * u0 *
           (quadratic_phase_integral(0.5 * sweep_rate, omega_i - omega, t) +
            quadratic_phase_integral(-0.5 * sweep_rate, -omega_i - omega, t));
}

std::complex<double> chirp_final_state_exact(const ChirpParams& params, double omega)
{
    const double s = params.sweep_rate();
    if (s == 0.0) {
        throw InvalidArgument("chirp_final_state_exact needs a nonzero sweep rate");
    }
    const double T = params.duration;
    return std::exp(1i * (omega * T)) *
           chirp_spectral_integral(params.u0, params.omega_i, s, omega, T);
}

}  // namespace springs
