#pragma once

#include <complex>

#include <springs/pulse.h>

namespace springs {

/// Linear chirp sweeping omega_i -> omega_f over [0, duration].
struct ChirpParams {
    double u0 = 1.0;
    double omega_i = 0.0;
    double omega_f = 0.0;
    double duration = 1.0;

    double sweep_rate() const { return (omega_f - omega_i) / duration; }
};

Pulse chirp_pulse(const ChirpParams& params);

struct StationaryPhase {
    double modulus = 0.0;
    double phase = 0.0;   // omega t_f + pi/4 - (omega - omega_i)^2 / (2 s), not wrapped
    bool in_band = false; // stationary time (omega - omega_i)/s inside (0, t_f)

    std::complex<double> value() const { return std::polar(modulus, phase); }
};

/// Stationary-phase estimate of z(t_f). Throws InvalidArgument if s <= 0.
StationaryPhase stationary_phase_prediction(const ChirpParams& params, double omega);

/// I(alpha, beta, t) = integral over [0, t] of exp(i (alpha tau^2 + beta tau)), alpha != 0.
std::complex<double> quadratic_phase_integral(double alpha, double beta, double t);

/// Integral over [0, t] of exp(-i omega tau) u0 cos(omega_i tau + s tau^2 / 2).
std::complex<double> chirp_spectral_integral(double u0, double omega_i, double sweep_rate,
                                             double omega, double t);

/// Exact z(t_f) of a spring at omega driven by the chirp.
std::complex<double> chirp_final_state_exact(const ChirpParams& params, double omega);

}  // namespace springs
