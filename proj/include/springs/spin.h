#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <springs/pulse.h>

namespace springs {

/// Point on the Bloch sphere.
struct BlochState {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    double norm() const;
    double theta() const;
    double phi() const;
};

enum class BlochIntegrator {
    Midpoint,  // one rotation per step about the midpoint axis, 2nd order
    Magnus4,   // two-point Gauss Magnus rotation, 4th order
};

using Field = std::function<double(double)>;

/// Integrates dr/dt = Omega x r, Omega = (0, u(t), omega), over [0, duration]
/// with exact per-step rotations (norm preserving).
BlochState bloch_propagate(const Field& u, double duration, double omega, std::size_t n_steps,
                           BlochIntegrator integrator = BlochIntegrator::Magnus4,
                           BlochState initial = {});
BlochState bloch_propagate(const Pulse& pulse, double omega, std::size_t n_steps,
                           BlochIntegrator integrator = BlochIntegrator::Magnus4);

/// States at every step boundary (n_steps + 1 entries).
std::vector<BlochState> bloch_trajectory(const Field& u, double duration, double omega,
                                         std::size_t n_steps,
                                         BlochIntegrator integrator = BlochIntegrator::Magnus4);

/// Spring pulse for target (1, 0) scaled by pi/2 so it drives (0,0,1) to (1,0,0).
Pulse excitation_from_spring(const Pulse& spring_pulse);

/// Excitation followed by its time reverse: u(t) on [0, T], u(2T - t) on [T, 2T].
class InversionSequence {
public:
    explicit InversionSequence(Pulse excitation) : excitation_(std::move(excitation)) {}

    double duration() const { return 2.0 * excitation_.duration(); }
    double operator()(double t) const;
    const Pulse& excitation() const { return excitation_; }
    Field field() const;

private:
    Pulse excitation_;
};

InversionSequence inversion_sequence(const Pulse& excitation);

/// Runs the sequence from the north pole with `steps_per_half` steps per excitation.
BlochState simulate_inversion(const InversionSequence& seq, double omega, std::size_t steps_per_half,
                              BlochIntegrator integrator = BlochIntegrator::Magnus4);

/// J = -z: 1 for perfect inversion.
double fidelity(const BlochState& state);

/// Pulse sending the omega_a spring to (pi/2, 0) and the omega_b spring back to 0.
Pulse selective_inversion_pulse(double omega_a, double omega_b, double duration);

enum class SpinMode { Excitation, Inversion };

struct SpinExperiment {
    Pulse pulse;
    SpinMode mode = SpinMode::Inversion;
    double scale = 1.0;
    std::size_t steps = 4096;  // per excitation duration
    BlochIntegrator integrator = BlochIntegrator::Magnus4;
};

struct FidelityPoint {
    double omega = 0.0;
    BlochState state;
    double fidelity = 0.0;
};

/// Final state and J(omega) for each offset; offsets run in parallel.
std::vector<FidelityPoint> fidelity_sweep(const SpinExperiment& experiment,
                                          const std::vector<double>& omegas,
                                          std::size_t workers = 1);

/// Length of the connected offset interval around the best point with J >= threshold,
/// edges linearly interpolated. Offsets must be increasing.
double fidelity_bandwidth(const std::vector<FidelityPoint>& profile, double threshold);

/// max over t of |theta(t) e^{i phi(t)} - z(t)| between the Bloch trajectory and
/// the spring trajectory driven by the same pulse.
double spin_spring_deviation(const Pulse& pulse, double omega, std::size_t n_steps);

/// max over t of |z(t)| for the spring at omega, sampled on n_points.
double spring_max_radius(const Pulse& pulse, double omega, std::size_t n_points);

}  // namespace springs
