#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <springs/pulse.h>

namespace springs {

/// Spring state z = x + i y (x velocity-like, y position-like).
using SpringState = std::complex<double>;

enum class GridConvention { Endpoints, Midpoints };

class FrequencyGrid {
public:
    FrequencyGrid() = default;
    explicit FrequencyGrid(std::vector<double> omegas);

    /// n regularly spaced frequencies on [lo, hi]. Endpoints: lo + (hi-lo)k/(n-1);
    /// Midpoints: lo + (hi-lo)(2k+1)/(2n).
    static FrequencyGrid regular(double lo, double hi, std::size_t n,
                                 GridConvention convention = GridConvention::Endpoints);

    std::size_t size() const { return omegas_.size(); }
    double operator[](std::size_t k) const { return omegas_[k]; }
    const std::vector<double>& omegas() const { return omegas_; }

private:
    std::vector<double> omegas_;
};

struct EnsembleProblem {
    FrequencyGrid grid;
    std::vector<std::complex<double>> targets;
    double duration = 1.0;

    EnsembleProblem() = default;
    EnsembleProblem(FrequencyGrid g, std::vector<std::complex<double>> z_f, double t_f);
};

/// sin(x)/x with a Taylor branch near 0.
double sinc(double x);

/// Integral of exp(i delta tau) over [0, t].
std::complex<double> exp_integral(double delta, double t);

/// Integral of exp(-i omega tau) u(tau) over [0, t].
std::complex<double> spectral_integral(const Pulse& pulse, double omega, double t);

/// z(t) for z(0) = 0 under dz/dt = i omega z + u.
SpringState propagate_exact(const Pulse& pulse, double omega, double t);
SpringState propagate_exact(const Pulse& pulse, double omega);
std::vector<SpringState> propagate_exact(const Pulse& pulse, std::span<const double> omegas);

enum class MomentBranch { Automatic, Taylor, Recurrence };

/// |omega t_f| at which the Automatic branch leaves the Taylor series.
inline constexpr double kMomentSwitch = 2.0;

/// M_m = integral over [0, t_f] of tau^m exp(-i omega tau), m = 0..m_max.
std::vector<std::complex<double>> moment_integrals(int m_max, double omega, double t_f,
                                                   MomentBranch branch = MomentBranch::Automatic);

double distance_to_target(SpringState z, SpringState target);

/// Integral of u^2 over [0, T].
double pulse_energy(const Pulse& pulse);

/// max |u(t)| over [0, T].
double pulse_max_amplitude(const Pulse& pulse);

/// n uniform samples on [0, T], both ends included.
Pulse sample_pulse(const Pulse& pulse, std::size_t n_points);

/// n uniform times on [0, T], both ends included.
std::vector<double> uniform_times(double duration, std::size_t n_points);

}  // namespace springs
