#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <springs/adiabatic.h>
#include <springs/oct.h>
#include <springs/pulse.h>

namespace springs {

/// ICR excitation settings. Design quantities are dimensionless with time in ms
/// (frequencies in rad/ms); physical quantities are SI.
struct IcrConfig {
    double e0_v_per_m = 100.0;
    double b0_tesla = 10.0;
    double f0_hz = 500e3;
    double tf_ms = 1.0;
    double omega_s = 100.0;
    double mu = 0.1;
    double eta = 0.5;
    double lambda = 1e-3;
    int n_design_freqs = 60;
    double band_lo = 0.0;
    double band_hi = 200.0;
    int steps_per_period = 200;

    void validate() const;
    double carrier() const;        // omega_0, rad/s
    double e_over_b() const;       // e_0 = E_0/B_0, m/s
    double duration_s() const { return tf_ms * 1e-3; }
};

/// |z_f| = (1 + tanh((omega_S - omega) mu)) / 2, z_f = |z_f| exp(i omega eta t_f).
std::complex<double> icr_target_profile(double omega, const IcrConfig& cfg);

struct IcrDesign {
    OctProblem problem;
    Approach2Solution solution;
    Pulse envelope = Pulse::zero(1.0);  // dimensionless, t in ms
    ConsistencyReport report;
};

IcrDesign design_icr_pulse(const IcrConfig& cfg);

struct RwaResult {
    std::complex<double> velocity;  // rotating-frame V~(t_f), m/s
    std::complex<double> position;  // X~ = i V~ / omega_0, m
    bool detuning_warning = false;  // |delta omega| > 0.1 omega_0
};

/// Excitation field in m/s with time in seconds, either an envelope on a carrier,
/// e(t) = e_0 u(t / unit) cos(omega_0 t), or a chirp e(t) = e_0 cos(omega_i t + s t^2/2)
/// observed in the frame rotating at omega_0.
class PhysicalField {
public:
    static PhysicalField modulated(Pulse envelope, double e0, double carrier, double time_unit = 1e-3);
    static PhysicalField chirp(const ChirpParams& params_si, double e0, double carrier);

    double operator()(double t) const;
    double duration() const;
    double carrier() const { return carrier_; }
    double amplitude() const { return e0_; }
    bool is_modulated() const { return modulated_; }
    const Pulse& envelope() const { return envelope_; }

    /// Rotating-wave V~(t_f) of an ion detuned by delta_omega (rad/s) from the carrier:
    /// dV~/dt = -i delta_omega V~ + omega_0 e_0 (slow part of 2 u cos(..) e^{i omega_0 t}) / 2.
    RwaResult rwa(double delta_omega) const;

    /// e(t) as an exact pulse in seconds (ExpSum or Chirp envelopes only).
    Pulse as_physical_pulse() const;

private:
    PhysicalField(Pulse envelope, double e0, double carrier, double unit, bool modulated)
        : envelope_(std::move(envelope)), e0_(e0), carrier_(carrier), unit_(unit), modulated_(modulated) {}

    Pulse envelope_;
    double e0_;
    double carrier_;
    double unit_;
    bool modulated_;
};

PhysicalField envelope_to_physical(const Pulse& envelope, const IcrConfig& cfg);

/// Field values on the half-step grid t = k dt/2, shared across ions.
struct SampledField {
    std::vector<double> values;
    double dt = 0.0;
    double carrier = 0.0;
    std::size_t steps() const { return values.empty() ? 0 : (values.size() - 1) / 2; }
};

SampledField sample_field(const PhysicalField& field, double dt);

struct IonState {
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double omega_ion = 0.0;
};

/// RK4 from rest at the origin. Throws ResolutionError when dt exceeds 1/100 of
/// the carrier or cyclotron period.
IonState simulate_ion_full(const SampledField& field, double omega_ion);
IonState simulate_ion_full(const PhysicalField& field, double omega_ion, double dt);

/// dV~/dt = -i delta_omega V~ + omega_0 e_0 u / 2, evaluated with the spring
/// propagator: V~ = kappa conj(z_{delta_omega}), kappa = omega_0 e_0 / 2 * 1 ms.
RwaResult simulate_ion_rwa(const Pulse& envelope, double delta_omega, const IcrConfig& cfg);

struct IcrObservables {
    double r_mm = 0.0;
    double phi_rad = 0.0;
    bool phase_defined = true;
};

/// Radius |v|/omega_ion and phase arg(V e^{i omega_0 t_f}).
IcrObservables icr_observables(const IonState& state, double carrier, double t_f);
/// Radius |X~| = |V~|/omega_0 and phase arg V~.
IcrObservables icr_observables(const RwaResult& rwa);

struct IcrSweepRow {
    double f_khz = 0.0;
    double r_mm_rwa = 0.0;
    double r_mm_full = 0.0;   // NaN where the full dynamics was not simulated
    double phi_rad_rwa = 0.0;
    double phi_rad_full = 0.0;
};

/// Unwraps a phase sequence in place.
void unwrap_phase(std::vector<double>& phase);

/// RWA at every frequency, full dynamics at the frequencies in `full_hz`
/// (rows are the union, ordered by frequency). Phases are unwrapped per column.
std::vector<IcrSweepRow> icr_sweep(const PhysicalField& field, const std::vector<double>& rwa_hz,
                                   const std::vector<double>& full_hz, double dt,
                                   std::size_t workers = 1);

/// Chirp 480 -> 520 kHz, 1 ms, E0 = 625 V/m at the configured B0.
struct AdiabaticIcrReference {
    ChirpParams chirp;  // SI: rad/s, seconds, u0 = 1
    double e0 = 0.0;    // m/s
    double carrier = 0.0;
};

AdiabaticIcrReference adiabatic_icr_reference(const IcrConfig& cfg, double e0_v_per_m = 625.0,
                                              double f_start_hz = 480e3, double f_end_hz = 520e3);

/// Stationary-phase radius e_0 sqrt(pi / 2s), in mm.
double adiabatic_radius_mm(const AdiabaticIcrReference& ref);

}  // namespace springs
