#include <springs/icr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <springs/ensemble.h>
#include <springs/errors.h>
#include <springs/parallel.h>

namespace springs {

using namespace std::complex_literals;

void IcrConfig::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string(name) + " must be positive and finite");
        }
    };
    positive(e0_v_per_m, "e0_v_per_m");
    positive(b0_tesla, "b0_tesla");
    positive(f0_hz, "f0_hz");
    positive(tf_ms, "tf_ms");
    positive(mu, "mu");
    positive(lambda, "lambda");
    if (n_design_freqs < 1) {
        throw ConfigError("n_design_freqs must be >= 1");
    }
    if (!(band_hi > band_lo)) {
        throw ConfigError("design band must satisfy band_hi > band_lo");
    }
    if (steps_per_period < 100) {
        throw ConfigError("steps_per_period must be >= 100");
    }
}

double IcrConfig::carrier() const
{
    return 2.0 * std::numbers::pi * f0_hz;
}

double IcrConfig::e_over_b() const
{
    return e0_v_per_m / b0_tesla;
}

std::complex<double> icr_target_profile(double omega, const IcrConfig& cfg)
{
    const double modulus = 0.5 * (1.0 + std::tanh((cfg.omega_s - omega) * cfg.mu));
    return std::polar(modulus, omega * cfg.eta * cfg.tf_ms);
}

IcrDesign design_icr_pulse(const IcrConfig& cfg)
{
    cfg.validate();
    IcrDesign d;
    d.problem.omegas =
        FrequencyGrid::regular(cfg.band_lo, cfg.band_hi, static_cast<std::size_t>(cfg.n_design_freqs))
            .omegas();
    for (double w : d.problem.omegas) {
        d.problem.targets.push_back(icr_target_profile(w, cfg));
    }
    d.problem.duration = cfg.tf_ms;
    d.problem.lambda = cfg.lambda;
    d.solution = solve_approach2(d.problem);
    d.envelope = pulse_approach2(d.solution, d.problem);
    d.report = self_consistency_check(d.problem, d.envelope);
    return d;
}

PhysicalField PhysicalField::modulated(Pulse envelope, double e0, double carrier, double time_unit)
{
    if (!(time_unit > 0.0)) {
        throw InvalidArgument("time unit must be positive");
    }
    return PhysicalField(std::move(envelope), e0, carrier, time_unit, true);
}

PhysicalField PhysicalField::chirp(const ChirpParams& params_si, double e0, double carrier)
{
    ChirpParams unit = params_si;
    unit.u0 = 1.0;
    return PhysicalField(chirp_pulse(unit), e0, carrier, 1.0, false);
}

double PhysicalField::operator()(double t) const
{
    if (!modulated_) {
        return e0_ * envelope_(t);
    }
    return e0_ * envelope_(t / unit_) * std::cos(carrier_ * t);
}

double PhysicalField::duration() const
{
    return envelope_.duration() * unit_;
}

RwaResult PhysicalField::rwa(double delta_omega) const
{
    RwaResult r;
    r.detuning_warning = std::abs(delta_omega) > 0.1 * carrier_;
    if (modulated_) {
        // In envelope time units the conjugated equation is a spring at delta_omega * unit.
        const double kappa = 0.5 * carrier_ * e0_ * unit_;
        r.velocity = kappa * std::conj(propagate_exact(envelope_, delta_omega * unit_));
    } else {
        const auto& c = *envelope_.as<ChirpPulse>();
        const double T = c.duration;
        r.velocity = 0.5 * carrier_ * e0_ * std::exp(-1i * (delta_omega * T)) *
                     quadratic_phase_integral(-0.5 * c.sweep_rate, delta_omega - c.omega_i + carrier_, T);
    }
    r.position = 1i * r.velocity / carrier_;
    return r;
}

Pulse PhysicalField::as_physical_pulse() const
{
    if (!modulated_) {
        return envelope_.scaled(e0_);
    }
    const auto* s = envelope_.as<ExpSumPulse>();
    if (s == nullptr) {
        throw InvalidArgument("as_physical_pulse needs an exponential-sum envelope");
    }
    // Re[c e^{i w t}] cos(w0 t) = Re[c e^{i(w+w0)t}]/2 + Re[c e^{i(w-w0)t}]/2
    std::vector<std::complex<double>> c;
    std::vector<double> w;
    for (std::size_t k = 0; k < s->coeffs.size(); ++k) {
        for (double sign : {1.0, -1.0}) {
            c.push_back(0.5 * e0_ * s->coeffs[k]);
            w.push_back(s->omegas[k] / unit_ + sign * carrier_);
        }
    }
    return Pulse::exp_sum(std::move(c), std::move(w), duration());
}

PhysicalField envelope_to_physical(const Pulse& envelope, const IcrConfig& cfg)
{
    return PhysicalField::modulated(envelope, cfg.e_over_b(), cfg.carrier(), 1e-3);
}

SampledField sample_field(const PhysicalField& field, double dt)
{
    if (!(dt > 0.0)) {
        throw InvalidArgument("time step must be positive");
    }
    const auto steps = static_cast<std::size_t>(std::llround(field.duration() / dt));
    if (steps == 0) {
        throw ResolutionError("time step longer than the pulse");
    }
    SampledField out;
    out.dt = field.duration() / static_cast<double>(steps);
    out.carrier = field.carrier();
    out.values.resize(2 * steps + 1);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        out.values[k] = field(0.5 * out.dt * static_cast<double>(k));
    }
    return out;
}

IonState simulate_ion_full(const SampledField& field, double omega_ion)
{
    if (!(omega_ion > 0.0)) {
        throw InvalidArgument("cyclotron frequency must be positive");
    }
    const double fastest = std::max(field.carrier, omega_ion);
    if (field.dt > 2.0 * std::numbers::pi / (100.0 * fastest)) {
        throw ResolutionError("time step exceeds 1/100 of the fastest period");
    }
    // dX/dt = V, dV/dt = -i w V + w e_x with X = x + i y, V = vx + i vy.
    using C = std::complex<double>;
    const double w = omega_ion;
    const double h = field.dt;
    C X = 0.0;
    C V = 0.0;
    auto dv = [w](C v, double e) { return -1i * w * v + w * e; };
    for (std::size_t i = 0; i < field.steps(); ++i) {
        const double e0 = field.values[2 * i];
        const double e1 = field.values[2 * i + 1];
        const double e2 = field.values[2 * i + 2];
        const C k1v = dv(V, e0);
        const C k1x = V;
        const C k2v = dv(V + 0.5 * h * k1v, e1);
        const C k2x = V + 0.5 * h * k1v;
        const C k3v = dv(V + 0.5 * h * k2v, e1);
        const C k3x = V + 0.5 * h * k2v;
        const C k4v = dv(V + h * k3v, e2);
        const C k4x = V + h * k3v;
        X += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        V += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    if (!std::isfinite(std::abs(X)) || !std::isfinite(std::abs(V))) {
        throw PropagationError(omega_ion, "non-finite ion state");
    }
    return IonState{X.real(), X.imag(), V.real(), V.imag(), omega_ion};
}

IonState simulate_ion_full(const PhysicalField& field, double omega_ion, double dt)
{
    return simulate_ion_full(sample_field(field, dt), omega_ion);
}

RwaResult simulate_ion_rwa(const Pulse& envelope, double delta_omega, const IcrConfig& cfg)
{
    return envelope_to_physical(envelope, cfg).rwa(delta_omega);
}

IcrObservables icr_observables(const IonState& state, double carrier, double t_f)
{
    const std::complex<double> V(state.vx, state.vy);
    IcrObservables o;
    o.r_mm = std::abs(V) / state.omega_ion * 1e3;
    o.phase_defined = std::abs(V) > 0.0;
    o.phi_rad = o.phase_defined ? std::arg(V * std::exp(1i * (carrier * t_f))) : 0.0;
    return o;
}

IcrObservables icr_observables(const RwaResult& rwa)
{
    IcrObservables o;
    o.r_mm = std::abs(rwa.position) * 1e3;
    o.phase_defined = std::abs(rwa.velocity) > 0.0;
    o.phi_rad = o.phase_defined ? std::arg(rwa.velocity) : 0.0;
    return o;
}

void unwrap_phase(std::vector<double>& phase)
{
    for (std::size_t i = 1; i < phase.size(); ++i) {
        const double d = phase[i] - phase[i - 1];
        phase[i] -= 2.0 * std::numbers::pi * std::round(d / (2.0 * std::numbers::pi));
    }
}

std::vector<IcrSweepRow> icr_sweep(const PhysicalField& field, const std::vector<double>& rwa_hz,
                                   const std::vector<double>& full_hz, double dt,
                                   std::size_t workers)
{
    std::vector<double> freqs = rwa_hz;
    freqs.insert(freqs.end(), full_hz.begin(), full_hz.end());
    std::sort(freqs.begin(), freqs.end());
    freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<IcrSweepRow> rows(freqs.size());
    std::vector<bool> full(freqs.size(), false);
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        rows[i].f_khz = freqs[i] * 1e-3;
        full[i] = std::find(full_hz.begin(), full_hz.end(), freqs[i]) != full_hz.end();
        const IcrObservables o = icr_observables(field.rwa(2.0 * std::numbers::pi * freqs[i] - field.carrier()));
        rows[i].r_mm_rwa = o.r_mm;
        rows[i].phi_rad_rwa = o.phi_rad;
        rows[i].r_mm_full = nan;
        rows[i].phi_rad_full = nan;
    }

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (full[i]) todo.push_back(i);
    }
    if (!todo.empty()) {
        const SampledField sampled = sample_field(field, dt);
        parallel_for(todo.size(), workers, [&](std::size_t j) {
            const std::size_t i = todo[j];
            const IonState s = simulate_ion_full(sampled, 2.0 * std::numbers::pi * freqs[i]);
            const IcrObservables o = icr_observables(s, field.carrier(), field.duration());
            rows[i].r_mm_full = o.r_mm;
            rows[i].phi_rad_full = o.phi_rad;
        });
    }

    std::vector<double> ph;
    for (const auto& r : rows) ph.push_back(r.phi_rad_rwa);
    unwrap_phase(ph);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].phi_rad_rwa = ph[i];
    ph.clear();
    for (std::size_t i : todo) ph.push_back(rows[i].phi_rad_full);
    unwrap_phase(ph);
    for (std::size_t j = 0; j < todo.size(); ++j) rows[todo[j]].phi_rad_full = ph[j];
    return rows;
}

AdiabaticIcrReference adiabatic_icr_reference(const IcrConfig& cfg, double e0_v_per_m,
                                              double f_start_hz, double f_end_hz)
{
    AdiabaticIcrReference ref;
    ref.chirp.u0 = 1.0;
    ref.chirp.omega_i = 2.0 * std::numbers::pi * f_start_hz;
    ref.chirp.omega_f = 2.0 * std::numbers::pi * f_end_hz;
    ref.chirp.duration = cfg.duration_s();
    ref.e0 = e0_v_per_m / cfg.b0_tesla;
    ref.carrier = cfg.carrier();
    return ref;
}

double adiabatic_radius_mm(const AdiabaticIcrReference& ref)
{
    return ref.e0 * std::sqrt(std::numbers::pi / (2.0 * ref.chirp.sweep_rate())) * 1e3;
}

}  // namespace springs
