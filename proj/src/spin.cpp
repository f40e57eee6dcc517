#include <springs/spin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <springs/ensemble.h>
#include <springs/errors.h>
#include <springs/linear_sta.h>
#include <springs/parallel.h>

namespace springs {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// r <- exp([theta]_x) r
void rotate(BlochState& r, const Vec3& theta)
{
    const double angle = std::sqrt(theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2]);
    if (angle == 0.0) {
        return;
    }
    const Vec3 k{theta[0] / angle, theta[1] / angle, theta[2] / angle};
    const Vec3 v{r.x, r.y, r.z};
    const Vec3 kv = cross(k, v);
    const double kd = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    r.x = v[0] * c + kv[0] * s + k[0] * kd * (1.0 - c);
    r.y = v[1] * c + kv[1] * s + k[1] * kd * (1.0 - c);
    r.z = v[2] * c + kv[2] * s + k[2] * kd * (1.0 - c);
}

template <class Visit>
BlochState integrate(const Field& u, double duration, double omega, std::size_t n_steps,
                     BlochIntegrator integrator, BlochState r, Visit&& visit)
{
    if (n_steps < 1) {
        throw InvalidArgument("bloch_propagate needs at least one step");
    }
    const double h = duration / static_cast<double>(n_steps);
    const double g = std::sqrt(3.0) / 6.0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = h * static_cast<double>(i);
        if (integrator == BlochIntegrator::Midpoint) {
            rotate(r, {0.0, h * u(t + 0.5 * h), h * omega});
        } else {
            const Vec3 w1{0.0, u(t + (0.5 - g) * h), omega};
            const Vec3 w2{0.0, u(t + (0.5 + g) * h), omega};
            const Vec3 c = cross(w2, w1);
            const double k = std::sqrt(3.0) * h * h / 12.0;
            rotate(r, {0.5 * h * (w1[0] + w2[0]) + k * c[0], 0.5 * h * (w1[1] + w2[1]) + k * c[1],
                       0.5 * h * (w1[2] + w2[2]) + k * c[2]});
        }
        visit(r);
    }
    return r;
}

}  // namespace

double BlochState::norm() const
{
    return std::sqrt(x * x + y * y + z * z);
}

double BlochState::theta() const
{
    return std::atan2(std::hypot(x, y), z);
}

double BlochState::phi() const
{
    return x == 0.0 && y == 0.0 ? 0.0 : std::atan2(y, x);
}

BlochState bloch_propagate(const Field& u, double duration, double omega, std::size_t n_steps,
                           BlochIntegrator integrator, BlochState initial)
{
    return integrate(u, duration, omega, n_steps, integrator, initial, [](const BlochState&) {});
}

BlochState bloch_propagate(const Pulse& pulse, double omega, std::size_t n_steps,
                           BlochIntegrator integrator)
{
    return bloch_propagate([&pulse](double t) { return pulse(t); }, pulse.duration(), omega,
                           n_steps, integrator);
}

std::vector<BlochState> bloch_trajectory(const Field& u, double duration, double omega,
                                         std::size_t n_steps, BlochIntegrator integrator)
{
    std::vector<BlochState> out{BlochState{}};
    out.reserve(n_steps + 1);
    integrate(u, duration, omega, n_steps, integrator, BlochState{},
              [&out](const BlochState& r) { out.push_back(r); });
    return out;
}

Pulse excitation_from_spring(const Pulse& spring_pulse)
{
    return spring_pulse.scaled(0.5 * std::numbers::pi);
}

double InversionSequence::operator()(double t) const
{
    const double T = excitation_.duration();
    return t <= T ? excitation_(t) : excitation_(2.0 * T - t);
}

Field InversionSequence::field() const
{
    return [this](double t) { return (*this)(t); };
}

InversionSequence inversion_sequence(const Pulse& excitation)
{
    return InversionSequence(excitation);
}

BlochState simulate_inversion(const InversionSequence& seq, double omega, std::size_t steps_per_half,
                              BlochIntegrator integrator)
{
    return bloch_propagate(seq.field(), seq.duration(), omega, 2 * steps_per_half, integrator);
}

double fidelity(const BlochState& state)
{
    return -state.z;
}

Pulse selective_inversion_pulse(double omega_a, double omega_b, double duration)
{
    const std::vector<double> omegas{omega_a, omega_b};
    Eigen::VectorXd x_f = Eigen::VectorXd::Zero(4);
    x_f(0) = 0.5 * std::numbers::pi;
    return general_sta(LinearSystem::spring_ensemble(omegas), x_f, duration).controls.front();
}

std::vector<FidelityPoint> fidelity_sweep(const SpinExperiment& experiment,
                                          const std::vector<double>& omegas, std::size_t workers)
{
    const Pulse pulse = experiment.pulse.scaled(experiment.scale);
    const InversionSequence seq(pulse);
    std::vector<FidelityPoint> out(omegas.size());
    parallel_for(omegas.size(), workers, [&](std::size_t i) {
        FidelityPoint& p = out[i];
        p.omega = omegas[i];
        p.state = experiment.mode == SpinMode::Inversion
                      ? simulate_inversion(seq, omegas[i], experiment.steps, experiment.integrator)
                      : bloch_propagate(pulse, omegas[i], experiment.steps, experiment.integrator);
        p.fidelity = fidelity(p.state);
    });
    return out;
}

double fidelity_bandwidth(const std::vector<FidelityPoint>& profile, double threshold)
{
    if (profile.empty()) {
        return 0.0;
    }
    const auto best = static_cast<std::size_t>(
        std::max_element(profile.begin(), profile.end(),
                         [](const auto& a, const auto& b) { return a.fidelity < b.fidelity; }) -
        profile.begin());
    if (profile[best].fidelity < threshold) {
        return 0.0;
    }
    auto crossing = [&](std::size_t in, std::size_t out) {
        const double fa = profile[in].fidelity;
        const double fb = profile[out].fidelity;
        const double f = (fa - threshold) / (fa - fb);
        return profile[in].omega + f * (profile[out].omega - profile[in].omega);
    };
    std::size_t lo = best;
    while (lo > 0 && profile[lo - 1].fidelity >= threshold) --lo;
    std::size_t hi = best;
    while (hi + 1 < profile.size() && profile[hi + 1].fidelity >= threshold) ++hi;
    const double left = lo > 0 ? crossing(lo, lo - 1) : profile[lo].omega;
    const double right = hi + 1 < profile.size() ? crossing(hi, hi + 1) : profile[hi].omega;
    return right - left;
}

double spin_spring_deviation(const Pulse& pulse, double omega, std::size_t n_steps)
{
    const auto traj = bloch_trajectory([&pulse](double t) { return pulse(t); }, pulse.duration(),
                                       omega, n_steps);
    const double h = pulse.duration() / static_cast<double>(n_steps);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = std::min(h * static_cast<double>(i), pulse.duration());
        const std::complex<double> spin = std::polar(traj[i].theta(), traj[i].phi());
        worst = std::max(worst, std::abs(spin - propagate_exact(pulse, omega, t)));
    }
    return worst;
}

double spring_max_radius(const Pulse& pulse, double omega, std::size_t n_points)
{
    double worst = 0.0;
    for (double t : uniform_times(pulse.duration(), n_points)) {
        worst = std::max(worst, std::abs(propagate_exact(pulse, omega, t)));
    }
    return worst;
}

}  // namespace springs
