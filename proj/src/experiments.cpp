#include <springs/experiments.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include <springs/adiabatic.h>
#include <springs/csv.h>
#include <springs/ensemble.h>
#include <springs/errors.h>
#include <springs/icr.h>
#include <springs/oct.h>
#include <springs/parallel.h>
#include <springs/spin.h>
#include <springs/sta.h>

namespace springs {

namespace {

using cplx = std::complex<double>;
using nlohmann::json;

struct Context {
    const ExperimentManifest& manifest;
    std::size_t workers;
    RunResult result;

    const ParamSet& p() const { return manifest.params; }

    void write(const std::string& file, const CsvTable& table)
    {
        const auto path = manifest.output_dir / file;
        table.write(path);
        result.files.push_back(path);
    }
};

std::vector<double> linspace(double lo, double hi, int n)
{
    if (n < 1) throw ConfigError("grid size must be at least 1");
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return x;
}

std::vector<double> logspace(double lo, double hi, int n)
{
    if (!(lo > 0.0 && hi > 0.0)) throw ConfigError("log-spaced grid needs positive bounds");
    auto x = linspace(std::log(lo), std::log(hi), n);
    for (double& v : x) v = std::exp(v);
    return x;
}

std::vector<int> int_list(const ParamSet& p, const std::string& key)
{
    std::vector<int> out;
    for (double v : p.list(key)) {
        if (v != std::floor(v) || v < 1) throw ConfigError("parameter '" + key + "' needs positive integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

GridConvention grid_convention(const std::string& name)
{
    if (name == "endpoints") return GridConvention::Endpoints;
    if (name == "midpoints") return GridConvention::Midpoints;
    throw ConfigError("grid must be endpoints or midpoints, got '" + name + "'");
}

GFamily g_family(const std::string& name)
{
    if (name == "zero_ends") return GFamily::ZeroEnds;
    if (name == "minimal") return GFamily::Minimal;
    throw ConfigError("g_family must be minimal or zero_ends, got '" + name + "'");
}

std::string n_label(int n) { return "N" + std::to_string(n); }

double wrap(double phase) { return std::remainder(phase, 2.0 * std::numbers::pi); }

struct Fit {
    Eigen::VectorXd coeffs;  // ascending powers
    double residual = 0.0;   // rms
};

Fit polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree)
{
    Eigen::MatrixXd V(x.size(), degree + 1);
    Eigen::VectorXd b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (int d = 0; d <= degree; ++d) V(i, d) = std::pow(x[i], d);
        b(i) = y[i];
    }
    Fit f;
    f.coeffs = V.colPivHouseholderQr().solve(b);
    f.residual = (V * f.coeffs - b).norm() / std::sqrt(static_cast<double>(x.size()));
    return f;
}

void unwrap(std::vector<double>& phase)
{
    for (std::size_t i = 1; i < phase.size(); ++i) {
        phase[i] -= 2.0 * std::numbers::pi * std::round((phase[i] - phase[i - 1]) / (2.0 * std::numbers::pi));
    }
}

std::vector<cplx> endpoints(const Pulse& pulse, const std::vector<double>& omegas, std::size_t workers)
{
    std::vector<cplx> z(omegas.size());
    parallel_for(omegas.size(), workers, [&](std::size_t i) { z[i] = propagate_exact(pulse, omegas[i]); });
    return z;
}

json pulse_summary(const Pulse& pulse)
{
    return {{"u_max", pulse_max_amplitude(pulse)}, {"energy", pulse_energy(pulse)}};
}

double max_residual(const Pulse& pulse, const std::vector<double>& omegas, const std::vector<cplx>& targets)
{
    double r = 0.0;
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        r = std::max(r, std::abs(propagate_exact(pulse, omegas[k]) - targets[k]));
    }
    return r;
}

// ---- fig1

void run_fig1(Context& c)
{
    const ChirpParams cp{c.p().number("u0"), c.p().number("omega_i"), c.p().number("omega_f"),
                         c.p().number("tf")};
    if (!(cp.sweep_rate() > 0.0)) throw ConfigError("fig1 needs omega_f > omega_i");
    const auto omegas = linspace(c.p().number("omega_min"), c.p().number("omega_max"), c.p().integer("n_omega"));
    std::vector<cplx> z(omegas.size());
    parallel_for(omegas.size(), c.workers, [&](std::size_t i) { z[i] = chirp_final_state_exact(cp, omegas[i]); });

    CsvTable modulus({"omega", "abs_exact", "abs_stationary"});
    CsvTable phase({"omega", "arg_exact", "arg_stationary"});
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const double w = omegas[i];
        const StationaryPhase sp = stationary_phase_prediction(cp, std::abs(w));
        const double row_m[] = {w, std::abs(z[i]), sp.in_band ? sp.modulus : 0.0};
        modulus.add_row(row_m);
        if (w >= 0.0) {
            const double row_p[] = {w, std::arg(z[i]), sp.in_band ? wrap(sp.phase) : NAN};
            phase.add_row(row_p);
        }
    }
    c.write("fig1_modulus.csv", modulus);
    c.write("fig1_phase.csv", phase);

    // In-band statistics on a fine grid; the step keeps unwrapping unambiguous.
    const double lo = c.p().number("band_lo");
    const double hi = c.p().number("band_hi");
    const int n_fine = static_cast<int>(std::round((hi - lo) / 1e-3)) + 1;
    const auto fine = linspace(lo, hi, n_fine);
    std::vector<double> mod(fine.size());
    std::vector<double> arg(fine.size());
    parallel_for(fine.size(), c.workers, [&](std::size_t i) {
        const cplx zf = chirp_final_state_exact(cp, fine[i]);
        mod[i] = std::abs(zf);
        arg[i] = std::arg(zf * std::exp(cplx(0.0, -fine[i] * cp.duration)));
    });
    unwrap(arg);
    const double target = stationary_phase_prediction(cp, 0.5 * (lo + hi)).modulus;
    double mean = 0.0;
    double dev = 0.0;
    for (double m : mod) {
        mean += m;
        dev = std::max(dev, std::abs(m - target) / target);
    }
    mean /= static_cast<double>(mod.size());
    const Fit quad = polyfit(fine, arg, 2);
    const Pulse u = chirp_pulse(cp);

    c.result.summary["pulse"] = pulse_summary(u);
    c.result.summary["stationary_modulus"] = target;
    c.result.summary["band"] = {lo, hi};
    c.result.summary["band_mean_modulus"] = mean;
    c.result.summary["band_min_modulus"] = *std::min_element(mod.begin(), mod.end());
    c.result.summary["band_max_modulus"] = *std::max_element(mod.begin(), mod.end());
    c.result.summary["band_max_relative_deviation"] = dev;
    c.result.summary["phase_quadratic_coefficient"] = quad.coeffs(2);
    c.result.summary["phase_quadratic_expected"] = -1.0 / (2.0 * cp.sweep_rate());
}

// ---- fig2

double loglog_slope(const StaDesign& d, double lo, double hi)
{
    std::vector<double> x;
    std::vector<double> y;
    for (double w : logspace(lo, hi, 21)) {
        x.push_back(std::log(w));
        y.push_back(std::log(sta_distance_profile(d, w)));
    }
    return polyfit(x, y, 1).coeffs(1);
}

void run_fig2(Context& c)
{
    const auto ns = int_list(c.p(), "n_list");
    const double tf = c.p().number("tf");
    const GFamily fam = g_family(c.p().text("g_family"));
    const auto omegas = logspace(c.p().number("omega_min"), c.p().number("omega_max"), c.p().integer("n_omega"));
    const auto times = uniform_times(tf, static_cast<std::size_t>(c.p().integer("n_samples")));

    std::vector<std::string> dh{"omega"};
    std::vector<std::string> ph{"t"};
    std::vector<StaDesign> designs;
    json per_n = json::object();
    for (int n : ns) {
        const std::vector<double> zeros(n, 0.0);
        designs.push_back(design_sta(zeros, tf, fam));
        const StaDesign& d = designs.back();
        dh.push_back("d_" + n_label(n));
        ph.push_back("u_" + n_label(n));
        json s = pulse_summary(d.pulse);
        s["endpoint_residual"] = std::abs(propagate_exact(d.pulse, 0.0) - 1.0);
        s["loglog_slope"] = loglog_slope(d, c.p().number("slope_lo"), c.p().number("slope_hi"));
        s["distance_at_probe"] = sta_distance_profile(d, c.p().number("probe_omega"));
        per_n[n_label(n)] = s;
    }
    std::vector<std::vector<double>> dist(omegas.size(), std::vector<double>(designs.size()));
    parallel_for(omegas.size(), c.workers, [&](std::size_t i) {
        for (std::size_t j = 0; j < designs.size(); ++j) dist[i][j] = sta_distance_profile(designs[j], omegas[i]);
    });
    CsvTable distance(dh);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        std::vector<double> row{omegas[i]};
        row.insert(row.end(), dist[i].begin(), dist[i].end());
        distance.add_row(row);
    }
    CsvTable pulse(ph);
    for (double t : times) {
        std::vector<double> row{t};
        for (const auto& d : designs) row.push_back(d.pulse(t));
        pulse.add_row(row);
    }
    c.write("fig2_distance.csv", distance);
    c.write("fig2_pulse.csv", pulse);
    c.result.summary["designs"] = per_n;
    c.result.summary["probe_omega"] = c.p().number("probe_omega");
}

// ---- fig3 and table1

struct BandPulse {
    Pulse pulse = Pulse::zero(1.0);
    json info;
};

BandPulse band_pulse(const std::string& method, const std::vector<double>& omegas, double tf, GFamily fam)
{
    const std::vector<cplx> targets(omegas.size(), 1.0);
    BandPulse b;
    if (method == "sta") {
        b.pulse = design_sta(omegas, tf, fam).pulse;
        b.info = json::object();
    } else if (method == "oct") {
        const OctProblem prob{omegas, targets, tf, 0.0};
        const AdjointSolution s = solve_approach1(prob);
        b.pulse = pulse_approach1(s, omegas, tf);
        b.info = {{"condition_estimate", s.condition_estimate},
                  {"least_squares", s.least_squares},
                  {"warning", s.warning}};
    } else {
        throw ConfigError("method must be sta or oct, got '" + method + "'");
    }
    b.info.update(pulse_summary(b.pulse));
    b.info["max_endpoint_residual"] = max_residual(b.pulse, omegas, targets);
    return b;
}

void run_fig3(Context& c)
{
    const auto ns = int_list(c.p(), "n_list");
    const double tf = c.p().number("tf");
    const GFamily fam = g_family(c.p().text("g_family"));
    const GridConvention conv = grid_convention(c.p().text("grid"));
    const auto omegas = linspace(c.p().number("omega_min"), c.p().number("omega_max"), c.p().integer("n_omega"));
    const auto times = uniform_times(tf, static_cast<std::size_t>(c.p().integer("n_samples")));

    std::vector<std::string> dh{"omega"};
    std::vector<std::string> ph{"t"};
    std::vector<Pulse> pulses;
    json designs = json::object();
    for (const auto& method : c.p().words("methods")) {
        for (int n : ns) {
            const auto grid = FrequencyGrid::regular(c.p().number("band_lo"), c.p().number("band_hi"),
                                                     static_cast<std::size_t>(n), conv);
            BandPulse b = band_pulse(method, grid.omegas(), tf, fam);
            const std::string label = method + "_" + n_label(n);
            dh.push_back("d_" + label);
            ph.push_back("u_" + label);
            designs[label] = b.info;
            pulses.push_back(std::move(b.pulse));
        }
    }
    std::vector<std::vector<double>> dist(omegas.size(), std::vector<double>(pulses.size()));
    parallel_for(omegas.size(), c.workers, [&](std::size_t i) {
        for (std::size_t j = 0; j < pulses.size(); ++j) {
            dist[i][j] = distance_to_target(propagate_exact(pulses[j], omegas[i]), 1.0);
        }
    });
    CsvTable distance(dh);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        std::vector<double> row{omegas[i]};
        row.insert(row.end(), dist[i].begin(), dist[i].end());
        distance.add_row(row);
    }
    CsvTable pulse(ph);
    for (double t : times) {
        std::vector<double> row{t};
        for (const auto& u : pulses) row.push_back(u(t));
        pulse.add_row(row);
    }
    c.write("fig3_distance.csv", distance);
    c.write("fig3_pulse.csv", pulse);
    c.result.summary["designs"] = designs;
}

void run_table1(Context& c)
{
    const auto& reference = manifest_document("table1").at("reference");
    const auto ns = int_list(c.p(), "n_list");
    const double tf = c.p().number("tf");
    const GFamily fam = g_family(c.p().text("g_family"));
    const auto grids = c.p().words("grids");

    CsvTable table({"method", "n", "grid", "u_max", "energy", "u_max_reference", "energy_reference"});
    json cells = json::array();
    for (const std::string method : {"sta", "oct"}) {
        for (int n : ns) {
            const std::string key = std::to_string(n);
            const bool has_ref = reference.at(method).contains(key);
            const double u_ref = has_ref ? reference[method][key][0].get<double>() : NAN;
            const double e_ref = has_ref ? reference[method][key][1].get<double>() : NAN;
            json cell = {{"method", method}, {"n", n}, {"conventions", json::object()}};
            if (has_ref) cell["reference"] = {{"u_max", u_ref}, {"energy", e_ref}};
            double best = INFINITY;
            for (const auto& g : grids) {
                const auto grid = FrequencyGrid::regular(c.p().number("band_lo"), c.p().number("band_hi"),
                                                         static_cast<std::size_t>(n), grid_convention(g));
                const BandPulse b = band_pulse(method, grid.omegas(), tf, fam);
                const double u = b.info["u_max"];
                const double e = b.info["energy"];
                table.add_row({method, key, g, format_number(u), format_number(e), format_number(u_ref),
                               format_number(e_ref)});
                json conv = b.info;
                if (has_ref) {
                    const double err = std::max(std::abs(u - u_ref) / u_ref, std::abs(e - e_ref) / e_ref);
                    conv["max_relative_error"] = err;
                    if (err < best) {
                        best = err;
                        cell["closest_grid"] = g;
                        cell["max_relative_error"] = err;
                    }
                }
                cell["conventions"][g] = conv;
            }
            cells.push_back(cell);
        }
    }
    c.write("table1.csv", table);
    c.result.summary["cells"] = cells;
}

// ---- icr

IcrConfig icr_config(const ParamSet& p)
{
    IcrConfig cfg;
    cfg.e0_v_per_m = p.number("e0_v_per_m");
    cfg.b0_tesla = p.number("b0_tesla");
    cfg.f0_hz = p.number("f0_hz");
    cfg.tf_ms = p.number("tf_ms");
    cfg.omega_s = p.number("omega_s");
    cfg.mu = p.number("mu");
    cfg.eta = p.number("eta");
    cfg.lambda = p.number("lambda");
    cfg.n_design_freqs = p.integer("n_design_freqs");
    cfg.band_lo = p.number("band_lo");
    cfg.band_hi = p.number("band_hi");
    cfg.steps_per_period = p.integer("steps_per_period");
    cfg.validate();
    return cfg;
}

CsvTable icr_table(const std::vector<IcrSweepRow>& rows)
{
    CsvTable t({"f_khz", "r_mm_rwa", "r_mm_full", "phi_rad_rwa", "phi_rad_full"});
    for (const auto& r : rows) {
        const double v[] = {r.f_khz, r.r_mm_rwa, r.r_mm_full, r.phi_rad_rwa, r.phi_rad_full};
        t.add_row(v);
    }
    return t;
}

void run_icr(Context& c)
{
    const IcrConfig cfg = icr_config(c.p());
    const IcrDesign design = design_icr_pulse(cfg);
    const PhysicalField field = envelope_to_physical(design.envelope, cfg);
    const double dt = 1.0 / (cfg.f0_hz * cfg.steps_per_period);

    auto rwa_khz = linspace(c.p().number("f_min_khz"), c.p().number("f_max_khz"), c.p().integer("n_rwa"));
    std::vector<double> rwa_hz;
    for (double f : rwa_khz) rwa_hz.push_back(f * 1e3);
    std::vector<double> full_hz;
    if (c.p().integer("n_ions_full") > 0) {
        for (double f : linspace(c.p().number("f_min_khz"), c.p().number("f_max_khz"), c.p().integer("n_ions_full"))) {
            full_hz.push_back(f * 1e3);
        }
    }
    const auto optimal = icr_sweep(field, rwa_hz, full_hz, dt, c.workers);

    const AdiabaticIcrReference ref = adiabatic_icr_reference(
        cfg, c.p().number("adiabatic_e0_v_per_m"), c.p().number("adiabatic_f_start_hz"),
        c.p().number("adiabatic_f_end_hz"));
    const PhysicalField chirp = PhysicalField::chirp(ref.chirp, ref.e0, ref.carrier);
    const auto adiabatic = icr_sweep(chirp, rwa_hz, full_hz, dt, c.workers);

    CsvTable pulse({"t_ms", "e_v_per_m"});
    for (double t : uniform_times(cfg.tf_ms, static_cast<std::size_t>(c.p().integer("n_pulse_samples")))) {
        const double v[] = {t, cfg.e0_v_per_m * design.envelope(t)};
        pulse.add_row(v);
    }
    c.write("icr_optimal.csv", icr_table(optimal));
    c.write("icr_adiabatic.csv", icr_table(adiabatic));
    c.write("icr_pulse.csv", pulse);

    // Design frequency of a row: detuning in rad/ms.
    const double f0_khz = cfg.f0_hz * 1e-3;
    auto omega_of = [&](double f_khz) { return 2.0 * std::numbers::pi * (f_khz - f0_khz); };
    // Transition of the tanh target: omega_s -+ 2/mu (target 0.98 and 0.02).
    const double p_lo = cfg.band_lo;
    const double p_hi = cfg.omega_s - 2.0 / cfg.mu;
    const double stop = cfg.omega_s + 2.0 / cfg.mu;

    std::vector<double> px;
    std::vector<double> py;
    double r_sum = 0.0;
    double r_min = INFINITY;
    double r_max = 0.0;
    double stop_max = 0.0;
    double full_dev = 0.0;
    for (const auto& r : optimal) {
        const double w = omega_of(r.f_khz);
        if (w >= p_lo && w <= p_hi) {
            px.push_back(w);
            py.push_back(r.phi_rad_rwa);
            r_sum += r.r_mm_rwa;
            r_min = std::min(r_min, r.r_mm_rwa);
            r_max = std::max(r_max, r.r_mm_rwa);
            if (!std::isnan(r.r_mm_full)) {
                full_dev = std::max(full_dev, std::abs(r.r_mm_full - r.r_mm_rwa) / r.r_mm_rwa);
            }
        }
        if (w >= stop) stop_max = std::max(stop_max, r.r_mm_rwa);
    }
    json opt = {{"condition_estimate", design.solution.adjoint.condition_estimate},
                {"least_squares", design.solution.adjoint.least_squares},
                {"warning", design.solution.adjoint.warning},
                {"max_endpoint_error", design.report.max_error},
                {"cost", design.report.cost},
                {"energy", design.report.energy},
                {"u_max", design.report.max_amplitude},
                {"e_max_v_per_m", cfg.e0_v_per_m * design.report.max_amplitude}};
    if (!px.empty()) {
        const double mean = r_sum / static_cast<double>(px.size());
        opt["plateau_omega"] = {p_lo, p_hi};
        opt["plateau_mean_mm"] = mean;
        opt["plateau_min_mm"] = r_min;
        opt["plateau_max_mm"] = r_max;
        opt["stop_band_omega"] = stop;
        opt["stop_band_max_mm"] = stop_max;
        opt["phase_slope"] = polyfit(px, py, 1).coeffs(1);
        opt["phase_slope_magnitude_expected"] = cfg.eta * cfg.tf_ms;
        opt["full_vs_rwa_max_relative"] = full_dev;
    }

    std::vector<double> ax;
    std::vector<double> ay;
    double a_sum = 0.0;
    // Inner three quarters of the sweep, away from the end-point ripple.
    const double f_start = c.p().number("adiabatic_f_start_hz") * 1e-3;
    const double f_end = c.p().number("adiabatic_f_end_hz") * 1e-3;
    const double a_lo = f_start + 0.125 * (f_end - f_start);
    const double a_hi = f_end - 0.125 * (f_end - f_start);
    for (const auto& r : adiabatic) {
        if (r.f_khz >= a_lo && r.f_khz <= a_hi) {
            ax.push_back(r.f_khz);
            ay.push_back(r.phi_rad_rwa);
            a_sum += r.r_mm_rwa;
        }
    }
    json adi = {{"e_max_v_per_m", c.p().number("adiabatic_e0_v_per_m")},
                {"stationary_radius_mm", adiabatic_radius_mm(ref)}};
    if (ax.size() > 3) {
        adi["band_khz"] = {a_lo, a_hi};
        adi["band_mean_mm"] = a_sum / static_cast<double>(ax.size());
        adi["phase_linear_residual"] = polyfit(ax, ay, 1).residual;
        adi["phase_quadratic_residual"] = polyfit(ax, ay, 2).residual;
    }
    c.result.summary["optimal"] = opt;
    c.result.summary["adiabatic"] = adi;
    c.result.summary["full_ions"] = full_hz.size();
    c.result.summary["dt_s"] = dt;
}

// ---- spins

void run_fig6(Context& c)
{
    const auto ns = int_list(c.p(), "n_list");
    const double tf = c.p().number("tf");
    const GFamily fam = g_family(c.p().text("g_family"));
    const auto omegas = linspace(c.p().number("omega_min"), c.p().number("omega_max"), c.p().integer("n_omega"));
    const auto steps = static_cast<std::size_t>(c.p().integer("steps"));
    const double threshold = c.p().number("threshold");

    std::vector<std::string> header{"omega"};
    std::vector<std::vector<FidelityPoint>> profiles;
    json per_n = json::object();
    for (int n : ns) {
        const std::vector<double> zeros(n, 0.0);
        SpinExperiment e{excitation_from_spring(design_sta(zeros, tf, fam).pulse)};
        e.steps = steps;
        profiles.push_back(fidelity_sweep(e, omegas, c.workers));
        header.push_back("J_" + n_label(n));
        json s = pulse_summary(e.pulse);
        s["fidelity_at_zero"] = fidelity(simulate_inversion(inversion_sequence(e.pulse), 0.0, steps));
        s["bandwidth"] = fidelity_bandwidth(profiles.back(), threshold);
        per_n[n_label(n)] = s;
    }
    CsvTable table(header);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        std::vector<double> row{omegas[i]};
        for (const auto& prof : profiles) row.push_back(prof[i].fidelity);
        table.add_row(row);
    }
    c.write("fig6_fidelity.csv", table);
    c.result.summary["designs"] = per_n;
    c.result.summary["threshold"] = threshold;
}

void run_fig7(Context& c)
{
    const double wa = c.p().number("omega_a");
    const double wb = c.p().number("omega_b");
    const double tf = c.p().number("tf");
    const auto steps = static_cast<std::size_t>(c.p().integer("steps"));
    const auto n_samples = static_cast<std::size_t>(c.p().integer("n_samples"));
    const Pulse p = selective_inversion_pulse(wa, wb, tf);
    const InversionSequence seq = inversion_sequence(p);

    const auto ta = bloch_trajectory(seq.field(), seq.duration(), wa, 2 * steps);
    const auto tb = bloch_trajectory(seq.field(), seq.duration(), wb, 2 * steps);
    const std::size_t stride = std::max<std::size_t>(1, (2 * steps) / std::max<std::size_t>(1, n_samples - 1));
    CsvTable z({"t", "z_a", "z_b"});
    for (std::size_t i = 0; i < ta.size(); i += stride) {
        const double v[] = {seq.duration() * static_cast<double>(i) / static_cast<double>(2 * steps), ta[i].z, tb[i].z};
        z.add_row(v);
    }
    CsvTable pulse({"t", "u"});
    for (double t : uniform_times(seq.duration(), n_samples)) {
        const double v[] = {t, seq(t)};
        pulse.add_row(v);
    }
    c.write("fig7_z.csv", z);
    c.write("fig7_pulse.csv", pulse);

    const double radius = spring_max_radius(p, wb, 2001);
    const double bound = c.p().number("parked_radius_bound");
    json s = pulse_summary(p);
    s["z_a_end"] = simulate_inversion(seq, wa, steps).z;
    s["z_b_end"] = simulate_inversion(seq, wb, steps).z;
    s["spring_a_residual"] = std::abs(propagate_exact(p, wa) - std::numbers::pi / 2);
    s["spring_b_residual"] = std::abs(propagate_exact(p, wb));
    s["parked_spring_max_radius"] = radius;
    s["parked_radius_bound"] = bound;
    s["parked_within_bound"] = radius < bound;
    c.result.summary["selective"] = s;
}

// ---- custom / design

void run_custom(Context& c)
{
    const std::string method = c.p().text("method");
    const double tf = c.p().number("tf");
    std::vector<double> omegas = c.p().list("omegas");
    if (omegas.empty() && method != "adiabatic") {
        omegas = FrequencyGrid::regular(c.p().number("band_lo"), c.p().number("band_hi"),
                                        static_cast<std::size_t>(c.p().integer("n")),
                                        grid_convention(c.p().text("grid")))
                     .omegas();
    }
    const cplx target(c.p().number("target_re"), c.p().number("target_im"));
    const std::vector<cplx> targets(omegas.size(), target);

    Pulse u = Pulse::zero(tf);
    json info = json::object();
    std::function<cplx(double)> reference = [&](double) { return target; };
    if (method == "adiabatic") {
        const ChirpParams cp{c.p().number("u0"), c.p().number("omega_i"), c.p().number("omega_f"), tf};
        u = chirp_pulse(cp);
        reference = [cp](double w) {
            const StationaryPhase sp = stationary_phase_prediction(cp, std::abs(w));
            if (!sp.in_band) return cplx(0.0);
            return w < 0.0 ? std::conj(sp.value()) : sp.value();
        };
        info["sweep_rate"] = cp.sweep_rate();
    } else if (method == "sta") {
        if (target.imag() != 0.0) throw ConfigError("sta reaches real targets only (target_im must be 0)");
        const StaDesign d = design_sta(omegas, tf, g_family(c.p().text("g_family")));
        u = d.pulse.scaled(target.real());
        info["g_coeffs"] = d.g_coeffs;
    } else if (method == "oct1") {
        const OctProblem prob{omegas, targets, tf, 0.0};
        const AdjointSolution s = solve_approach1(prob);
        u = pulse_approach1(s, omegas, tf);
        info["condition_estimate"] = s.condition_estimate;
        info["least_squares"] = s.least_squares;
        info["warning"] = s.warning;
    } else if (method == "oct2") {
        const OctProblem prob{omegas, targets, tf, c.p().number("lambda")};
        const Approach2Solution s = solve_approach2(prob);
        u = pulse_approach2(s, prob);
        const ConsistencyReport r = self_consistency_check(prob, u);
        info["condition_estimate"] = s.adjoint.condition_estimate;
        info["least_squares"] = s.adjoint.least_squares;
        info["warning"] = s.adjoint.warning;
        info["cost"] = r.cost;
        info["self_consistency_error"] = r.max_error;
    } else {
        throw ConfigError("method must be adiabatic, sta, oct1 or oct2, got '" + method + "'");
    }
    info.update(pulse_summary(u));
    if (!omegas.empty()) info["max_endpoint_residual"] = max_residual(u, omegas, targets);
    info["omegas"] = omegas;

    CsvTable pulse({"t", "u"});
    for (double t : uniform_times(tf, static_cast<std::size_t>(c.p().integer("n_samples")))) {
        const double v[] = {t, u(t)};
        pulse.add_row(v);
    }
    const auto sweep = linspace(c.p().number("omega_min"), c.p().number("omega_max"), c.p().integer("n_omega"));
    const auto z = endpoints(u, sweep, c.workers);
    CsvTable table({"omega", "distance", "abs_z", "arg_z"});
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const double v[] = {sweep[i], distance_to_target(z[i], reference(sweep[i])), std::abs(z[i]), std::arg(z[i])};
        table.add_row(v);
    }
    c.write(method + "_pulse.csv", pulse);
    c.write(method + "_sweep.csv", table);
    c.result.summary["method"] = method;
    c.result.summary["design"] = info;
}

using Runner = void (*)(Context&);

const std::map<std::string, Runner>& runners()
{
    static const std::map<std::string, Runner> table{
        {"fig1", run_fig1}, {"fig2", run_fig2},     {"fig3", run_fig3}, {"table1", run_table1},
        {"icr", run_icr},   {"fig6", run_fig6},     {"fig7", run_fig7}, {"custom", run_custom},
    };
    return table;
}

const std::map<std::string, std::string>& aliases()
{
    static const std::map<std::string, std::string> table{{"fig3-sta", "sta"}, {"fig3-oct", "oct"}};
    return table;
}

}  // namespace

std::vector<std::string> experiment_names()
{
    std::vector<std::string> out;
    for (const auto& [name, fn] : runners()) out.push_back(name);
    for (const auto& [name, method] : aliases()) out.push_back(name);
    std::sort(out.begin(), out.end());
    return out;
}

ExperimentManifest experiment_manifest(const std::string& name)
{
    if (const auto it = aliases().find(name); it != aliases().end()) {
        ExperimentManifest m = default_manifest("fig3");
        m.params.set("methods", it->second);
        m.output_dir = default_output_dir(name);
        return m;
    }
    if (!runners().contains(name)) {
        std::string msg = "unknown experiment '" + name + "'";
        const std::string near = closest_key(name, experiment_names());
        if (!near.empty()) msg += "; did you mean '" + near + "'?";
        throw ConfigError(msg);
    }
    return default_manifest(name);
}

ExperimentManifest design_manifest(const std::string& method)
{
    ExperimentManifest m = default_manifest("custom");
    m.params.set("method", method);
    const auto& doc = manifest_document("custom");
    if (doc.contains("method_defaults") && doc["method_defaults"].contains(method)) {
        for (const auto& [k, v] : doc["method_defaults"][method].items()) m.params.set(k, v);
    }
    m.output_dir = default_output_dir("design_" + method);
    return m;
}

RunResult run_experiment(const ExperimentManifest& manifest, std::size_t workers)
{
    const auto it = runners().find(manifest.name);
    if (it == runners().end()) throw ConfigError("unknown experiment '" + manifest.name + "'");
    std::filesystem::create_directories(manifest.output_dir);
    Context c{manifest, std::max<std::size_t>(workers, 1), {}};
    c.result.summary = {{"experiment", manifest.name}, {"params", manifest.params.values()}};
    it->second(c);
    const auto path = manifest.output_dir / (manifest.name + "_summary.json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << c.result.summary.dump(2) << '\n';
    if (!out) throw ConfigError("cannot write " + path.string());
    c.result.files.push_back(path);
    return c.result;
}

std::string describe_experiments()
{
    std::ostringstream os;
    for (const auto& name : manifest_names()) {
        const auto& doc = manifest_document(name);
        os << name << ": " << doc.value("description", "") << '\n';
        os << "  parameters:\n";
        for (const auto& [k, v] : doc.at("params").items()) os << "    " << k << " = " << v.dump() << '\n';
        if (doc.contains("method_defaults")) {
            for (const auto& [method, overrides] : doc["method_defaults"].items()) {
                os << "  defaults for method " << method << ": " << overrides.dump() << '\n';
            }
        }
        os << "  outputs:\n";
        for (const auto& [file, schema] : doc.at("outputs").items()) {
            os << "    " << file << ": " << schema.get<std::string>() << '\n';
        }
        os << "    " << name << "_summary.json\n";
    }
    for (const auto& [name, method] : aliases()) {
        os << name << ": fig3 restricted to methods = " << method << '\n';
    }
    return os.str();
}

}  // namespace springs
