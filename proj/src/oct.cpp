#include <springs/oct.h>

#include <cmath>
#include <functional>
#include <limits>

#include <springs/ensemble.h>
#include <springs/errors.h>

namespace springs {

using namespace std::complex_literals;

void OctProblem::validate(bool needs_lambda) const
{
    if (omegas.empty()) {
        throw InvalidArgument("OCT problem needs at least one frequency");
    }
    if (omegas.size() != targets.size()) {
        throw InvalidArgument("OCT problem: frequency and target counts differ");
    }
    if (!(duration > 0.0)) {
        throw InvalidArgument("OCT problem: duration must be positive");
    }
    if (needs_lambda && !(lambda > 0.0)) {
        throw InvalidArgument("invalid penalty: lambda must be positive");
    }
}

namespace {

KernelPair kernels(const std::vector<double>& w, double T, bool approach1)
{
    const auto n = static_cast<Eigen::Index>(w.size());
    KernelPair out{Eigen::MatrixXcd(n, n), Eigen::MatrixXcd(n, n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double sum = 0.5 * (w[j] + w[k]) * T;
            const double diff = 0.5 * (w[j] - w[k]) * T;
            if (approach1) {
                out.first(j, k) = std::exp(1i * sum) * sinc(diff);
                out.second(j, k) = std::exp(1i * diff) * sinc(sum);
            } else {
                out.first(j, k) = std::exp(1i * diff) * sinc(diff);
                out.second(j, k) = std::exp(1i * sum) * sinc(sum);
            }
        }
    }
    return out;
}

// Solves the real-linear system L(x) = rhs for complex x by stacking real and
// imaginary parts. Unknown 2k+part is Re/Im x_k; rows are (Re rows, Im rows).
// Unknowns in `drop_unknown` and rows in `drop_row` are removed beforehand.
AdjointSolution solve_stacked(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& op,
                              const Eigen::VectorXcd& rhs, const std::vector<bool>& drop_unknown,
                              const std::vector<bool>& drop_row)
{
    const auto n = rhs.size();
    std::vector<Eigen::Index> cols;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        if (!drop_unknown[i]) cols.push_back(i);
        if (!drop_row[i]) rows.push_back(i);
    }
    Eigen::MatrixXd full(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (int part = 0; part < 2; ++part) {
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
            e(k) = part == 0 ? 1.0 : 1i;
            const Eigen::VectorXcd col = op(e);
            full.col(2 * k + part) << col.real(), col.imag();
        }
    }
    Eigen::VectorXd b_full(2 * n);
    b_full << rhs.real(), rhs.imag();

    const auto nr = static_cast<Eigen::Index>(rows.size());
    const auto nc = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd M(nr, nc);
    Eigen::VectorXd b(nr);
    for (Eigen::Index r = 0; r < nr; ++r) {
        b(r) = b_full(rows[r]);
        for (Eigen::Index c = 0; c < nc; ++c) {
            M(r, c) = full(rows[r], cols[c]);
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    AdjointSolution sol;
    sol.condition_estimate = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    if (sol.condition_estimate > kSingular) {
        throw NearSingularError(sol.condition_estimate, "OCT linear system is singular");
    }
    Eigen::VectorXd x;
    if (sol.condition_estimate > kIllConditioned) {
        svd.setThreshold(1.0 / kIllConditioned);
        x = svd.solve(b);
        sol.least_squares = true;
        sol.warning = "ill-conditioned system (condition " + std::to_string(sol.condition_estimate) +
                      "); minimum-norm least-squares solution, endpoints are not reached exactly";
    } else {
        x = M.partialPivLu().solve(b);
    }
    const double bn = b.norm();
    sol.residual = bn > 0.0 ? (M * x - b).norm() / bn : (M * x).norm();

    Eigen::VectorXd x_full = Eigen::VectorXd::Zero(2 * n);
    for (Eigen::Index c = 0; c < nc; ++c) {
        x_full(cols[c]) = x(c);
    }
    sol.p.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        sol.p[k] = {x_full(2 * k), x_full(2 * k + 1)};
    }
    return sol;
}

Eigen::VectorXcd to_vector(const std::vector<std::complex<double>>& v)
{
    return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

KernelPair kernel_matrices_I(const std::vector<double>& omegas, double duration)
{
    return kernels(omegas, duration, true);
}

KernelPair kernel_matrices_II(const std::vector<double>& omegas, double duration)
{
    return kernels(omegas, duration, false);
}

AdjointSolution solve_approach1(const OctProblem& problem)
{
    problem.validate(false);
    const auto n = problem.omegas.size();
    const double T = problem.duration;
    const KernelPair k = kernel_matrices_I(problem.omegas, T);
    auto op = [&](const Eigen::VectorXcd& p) -> Eigen::VectorXcd {
        return k.first * p + k.second * p.conjugate();
    };
    // At omega = 0 the field never sees Im p and the spring never leaves the real axis.
    std::vector<bool> drop_unknown(2 * n, false);
    std::vector<bool> drop_row(2 * n, false);
    for (std::size_t j = 0; j < n; ++j) {
        if (problem.omegas[j] == 0.0) {
            if (problem.targets[j].imag() != 0.0) {
                throw InvalidArgument("target at omega = 0 must be real");
            }
            drop_unknown[2 * j + 1] = true;
            drop_row[n + j] = true;
        }
    }
    const Eigen::VectorXcd rhs = (2.0 / T) * to_vector(problem.targets);
    return solve_stacked(op, rhs, drop_unknown, drop_row);
}

Pulse pulse_approach1(const AdjointSolution& sol, const std::vector<double>& omegas, double duration)
{
    return Pulse::exp_sum(sol.p, omegas, duration);
}

Approach2Solution solve_approach2(const OctProblem& problem)
{
    problem.validate(true);
    const auto n = problem.omegas.size();
    const double T = problem.duration;
    const KernelPair k = kernel_matrices_II(problem.omegas, T);
    const double diag = 2.0 * problem.lambda / T;
    auto op = [&](const Eigen::VectorXcd& z) -> Eigen::VectorXcd {
        return diag * z + k.first * z + k.second * z.conjugate();
    };
    const Eigen::VectorXcd zf = to_vector(problem.targets);
    const Eigen::VectorXcd rhs = k.first * zf + k.second * zf.conjugate();
    AdjointSolution s = solve_stacked(op, rhs, std::vector<bool>(2 * n, false),
                                      std::vector<bool>(2 * n, false));
    Approach2Solution out;
    out.z_final = s.p;
    for (std::size_t j = 0; j < n; ++j) {
        s.p[j] = problem.targets[j] - out.z_final[j];
    }
    out.adjoint = std::move(s);
    return out;
}

Pulse pulse_approach2(const Approach2Solution& sol, const OctProblem& problem)
{
    const double T = problem.duration;
    std::vector<std::complex<double>> c(problem.omegas.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = sol.adjoint.p[k] * std::exp(-1i * (problem.omegas[k] * T)) / problem.lambda;
    }
    return Pulse::exp_sum(std::move(c), problem.omegas, T);
}

ConsistencyReport self_consistency_check(const OctProblem& problem, const Pulse& pulse)
{
    ConsistencyReport r;
    r.endpoints = propagate_exact(pulse, problem.omegas);
    double sq = 0.0;
    for (std::size_t k = 0; k < r.endpoints.size(); ++k) {
        const double e = distance_to_target(r.endpoints[k], problem.targets[k]);
        r.endpoint_errors.push_back(e);
        r.max_error = std::max(r.max_error, e);
        sq += e * e;
    }
    r.energy = pulse_energy(pulse);
    r.max_amplitude = pulse_max_amplitude(pulse);
    r.cost = 0.5 * sq + 0.5 * problem.lambda * r.energy;
    return r;
}

}  // namespace springs
