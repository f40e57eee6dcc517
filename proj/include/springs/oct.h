#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <springs/pulse.h>

namespace springs {

struct OctProblem {
    std::vector<double> omegas;
    std::vector<std::complex<double>> targets;
    double duration = 1.0;
    double lambda = 0.0;  // energy weight, Approach II only

    void validate(bool needs_lambda) const;
};

/// Condition estimates above this switch to a minimum-norm least-squares solve.
inline constexpr double kIllConditioned = 1e10;
/// Condition estimates above this are rejected as singular.
inline constexpr double kSingular = 1e14;

struct AdjointSolution {
    std::vector<std::complex<double>> p;
    double residual = 0.0;            // |M x - rhs| / |rhs| of the stacked real system
    double condition_estimate = 1.0;
    bool least_squares = false;       // ill-conditioned: minimum-norm solve used
    std::string warning;
};

struct KernelPair {
    Eigen::MatrixXcd first;
    Eigen::MatrixXcd second;
};

/// A_jk = e^{i(w_j+w_k)T/2} sinc((w_j-w_k)T/2), B_jk = e^{i(w_j-w_k)T/2} sinc((w_j+w_k)T/2).
KernelPair kernel_matrices_I(const std::vector<double>& omegas, double duration);

/// C_jk = e^{i(w_j-w_k)T/2} sinc((w_j-w_k)T/2), D_jk = e^{i(w_j+w_k)T/2} sinc((w_j+w_k)T/2).
KernelPair kernel_matrices_II(const std::vector<double>& omegas, double duration);

/// Exact endpoints at minimum energy: (2/T) z_j = sum_k A_jk p_k + B_jk conj(p_k).
AdjointSolution solve_approach1(const OctProblem& problem);

/// u(t) = sum_k Re[p_k e^{i w_k t}]
Pulse pulse_approach1(const AdjointSolution& sol, const std::vector<double>& omegas, double duration);

struct Approach2Solution {
    std::vector<std::complex<double>> z_final;
    AdjointSolution adjoint;  // p_k(t_f) = z_kf - z_k(t_f)
};

/// Penalized endpoints: (2 lambda/T) z + C z + D conj(z) = C z_f + D conj(z_f).
Approach2Solution solve_approach2(const OctProblem& problem);

/// u(t) = (1/lambda) sum_k Re[p_k(t_f) e^{i w_k (t - t_f)}]
Pulse pulse_approach2(const Approach2Solution& sol, const OctProblem& problem);

struct ConsistencyReport {
    std::vector<std::complex<double>> endpoints;
    std::vector<double> endpoint_errors;
    double max_error = 0.0;
    double cost = 0.0;       // sum 1/2 |z - z_f|^2 + lambda/2 * energy
    double energy = 0.0;     // integral of u^2
    double max_amplitude = 0.0;
};

ConsistencyReport self_consistency_check(const OctProblem& problem, const Pulse& pulse);

}  // namespace springs
