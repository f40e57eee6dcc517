#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include <springs/polynomial.h>
#include <springs/pulse.h>

namespace springs {

/// dx/dt = A x + B u
struct LinearSystem {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;

    LinearSystem(Eigen::MatrixXd a, Eigen::MatrixXd b);

    /// Springs stacked as (x_1, y_1, x_2, y_2, ...), one shared control.
    static LinearSystem spring_ensemble(std::span<const double> omegas);

    int n() const { return static_cast<int>(A.rows()); }
    int m() const { return static_cast<int>(B.cols()); }
};

struct Controllability {
    Eigen::MatrixXd matrix;  // [B, AB, ..., A^{n-1} B]
    int rank = 0;
    Eigen::VectorXd singular_values;
};

Controllability kalman_controllability(const LinearSystem& sys);

/// Ascending coefficients p_0..p_n of det(lambda I - A), p_n = 1.
std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& A);

/// Minimum-norm b_0..b_{n-1} (each of size m) with sum_k A^k B b_k = x_f.
/// Throws UnreachableTargetError if the residual exceeds 1e-9 |x_f|.
std::vector<Eigen::VectorXd> solve_bk(const LinearSystem& sys, const Eigen::VectorXd& x_f);

/// g^{(r)}(t_f), r = 0..n-1, from b_{n-1-r} = sum_{i<=r} p_{n-r+i} g^{(i)}(t_f).
std::vector<Eigen::VectorXd> boundary_conditions_from_bk(const std::vector<Eigen::VectorXd>& b,
                                                         std::span<const double> p);

/// Degree 2n-1 polynomial with g^{(k)}(0) = 0 and g^{(k)}(T) = right[k], k < n.
Polynomial hermite_interpolate(std::span<const double> right, double duration);

struct GeneralStaDesign {
    LinearSystem system;
    Eigen::VectorXd x_f;
    std::vector<Eigen::VectorXd> b;
    std::vector<Eigen::VectorXd> boundary;  // g^{(r)}(t_f), r = 0..n-1
    std::vector<double> char_poly;
    std::vector<Polynomial> g;              // one per control channel
    std::vector<Pulse> controls;            // u_j = sum_k p_k g_j^{(k)}
    int rank = 0;
    double duration = 1.0;
};

/// Flat-output synthesis steering x(0) = 0 to x_f. A rank-deficient system is
/// accepted when x_f lies in the reachable subspace; otherwise
/// NotControllableError is thrown.
GeneralStaDesign general_sta(const LinearSystem& sys, const Eigen::VectorXd& x_f, double duration);

/// x(T) = integral over [0, T] of exp(A (T - tau)) B u(tau), x(0) = 0.
Eigen::VectorXd propagate_linear_system(const LinearSystem& sys, const std::vector<Pulse>& controls);

}  // namespace springs
