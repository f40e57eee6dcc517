#include <springs/linear_sta.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include <springs/errors.h>
#include <springs/quadrature.h>

namespace springs {

LinearSystem::LinearSystem(Eigen::MatrixXd a, Eigen::MatrixXd b) : A(std::move(a)), B(std::move(b))
{
    if (A.rows() != A.cols() || A.rows() == 0) {
        throw InvalidArgument("A must be square and non-empty");
    }
    if (B.rows() != A.rows() || B.cols() == 0) {
        throw InvalidArgument("B must have as many rows as A and at least one column");
    }
    if (!A.allFinite() || !B.allFinite()) {
        throw InvalidArgument("system matrices must be finite");
    }
}

LinearSystem LinearSystem::spring_ensemble(std::span<const double> omegas)
{
    const auto n = static_cast<Eigen::Index>(2 * omegas.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, 1);
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(2 * k);
        A(i, i + 1) = -omegas[k];
        A(i + 1, i) = omegas[k];
        B(i, 0) = 1.0;
    }
    return LinearSystem(std::move(A), std::move(B));
}

Controllability kalman_controllability(const LinearSystem& sys)
{
    const int n = sys.n();
    const int m = sys.m();
    Controllability out;
    out.matrix.resize(n, n * m);
    Eigen::MatrixXd block = sys.B;
    for (int k = 0; k < n; ++k) {
        out.matrix.middleCols(k * m, m) = block;
        block = sys.A * block;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.matrix);
    out.singular_values = svd.singularValues();
    const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
    const double tol = std::max(n, n * m) * std::numeric_limits<double>::epsilon() * smax;
    out.rank = static_cast<int>((out.singular_values.array() > tol).count());
    return out;
}

std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& A)
{
    const auto n = A.rows();
    if (n == 0 || A.cols() != n) {
        throw InvalidArgument("characteristic_polynomial needs a square matrix");
    }
    // La Budde recurrence on the upper Hessenberg form.
    const Eigen::MatrixXd H = Eigen::HessenbergDecomposition<Eigen::MatrixXd>(A).matrixH();
    std::vector<std::vector<double>> p(n + 1);
    p[0] = {1.0};
    for (Eigen::Index i = 1; i <= n; ++i) {
        std::vector<double> cur(i + 1, 0.0);
        const auto& prev = p[i - 1];
        for (std::size_t j = 0; j < prev.size(); ++j) {
            cur[j + 1] += prev[j];
            cur[j] -= H(i - 1, i - 1) * prev[j];
        }
        double beta = 1.0;
        for (Eigen::Index m = 1; m < i; ++m) {
            beta *= H(i - m, i - m - 1);
            const double f = H(i - m - 1, i - 1) * beta;
            for (std::size_t j = 0; j < p[i - m - 1].size(); ++j) {
                cur[j] -= f * p[i - m - 1][j];
            }
        }
        p[i] = std::move(cur);
    }
    return p[n];
}

std::vector<Eigen::VectorXd> solve_bk(const LinearSystem& sys, const Eigen::VectorXd& x_f)
{
    const int n = sys.n();
    const int m = sys.m();
    if (x_f.size() != n) {
        throw InvalidArgument("target dimension does not match the system");
    }
    const Controllability c = kalman_controllability(sys);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = c.singular_values.size() ? c.singular_values(0) : 0.0;
    svd.setThreshold(std::max(n, n * m) * std::numeric_limits<double>::epsilon() *
                     (smax > 0.0 ? 1.0 : 0.0));
    const Eigen::VectorXd stacked = svd.solve(x_f);
    const double norm = x_f.norm();
    const double residual = (c.matrix * stacked - x_f).norm();
    if (residual > 1e-9 * norm) {
        throw UnreachableTargetError(c.rank, norm > 0.0 ? residual / norm : residual,
                                     "target outside the reachable subspace");
    }
    std::vector<Eigen::VectorXd> b(n);
    for (int k = 0; k < n; ++k) {
        b[k] = stacked.segment(k * m, m);
    }
    return b;
}

std::vector<Eigen::VectorXd> boundary_conditions_from_bk(const std::vector<Eigen::VectorXd>& b,
                                                         std::span<const double> p)
{
    const std::size_t n = b.size();
    if (p.size() != n + 1) {
        throw InvalidArgument("characteristic polynomial must have n + 1 coefficients");
    }
    std::vector<Eigen::VectorXd> g(n);
    for (std::size_t r = 0; r < n; ++r) {
        Eigen::VectorXd v = b[n - 1 - r];
        for (std::size_t i = 0; i < r; ++i) {
            v -= p[n - r + i] * g[i];
        }
        g[r] = v / p[n];
    }
    return g;
}

Polynomial hermite_interpolate(std::span<const double> right, double duration)
{
    const int n = static_cast<int>(right.size());
    if (n < 1) {
        throw InvalidArgument("hermite_interpolate needs at least one condition");
    }
    // g = s^n q(s), q = degree n-1 Taylor polynomial of h = g s^{-n} at s = 1.
    std::vector<double> G(n);  // d^k g / ds^k at s = 1
    double tk = 1.0;
    for (int k = 0; k < n; ++k) {
        G[k] = right[k] * tk;
        tk *= duration;
    }
    // d^i s^{-n} / ds^i at 1 = (-1)^i n (n+1) ... (n+i-1)
    std::vector<double> inv(n, 1.0);
    for (int i = 1; i < n; ++i) {
        inv[i] = -inv[i - 1] * (n + i - 1);
    }
    Polynomial q = Polynomial::zero(duration);
    double fact = 1.0;
    for (int l = 0; l < n; ++l) {
        if (l > 0) fact *= l;
        double h = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= l; ++j) {
            h += binom * G[j] * inv[l - j];
            binom = binom * (l - j) / (j + 1);
        }
        if (h != 0.0) {
            // (s - 1)^l = (-1)^l (1 - s)^l
            q += Polynomial::power_product(0, l, (l % 2 ? -h : h) / fact, duration);
        }
    }
    return Polynomial::power_product(n, 0, 1.0, duration) * q;
}

GeneralStaDesign general_sta(const LinearSystem& sys, const Eigen::VectorXd& x_f, double duration)
{
    if (!(duration > 0.0)) {
        throw InvalidArgument("duration must be positive");
    }
    const int n = sys.n();
    const int m = sys.m();
    const Controllability c = kalman_controllability(sys);
    std::vector<Eigen::VectorXd> b;
    try {
        b = solve_bk(sys, x_f);
    } catch (const UnreachableTargetError&) {
        if (c.rank < n) {
            throw NotControllableError(c.rank, n, "system not controllable and target unreachable");
        }
        throw;
    }
    GeneralStaDesign d{sys, x_f, b, {}, characteristic_polynomial(sys.A), {}, {}, c.rank, duration};
    d.boundary = boundary_conditions_from_bk(b, d.char_poly);
    for (int j = 0; j < m; ++j) {
        std::vector<double> right(n);
        for (int r = 0; r < n; ++r) {
            right[r] = d.boundary[r](j);
        }
        d.g.push_back(hermite_interpolate(right, duration));
        d.controls.push_back(Pulse::poly_deriv(d.g.back(), d.char_poly));
    }
    return d;
}

Eigen::VectorXd propagate_linear_system(const LinearSystem& sys, const std::vector<Pulse>& controls)
{
    if (static_cast<int>(controls.size()) != sys.m()) {
        throw InvalidArgument("one control per input channel required");
    }
    const double T = controls.front().duration();
    const GaussRule& rule = gauss_legendre(8);

    auto integrate = [&](int panels) {
        const double h = T / panels;
        const Eigen::MatrixXd step = (sys.A * h).exp();
        std::vector<Eigen::MatrixXd> node_prop(rule.nodes.size());
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double back = 0.5 * h * (1.0 - rule.nodes[i]);  // panel end minus node
            node_prop[i] = (sys.A * back).exp() * sys.B;
        }
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(sys.n());
        Eigen::VectorXd u(sys.m());
        for (int p = 0; p < panels; ++p) {
            Eigen::VectorXd s = Eigen::VectorXd::Zero(sys.n());
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double tau = h * (p + 0.5 + 0.5 * rule.nodes[i]);
                for (int j = 0; j < sys.m(); ++j) {
                    u(j) = controls[j](tau);
                }
                s += rule.weights[i] * (node_prop[i] * u);
            }
            acc = step * acc + 0.5 * h * s;
        }
        return acc;
    };

    int panels = 64;
    Eigen::VectorXd prev = integrate(panels);
    for (int iter = 0; iter < 10; ++iter) {
        panels *= 2;
        Eigen::VectorXd cur = integrate(panels);
        if ((cur - prev).norm() <= 1e-13 * std::max(1.0, cur.norm())) {
            return cur;
        }
        prev = std::move(cur);
    }
    return prev;
}

}  // namespace springs
