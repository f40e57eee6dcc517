#pragma once

#include <span>
#include <vector>

#include <springs/polynomial.h>
#include <springs/pulse.h>

namespace springs {

/// Ascending coefficients of prod_k (lambda^2 + omega_k^2): length 2N+1, odd entries 0.
std::vector<double> char_poly_coeffs(std::span<const double> omegas);

/// g(t) = s^{2N} (-T)^{2N-1} / (2N-1)! (1-s)^{2N-1}, s = t/T.
Polynomial g_polynomial_min(int n_springs, double duration);

/// Degree 4N+2 variant whose field also vanishes at both ends:
/// g(t) = s^{2N+2} (-T)^{2N-1} / (2N-1)! (1-s)^{2N-1} [1 + (2N+2)(1-s)].
Polynomial g_polynomial_zero_ends(int n_springs, double duration);

enum class GFamily { Minimal, ZeroEnds };

/// Largest violation of the boundary conditions g^{(k)}(0) = 0 (k < 2N),
/// g^{(k)}(T) = 0 (k < 2N-1), g^{(2N-1)}(T) = 1, each scaled by the
/// coefficient norm of g^{(k)}.
double boundary_violation(const Polynomial& g, int n_springs);

/// u = sum_k g_k g^{(k)} with g_k from char_poly_coeffs. Throws InvalidArgument
/// if g violates the boundary conditions by more than 1e-6.
Pulse sta_pulse(std::span<const double> omegas, const Polynomial& g);

struct StaDesign {
    std::vector<double> omegas;
    Polynomial g;
    std::vector<double> g_coeffs;
    double duration = 1.0;
    Pulse pulse = Pulse::zero(1.0);
};

StaDesign design_sta(std::span<const double> omegas, double duration, GFamily family);

/// d_omega = |prod_k (omega^2 - omega_k^2) G(T)|, G(T) = integral of exp(-i omega t) g.
double sta_distance_profile(const StaDesign& design, double omega);

}  // namespace springs
