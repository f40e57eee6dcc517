#pragma once

#include <complex>
#include <string_view>
#include <variant>
#include <vector>

#include <springs/polynomial.h>

namespace springs {

/// u(t) = u0 cos(omega_i t + s t^2 / 2)
struct ChirpPulse {
    double u0 = 1.0;
    double omega_i = 0.0;
    double sweep_rate = 0.0;
    double duration = 1.0;
};

/// u(t) = sum_k Re[c_k exp(i omega_k t)]
struct ExpSumPulse {
    std::vector<std::complex<double>> coeffs;
    std::vector<double> omegas;
    double duration = 1.0;
};

/// u(t) = sum_k w_k g^{(k)}(t). The summed polynomial is cached in `field`.
struct PolyDerivPulse {
    Polynomial g;
    std::vector<double> weights;
    Polynomial field;
};

/// Uniform samples on [0, T] including both ends, linearly interpolated.
struct SampledPulse {
    std::vector<double> values;
    double duration = 1.0;
};

/// Control field on [0, T]; zero outside.
class Pulse {
public:
    using Variant = std::variant<ChirpPulse, ExpSumPulse, PolyDerivPulse, SampledPulse>;

    static Pulse chirp(double u0, double omega_i, double sweep_rate, double duration);
    static Pulse exp_sum(std::vector<std::complex<double>> coeffs, std::vector<double> omegas,
                         double duration);
    static Pulse poly_deriv(Polynomial g, std::vector<double> weights);
    static Pulse sampled(std::vector<double> values, double duration);
    static Pulse zero(double duration);
    static Pulse constant(double value, double duration);

    double duration() const;
    double operator()(double t) const;
    std::vector<double> evaluate(const std::vector<double>& times) const;

    /// Same shape with amplitude multiplied by `factor`.
    Pulse scaled(double factor) const;

    /// Rough bound on the angular frequency content, for step sizing.
    double bandwidth() const;

    std::string_view kind() const;
    const Variant& variant() const { return v_; }

    template <class T>
    const T* as() const { return std::get_if<T>(&v_); }

private:
    explicit Pulse(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

}  // namespace springs
