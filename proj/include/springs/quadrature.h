#pragma once

#include <cstddef>
#include <vector>

namespace springs {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
const GaussRule& gauss_legendre(int n);

/// Composite n-point Gauss-Legendre over `panels` equal panels of [a, b].
template <class F>
auto composite_gauss(F&& f, double a, double b, std::size_t panels, int n = 8)
{
    const GaussRule& rule = gauss_legendre(n);
    const double h = (b - a) / static_cast<double>(panels);
    decltype(f(a)) acc{};
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        decltype(f(a)) panel{};
        for (int i = 0; i < n; ++i) {
            panel += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        }
        acc += 0.5 * h * panel;
    }
    return acc;
}

}  // namespace springs
