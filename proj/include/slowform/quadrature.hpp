#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature.

#include <functional>

#include "slowform/common.hpp"

namespace slowform {

namespace gk {

// K15 nodes/weights on [-1,1] (positive half; symmetric).
inline constexpr double nodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr double kronrod_w[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292,
};
// G7 weights aligned with nodes 1,3,5,7 of the half list above.
inline constexpr double gauss_w[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

inline Estimate k15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double f0 = f(c);
    double kron = kronrod_w[0] * f0;
    double gauss = gauss_w[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double x = h * nodes[i];
        const double fv = f(c - x) + f(c + x);
        kron += kronrod_w[i] * fv;
        if (i % 2 == 0)
            gauss += gauss_w[i / 2] * fv;
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

} // namespace gk

/// Adaptive bisection to an absolute tolerance.
inline double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        int max_depth = 48) {
    if (a == b)
        return 0.0;
    struct Seg {
        double a, b, tol;
        int depth;
    };
    std::vector<Seg> stack{{a, b, abs_tol, 0}};
    double total = 0.0;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        auto e = gk::k15(f, s.a, s.b);
        if (e.error <= s.tol || s.depth >= max_depth) {
            total += e.value;
            continue;
        }
        const double m = 0.5 * (s.a + s.b);
        stack.push_back({s.a, m, 0.5 * s.tol, s.depth + 1});
        stack.push_back({m, s.b, 0.5 * s.tol, s.depth + 1});
    }
    return total;
}

/// Single non-adaptive K15 panel (smooth integrands on short intervals).
inline double integrate_panel(const std::function<double(double)>& f, double a, double b) {
    return gk::k15(f, a, b).value;
}

} // namespace slowform
