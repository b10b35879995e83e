#include "cascadelab/quadrature.hpp"

#include <cmath>
#include <utility>

#include "cascadelab/errors.hpp"

namespace cascadelab {
namespace {

// 15-point Gauss-Legendre rule on [-1,1] (positive nodes; symmetric).
constexpr int kHalf = 8;
constexpr double kNode[kHalf] = {
    0.0,
    0.2011940939974345223006283,
    0.3941513470775633698972074,
    0.5709721726085388475372267,
    0.7244177313601700474161861,
    0.8482065834104272162006483,
    0.9372733924007059043077589,
    0.9879925180204854284895657,
};
constexpr double kWeight[kHalf] = {
    0.2025782419255612728806202,
    0.1984314853271115764561183,
    0.1861610000155622110268006,
    0.1662692058169939335532009,
    0.1395706779261543144478048,
    0.1071592204671719350118695,
    0.0703660474881081247092674,
    0.0307532419961172683546284,
};

double gl15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = kWeight[0] * f(c);
    for (int i = 1; i < kHalf; ++i) {
        const double d = h * kNode[i];
        s += kWeight[i] * (f(c - d) + f(c + d));
    }
    return s * h;
}

// Bisect until the panel's value is stable: |whole - (left+right)| <= local
// tolerance, apportioned by length so the total error stays <= abs_tol.
double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double tol, int depth, int& budget) {
    if (--budget < 0) throw QuadratureFailure("adaptive quadrature: panel budget exhausted");
    const double m = 0.5 * (a + b);
    const double left = gl15(f, a, m), right = gl15(f, m, b);
    const double delta = left + right - whole;
    if (std::abs(delta) <= tol || depth >= 60) return left + right + delta / 63.0;
    return adapt(f, a, m, left, 0.5 * tol, depth + 1, budget) +
           adapt(f, m, b, right, 0.5 * tol, depth + 1, budget);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt) {
    if (!(a <= b)) throw DomainError("integrate: empty or inverted interval");
    if (a == b) return 0.0;
    int budget = opt.max_panels;
    return adapt(f, a, b, gl15(f, a, b), opt.abs_tol, 0, budget);
}

double integrate_sqrt_left(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opt) {
    // x = a + t^2, dx = 2t dt, t in (0, sqrt(b-a)]
    const double tmax = std::sqrt(b - a);
    return integrate([&](double t) { return 2.0 * t * f(a + t * t); }, 0.0, tmax, opt);
}

double integrate_sqrt_right(const std::function<double(double)>& f, double a, double b,
                            const QuadratureOptions& opt) {
    // x = b - t^2
    const double tmax = std::sqrt(b - a);
    return integrate([&](double t) { return 2.0 * t * f(b - t * t); }, 0.0, tmax, opt);
}

}  // namespace cascadelab
