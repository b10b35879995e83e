#include "cascadelab/special.hpp"

#include <cmath>

namespace cascadelab {

double lbeta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double digamma(double x) {
    // psi(x) = psi(x+1) - 1/x until x >= 8, then the asymptotic expansion
    // psi(x) ~ ln x - 1/(2x) - sum B_{2k}/(2k x^{2k}).
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    double psi = std::log(x) - 0.5 * inv;
    psi -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return acc + psi;
}

}  // namespace cascadelab
