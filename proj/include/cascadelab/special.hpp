#pragma once

namespace cascadelab {

// ln Beta(a,b) for a,b > 0.
double lbeta(double a, double b);

// Digamma (logarithmic derivative of Gamma) for x > 0.
// Recurrence shift to x >= 8, then the standard asymptotic series.
double digamma(double x);

}  // namespace cascadelab
