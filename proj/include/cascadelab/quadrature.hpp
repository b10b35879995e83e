#pragma once

#include <functional>

namespace cascadelab {

// Adaptive Gauss-Legendre integration on [a,b]: 15-point rule per panel,
// panels bisected until the local estimate stabilizes, absolute tolerance
// apportioned by panel length. Throws QuadratureFailure when the panel budget
// is exhausted before the tolerance is met.
struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_panels = 200000;
};

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = {});

// Same, after the change of variable x = a + t^2 (singularity or steep decay
// at the left endpoint a). Integrates f over (a, b].
double integrate_sqrt_left(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opt = {});

// Change of variable x = b - t^2 (right endpoint b).
double integrate_sqrt_right(const std::function<double(double)>& f, double a, double b,
                            const QuadratureOptions& opt = {});

}  // namespace cascadelab
