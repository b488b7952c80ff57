#pragma once

#include <complex>
#include <functional>

namespace pmgate {

// Adaptive Gauss-Kronrod (G7/K15) for complex integrands on [a, b].
// Recursion splits until the embedded error estimate drops below tol_abs.
std::complex<double> complex_integral(const std::function<std::complex<double>(double)>& f,
                                      double a, double b, double tol_abs);

// Joint quantities of an oscillatory path integrand u on [a, b]:
//   integral  I = int_a^b u(t) dt
//   triangle  T = Im int_a^b conj(int_a^t u ds) u(t) dt
// T is the swept-area contribution of the interval relative to its own
// starting point; intervals combine via
//   (I, T)_[a,b] = (I1 + I2, T1 + T2 + Im(conj(I1) I2)).
struct PathIntegrals {
    std::complex<double> integral{0.0, 0.0};
    double triangle = 0.0;
};

PathIntegrals path_integrals(const std::function<std::complex<double>(double)>& u,
                             double a, double b, double tol_abs);

} // namespace pmgate
