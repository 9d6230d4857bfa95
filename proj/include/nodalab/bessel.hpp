#pragma once

#include <vector>

namespace nodalab {

/// J_0(x) .. J_nmax(x) for x >= 0 by Miller's downward recurrence
/// (power series for small x).
std::vector<double> bessel_j_sequence(int nmax, double x);

double bessel_j(int m, double x);
/// J_m'(x) = (J_{m-1}(x) - J_{m+1}(x)) / 2, J_0' = -J_1.
double bessel_jp(int m, double x);

/// s-th positive zero of J_m.
double bessel_j_zero(int m, int s);
/// s-th positive zero of J_m' (x = 0 is not counted).
double bessel_jp_zero(int m, int s);

/// McMahon asymptotic estimates, used as sanity windows.
double mcmahon_j_zero(int m, int s);
double mcmahon_jp_zero(int m, int s);

}  // namespace nodalab
