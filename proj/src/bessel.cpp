#include "nodalab/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nodalab/errors.hpp"
#include "nodalab/geometry.hpp"

namespace nodalab {

std::vector<double> bessel_j_sequence(int nmax, double x) {
  if (nmax < 0 || !(x >= 0.0)) fail(ErrorKind::Input, "bessel_j needs m >= 0 and x >= 0");
  std::vector<double> out(nmax + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (x < 1.0) {
    const double q = 0.25 * x * x;
    double lead = 1.0;  // (x/2)^n / n!
    for (int n = 0; n <= nmax; ++n) {
      if (n > 0) lead *= 0.5 * x / n;
      double term = lead, sum = lead;
      for (int k = 0; k < 60 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
        term *= -q / ((k + 1.0) * (n + k + 1.0));
        sum += term;
      }
      out[n] = sum;
    }
    return out;
  }
  const double big = std::max<double>(nmax, x);
  int N = static_cast<int>(big) + 20 + static_cast<int>(std::sqrt(40.0 * big));
  if (N % 2) ++N;
  double bkp1 = 0.0, bk = 1e-30, sum = 2.0 * bk;
  std::vector<double> b(nmax + 1, 0.0);
  for (int k = N; k >= 1; --k) {
    const double bkm1 = (2.0 * k / x) * bk - bkp1;
    bkp1 = bk;
    bk = bkm1;
    const int idx = k - 1;
    if (idx <= nmax) b[idx] = bk;
    if (idx > 0 && idx % 2 == 0) sum += 2.0 * bk;
    if (std::abs(bk) > 1e250) {
      bk *= 1e-250;
      bkp1 *= 1e-250;
      sum *= 1e-250;
      for (double& v : b) v *= 1e-250;
    }
  }
  sum += b[0];
  for (int n = 0; n <= nmax; ++n) out[n] = b[n] / sum;
  return out;
}

double bessel_j(int m, double x) {
  if (m < 0) return (m % 2 ? -1.0 : 1.0) * bessel_j(-m, x);
  if (x < 0.0) return (m % 2 ? -1.0 : 1.0) * bessel_j(m, -x);
  return bessel_j_sequence(m, x)[m];
}

double bessel_jp(int m, double x) {
  if (m < 0) return (m % 2 ? -1.0 : 1.0) * bessel_jp(-m, x);
  const std::vector<double> j = bessel_j_sequence(m + 1, std::abs(x));
  double d = m == 0 ? -j[1] : 0.5 * (j[m - 1] - j[m + 1]);
  if (x < 0.0 && m % 2 == 0) d = -d;
  return d;
}

double mcmahon_j_zero(int m, int s) {
  const double beta = (s + 0.5 * m - 0.25) * kPi, mu = 4.0 * m * m;
  return beta - (mu - 1.0) / (8.0 * beta);
}

double mcmahon_jp_zero(int m, int s) {
  const double beta = (s + 0.5 * m - 0.75) * kPi, mu = 4.0 * m * m;
  return beta - (mu + 3.0) / (8.0 * beta);
}

namespace {

double nth_sign_change(const std::function<double(double)>& f, int s) {
  constexpr double step = 0.02;
  double a = 0.5 * step;
  double fa = f(a);
  int found = 0;
  for (int i = 1; i < 1000000; ++i) {
    const double b = a + step;
    const double fb = f(b);
    if ((fa < 0.0) != (fb < 0.0)) {
      if (++found == s) {
        double lo = a, hi = b;
        const bool lo_neg = fa < 0.0;
        while (hi - lo > 1e-15 * hi) {
          const double mid = 0.5 * (lo + hi);
          if ((f(mid) < 0.0) == lo_neg) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
      }
    }
    a = b;
    fa = fb;
  }
  fail(ErrorKind::Convergence, "bessel zero search did not terminate");
}

}  // namespace

double bessel_j_zero(int m, int s) {
  if (m < 0 || s < 1) fail(ErrorKind::Input, "bessel_j_zero needs m >= 0, s >= 1");
  return nth_sign_change([m](double x) { return bessel_j(m, x); }, s);
}

double bessel_jp_zero(int m, int s) {
  if (m < 0 || s < 1) fail(ErrorKind::Input, "bessel_jp_zero needs m >= 0, s >= 1");
  return nth_sign_change([m](double x) { return bessel_jp(m, x); }, s);
}

}  // namespace nodalab
