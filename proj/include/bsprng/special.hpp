#pragma once

#include <bsprng/error.hpp>

#include <cmath>
#include <limits>
#include <string>

// Special functions behind the p-values: regularised incomplete gamma
// functions (series / continued fraction, after Cephes) and the normal CDF.
namespace bsprng::special {

namespace detail {

inline constexpr double machep = 1.11022302462515654042e-16;
inline constexpr double big = 4.503599627370496e15;
inline constexpr double biginv = 2.22044604925031308085e-16;

inline double
gamma_prefactor(double a, double x)
{
  // x^a e^-x / Gamma(a), in log space
  return std::exp(a * std::log(x) - x - std::lgamma(a));
}

} // namespace detail

double igamc(double a, double x);

// Lower regularised incomplete gamma P(a, x).
inline double
igam(double a, double x)
{
  if (!(a > 0) || x < 0) throw RangeError("igam: need a > 0 and x >= 0");
  if (x == 0) return 0.0;
  if (x > 1.0 && x > a) return 1.0 - igamc(a, x);

  const double ax = detail::gamma_prefactor(a, x);
  if (ax == 0) return 0.0;
  double r = a, c = 1.0, ans = 1.0;
  do {
    r += 1.0;
    c *= x / r;
    ans += c;
  } while (c / ans > detail::machep);
  return ans * ax / a;
}

// Upper regularised incomplete gamma Q(a, x) = 1 - P(a, x).
inline double
igamc(double a, double x)
{
  if (!(a > 0) || x < 0) throw RangeError("igamc: need a > 0 and x >= 0");
  if (x == 0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < 1.0 || x < a) return 1.0 - igam(a, x);

  const double ax = detail::gamma_prefactor(a, x);
  if (ax == 0) return 0.0;

  double y = 1.0 - a;
  double z = x + y + 1.0;
  double c = 0.0;
  double pkm2 = 1.0, qkm2 = x, pkm1 = x + 1.0, qkm1 = z * x;
  double ans = pkm1 / qkm1, t;
  do {
    c += 1.0;
    y += 1.0;
    z += 2.0;
    const double yc = y * c;
    const double pk = pkm1 * z - pkm2 * yc;
    const double qk = qkm1 * z - qkm2 * yc;
    if (qk != 0) {
      const double r = pk / qk;
      t = std::fabs((ans - r) / r);
      ans = r;
    } else {
      t = 1.0;
    }
    pkm2 = pkm1;
    pkm1 = pk;
    qkm2 = qkm1;
    qkm1 = qk;
    if (std::fabs(pk) > detail::big) {
      pkm2 *= detail::biginv;
      pkm1 *= detail::biginv;
      qkm2 *= detail::biginv;
      qkm1 *= detail::biginv;
    }
  } while (t > detail::machep);
  return ans * ax;
}

inline double
erfc(double x) noexcept
{
  return std::erfc(x);
}

// Standard normal CDF.
inline double
normal_cdf(double x) noexcept
{
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

} // namespace bsprng::special
