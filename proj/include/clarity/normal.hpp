#pragma once

#include <cmath>

#include "clarity/errors.hpp"

// Standard normal density / CDF / quantile plus the stable kernels
// (cosh(xy)-1)e^{-x^2/2} and (e^{xy}-xy-1)e^{-x^2/2} that the two-groups
// decompositions are built from.  Everything here is pure and full double
// precision; the CDF goes through erfc so the tails stay accurate at |y|~6.

namespace clarity {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
inline constexpr double kSqrt2 = 1.4142135623730950488016887;

inline double norm_pdf(double y) { return kInvSqrt2Pi * std::exp(-0.5 * y * y); }

inline double norm_cdf(double y) { return 0.5 * std::erfc(-y / kSqrt2); }

/// Upper-tail (1-p) quantile helper: returns z with Phi(z) = p.
/// Acklam's rational approximation polished by one Halley step.
inline double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("norm_quantile: p must be in (0,1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement against erfc-based CDF.
    double e = norm_cdf(x) - p;
    double u = e / norm_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

/// cosh(t) - 1, accurate for small t.
inline double coshm1(double t) {
    double a = std::fabs(t);
    if (a < 1e-4) {
        double t2 = t * t;
        return 0.5 * t2 * (1.0 + t2 / 12.0 * (1.0 + t2 / 30.0));
    }
    double s = std::sinh(0.5 * t);
    return 2.0 * s * s;
}

/// e^t - t - 1, accurate for small t.
inline double expm1m(double t) {
    if (std::fabs(t) < 1e-4) {
        double t2 = t * t;
        return 0.5 * t2 * (1.0 + t / 3.0 * (1.0 + t / 4.0 * (1.0 + t / 5.0)));
    }
    return std::expm1(t) - t;
}

/// 1 - e^{-x^2/2}, the activity probability given the signal value.
inline double activity_prob_given_x(double x) { return -std::expm1(-0.5 * x * x); }

/// (cosh(xy) - 1) e^{-x^2/2}.  Combined exponents keep this finite even when
/// cosh(xy) alone would overflow: xy - x^2/2 <= y^2/2.
inline double coshm1_gauss(double x, double y) {
    double a = x * y;
    double g = -0.5 * x * x;
    if (std::fabs(a) < 60.0) return coshm1(a) * std::exp(g);
    double aa = std::fabs(a);
    // cosh(a)-1 = e^{|a|}(1+e^{-2|a|})/2 - 1
    return 0.5 * std::exp(aa + g) * (1.0 + std::exp(-2.0 * aa)) - std::exp(g);
}

/// (e^{xy} - xy - 1) e^{-x^2/2}, same overflow discipline.
inline double expm1m_gauss(double x, double y) {
    double a = x * y;
    double g = -0.5 * x * x;
    if (a < 60.0) return expm1m(a) * std::exp(g);
    return std::exp(a + g) - (a + 1.0) * std::exp(g);
}

/// e^{xy - x^2/2}; the density ratio integrand.  Exponent bounded by y^2/2.
inline double exp_gauss(double x, double y) { return std::exp(x * y - 0.5 * x * x); }

}  // namespace clarity
