#include "clarity/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clarity/errors.hpp"
#include "clarity/normal.hpp"

namespace clarity {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sech(xy) e^{xy - x^2/2} = 2 e^{-x^2/2} / (1 + e^{-2xy}); bounded by 2.
double sech_tilt(double x, double y) {
    double t = -2.0 * x * y;
    double g = std::exp(-0.5 * x * x);
    if (t > 700.0) return 0.0;
    return 2.0 * g / (1.0 + std::exp(t));
}

// 1 - sech(t), accurate near 0 and immune to cosh overflow.
double one_minus_sech(double t) {
    double a = std::fabs(t);
    if (a > 30.0) return -std::expm1(std::log(2.0) - a - std::log1p(std::exp(-2.0 * a)));
    return coshm1(t) / std::cosh(t);
}

double rho0_integral(const SignalDistribution& P, const IntegrationConfig& cfg) {
    return integrate(P, [](double x) { return std::exp(-0.5 * x * x); }, cfg, {0.0});
}

double h_ratio(const SignalDistribution& P, double y, const IntegrationConfig& cfg) {
    return integrate(P, [y](double x) { return exp_gauss(x, y); }, cfg, {0.0, y});
}

double rho0_or_throw(const SignalDistribution& P, const IntegrationConfig& cfg,
                     const char* who) {
    if (P.is_symmetric()) return rho0_integral(P, cfg);
    auto rep = compatibility_check(P, 1e-10, cfg);
    if (!rep.compatible)
        throw CompatibilityError(std::string(who) + ": signal distribution is incompatible");
    return rep.rho0;
}

}  // namespace

double lnsr(const SignalDistribution& P, double y, const IntegrationConfig& cfg) {
    double pi1 = non_null_proportion(P);
    if (pi1 == 1.0) return 0.0;
    return (1.0 - pi1) * norm_pdf(y) / marginal_density(P, y, cfg);
}

double clar(const SignalDistribution& P, double y, const IntegrationConfig& cfg) {
    double rho0 = rho0_or_throw(P, cfg, "clar");
    return rho0 * norm_pdf(y) / marginal_density(P, y, cfg);
}

double lfsr(const SignalDistribution& P, double y, const IntegrationConfig& cfg) {
    auto phi_shift = [y](double x) { return norm_pdf(y - x); };
    double lower = integrate_region(P, phi_shift, -kInf, 0.0, cfg, {y});
    double upper = integrate_region(P, phi_shift, 0.0, kInf, cfg, {y});
    return std::min(lower, upper) / (lower + upper - P.atom_weight_at_zero() * norm_pdf(y));
}

double sech_posterior_mean(const SignalDistribution& P, double y,
                           const IntegrationConfig& cfg) {
    if (!P.is_symmetric())
        throw SymmetryError("sech_posterior_mean: signal distribution must be symmetric");
    double num = integrate(P, [y](double x) { return sech_tilt(x, y); }, cfg, {0.0, y});
    return norm_pdf(y) * num / marginal_density(P, y, cfg);
}

double exp_posterior_mean(const SignalDistribution& P, double y,
                          const IntegrationConfig& cfg) {
    // e^{-xy} phi(y-x) = phi(y) e^{-x^2/2}: the tilt cancels exactly, so the
    // numerator is rho0 phi(y) with no cancellation error.
    double rho0 = rho0_or_throw(P, cfg, "exp_posterior_mean");
    return rho0 * norm_pdf(y) / marginal_density(P, y, cfg);
}

JointDensity activity_joint_density(const SignalDistribution& P, double x, double y,
                                    int a) {
    if (!P.is_symmetric())
        throw SymmetryError("activity_joint_density: signal distribution must be symmetric");
    if (a != 0 && a != 1)
        throw DomainError("activity_joint_density: a must be 0 or 1");
    JointDensity out;
    double px = 0.0;
    for (const auto& c : P.components())
        if (c.is_atom() && c.location == x) {
            px += c.weight;
            out.atom = true;
        }
    if (!out.atom)
        for (const auto& c : P.components())
            if (!c.is_atom()) px += c.weight * c.density(x);
    double keep = a == 0 ? 1.0 / std::cosh(std::min(std::fabs(x * y), 700.0))
                         : one_minus_sech(x * y);
    out.value = norm_pdf(y - x) * px * keep;
    return out;
}

double sign_error_prob(const SignalDistribution& P, double y,
                       const IntegrationConfig& cfg) {
    if (y == 0.0) return 1.0;
    auto phi_shift = [y](double x) { return norm_pdf(y - x); };
    double wrong = y > 0.0 ? integrate_region(P, phi_shift, -kInf, 0.0, cfg, {y})
                           : integrate_region(P, phi_shift, 0.0, kInf, cfg, {y});
    return wrong / marginal_density(P, y, cfg);
}

CompatibilityReport compatibility_check(const SignalDistribution& P, double tol,
                                        const IntegrationConfig& cfg) {
    CompatibilityReport rep;
    rep.moment = integrate(
        P, [](double x) { return x * std::exp(-0.5 * x * x); }, cfg, {-1.0, 1.0});
    if (std::fabs(rep.moment) <= tol || P.is_symmetric()) {
        rep.compatible = true;
        rep.y_star = 0.0;
        rep.rho0 = rho0_integral(P, cfg);
        rep.rho0_attained = true;
        return rep;
    }
    rep.compatible = false;
    // h is strictly convex with h'(0) = moment; walk downhill doubling the
    // step until h turns back up, then golden-section inside the bracket.
    auto h = [&](double y) { return h_ratio(P, y, cfg); };
    const double dir = rep.moment > 0.0 ? -1.0 : 1.0;
    const double y_max = 50.0;
    double t_prev = 0.0, h_prev = h(0.0);
    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    for (double t = 1.0; t <= y_max; t *= 2.0) {
        double ht = h(dir * t);
        if (ht >= h_prev) {
            lo = t_prev == 0.0 ? 0.0 : t_prev / 2.0;
            hi = t;
            bracketed = true;
            break;
        }
        t_prev = t;
        h_prev = ht;
    }
    if (!bracketed && h(dir * y_max) < h_prev) {
        // monotone out to the search horizon: the infimum is the mass at the
        // origin (every off-zero exponent escapes to -infinity)
        rep.y_star = dir * kInf;
        rep.rho0 = P.atom_weight_at_zero();
        rep.rho0_attained = false;
        return rep;
    }
    if (!bracketed) {
        lo = t_prev;
        hi = y_max;
    }
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = h(dir * c1), f2 = h(dir * c2);
    while (b - a > 1e-10) {
        if (f1 <= f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = h(dir * c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = h(dir * c2);
        }
    }
    rep.y_star = dir * 0.5 * (a + b);
    rep.rho0 = h(rep.y_star);
    rep.rho0_attained = true;
    return rep;
}

double solve_compatible_atom(double w0, double w1, double w2, double x1) {
    if (x1 == 0.0) throw DomainError("solve_compatible_atom: x1 must be nonzero");
    if (!(w1 > 0.0 && w2 > 0.0) || std::fabs(w0 + w1 + w2 - 1.0) > 1e-12)
        throw DomainError("solve_compatible_atom: weights must be positive and sum to 1");
    // mu e^{-mu^2/2} = c, with |mu e^{-mu^2/2}| maximized at |mu| = 1
    double c = -(w1 / w2) * x1 * std::exp(-0.5 * x1 * x1);
    double cmax = std::exp(-0.5);
    if (std::fabs(c) > cmax * (1.0 + 1e-12))
        throw NoRootError("solve_compatible_atom: no atom location can balance the moment");
    if (std::fabs(c) >= cmax) return c > 0.0 ? 1.0 : -1.0;
    double lo = -1.0, hi = 1.0;  // g(mu) = mu e^{-mu^2/2} increases on [-1,1]
    for (int i = 0; i < 80 && hi - lo > 1e-14; ++i) {
        double mid = 0.5 * (lo + hi);
        (mid * std::exp(-0.5 * mid * mid) < c ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

TwoGroupsDecomposition asymmetric_active_model(const SignalDistribution& P,
                                               const IntegrationConfig& cfg) {
    auto rep = compatibility_check(P, 1e-10, cfg);
    if (!rep.compatible)
        throw CompatibilityError("asymmetric_active_model: signal distribution is incompatible");
    double rho1 = 1.0 - rep.rho0;
    if (rho1 <= 0.0)
        throw DegenerateError("asymmetric_active_model: no active mass");
    TwoGroupsDecomposition d;
    d.eta1 = rho1;
    d.label = DecompositionLabel::InactiveActive;
    d.marginal = [P, cfg](double y) { return marginal_density(P, y, cfg); };
    d.f1 = [P, cfg, rho1](double y) {
        double v = integrate(P, [y](double x) { return expm1m_gauss(x, y); }, cfg,
                             {0.0, y});
        return norm_pdf(y) * v / rho1;
    };
    return d;
}

double weighted_sech(const SignalDistribution& P, double y,
                     const IntegrationConfig& cfg) {
    double rho0 = rho0_or_throw(P, cfg, "weighted_sech");
    return rho0 / h_ratio(P, y, cfg);
}

ConsistencyReport asymmetric_consistency_check(const SignalDistribution& P,
                                               const std::vector<double>& y_grid,
                                               const IntegrationConfig& cfg) {
    auto rep = compatibility_check(P, 1e-10, cfg);
    if (!rep.compatible)
        throw CompatibilityError(
            "asymmetric_consistency_check: signal distribution is incompatible");
    auto active = asymmetric_active_model(P, cfg);
    ConsistencyReport out;
    for (double y : y_grid) {
        double m = marginal_density(P, y, cfg);
        double sw = weighted_sech(P, y, cfg);
        // branch masses of the joint phi(y-x) P(dx) x {sech_w, 1 - sech_w}
        double inactive_mass = sw * m;
        double active_mass = (1.0 - sw) * m;
        out.max_marginal_err =
            std::max(out.max_marginal_err, std::fabs(inactive_mass + active_mass - m));
        out.max_inactive_err =
            std::max(out.max_inactive_err, std::fabs(inactive_mass - rep.rho0 * norm_pdf(y)));
        out.max_active_err = std::max(
            out.max_active_err, std::fabs(active_mass - active.eta1 * active.f1(y)));
    }
    out.passed = out.max_marginal_err < 1e-8 && out.max_inactive_err < 1e-8 &&
                 out.max_active_err < 1e-8;
    return out;
}

double pvalue_density(double p, double x) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("pvalue_density: p must be in (0,1)");
    double q = norm_quantile(1.0 - 0.5 * p);
    // {phi(q+x) + phi(q-x)} / {2 phi(q)} = e^{-x^2/2} cosh(qx)
    return std::exp(-0.5 * x * x) * std::cosh(q * x);
}

PosteriorCurves compute_curves(const SignalDistribution& P,
                               const std::vector<double>& y_grid,
                               const IntegrationConfig& cfg) {
    double pi1 = non_null_proportion(P);
    double rho0 = rho0_or_throw(P, cfg, "compute_curves");
    PosteriorCurves out;
    out.y_grid = y_grid;
    out.lnsr.reserve(y_grid.size());
    out.clar.reserve(y_grid.size());
    out.lfsr.reserve(y_grid.size());
    out.marginal.reserve(y_grid.size());
    for (double y : y_grid) {
        double m = marginal_density(P, y, cfg);
        out.marginal.push_back(m);
        out.lnsr.push_back(pi1 == 1.0 ? 0.0 : (1.0 - pi1) * norm_pdf(y) / m);
        out.clar.push_back(rho0 * norm_pdf(y) / m);
        out.lfsr.push_back(lfsr(P, y, cfg));
    }
    return out;
}

}  // namespace clarity
