#include "clarity/sparse_limit.hpp"

#include <cmath>
#include <limits>
#include <mutex>

#include "clarity/errors.hpp"
#include "clarity/normal.hpp"
#include "clarity/quadrature.hpp"

namespace clarity {

namespace {

double inverse_power_constant(double alpha) {
    // C_alpha = alpha 2^{alpha/2 - 1} / Gamma(1 - alpha/2)
    return alpha * std::pow(2.0, 0.5 * alpha - 1.0) / std::tgamma(1.0 - 0.5 * alpha);
}

double rate_weight(double x) { return activity_prob_given_x(x); }

}  // namespace

ExceedanceFamily ExceedanceFamily::inverse_power(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw DomainError("inverse_power: alpha must be in (0,2)");
    return {ExceedanceKind::InversePower, alpha, 1.0, 1.0};
}

ExceedanceFamily ExceedanceFamily::log_exp(double beta) {
    if (!(beta > 0.0)) throw DomainError("log_exp: beta must be positive");
    return {ExceedanceKind::LogExp, 1.0, beta, 1.0};
}

ExceedanceFamily ExceedanceFamily::cauchy_slab() {
    return {ExceedanceKind::CauchySlab, 1.0, 1.0, 1.0};
}

ExceedanceFamily ExceedanceFamily::gamma_exp(double alpha, double beta) {
    if (!(alpha > 0.0 && beta > 0.0))
        throw DomainError("gamma_exp: alpha and beta must be positive");
    return {ExceedanceKind::GammaExp, alpha, beta, 1.0};
}

double ExceedanceFamily::density(double x) const {
    double a = std::fabs(x);
    if (a == 0.0) return 0.0;
    switch (kind) {
        case ExceedanceKind::InversePower:
            return scale * inverse_power_constant(alpha) / std::pow(a, alpha + 1.0);
        case ExceedanceKind::LogExp:
            return scale * std::exp(-beta * a) / a;
        case ExceedanceKind::CauchySlab:
            return scale / (1.0 + x * x);
        case ExceedanceKind::GammaExp:
            if (x <= 0.0) return 0.0;
            return scale * std::pow(x, alpha - 1.0) * std::exp(-beta * x);
    }
    return 0.0;
}

ExceedanceFamily ExceedanceFamily::normalized(const IntegrationConfig& cfg) const {
    double r = exceedance_integral(*this, rate_weight, cfg);
    ExceedanceFamily out = *this;
    out.scale /= r;
    return out;
}

double exceedance_integral(const ExceedanceFamily& family,
                           const std::function<double(double)>& w,
                           const IntegrationConfig& cfg) {
    // per half-line in u = log x coordinates; the measure density times the
    // Jacobian e^u decays on both ends (as e^{(2-alpha)u} near -inf for the
    // heaviest-singularity shape, since w = O(x^2) there)
    double sing = 2.0;  // local power of x in density * dx near 0
    double u_hi = 40.0;
    switch (family.kind) {
        case ExceedanceKind::InversePower:
            sing = 2.0 - family.alpha;
            u_hi = 40.0 + 45.0 / family.alpha;
            break;
        case ExceedanceKind::LogExp:
            sing = 2.0;
            u_hi = std::log(720.0 / family.beta);
            break;
        case ExceedanceKind::CauchySlab:
            sing = 3.0;
            u_hi = 40.0;
            break;
        case ExceedanceKind::GammaExp:
            sing = 2.0 + family.alpha;
            u_hi = std::log(720.0 / family.beta) + 10.0;
            break;
    }
    double u_lo = -std::min(700.0, 45.0 / sing + 45.0);
    std::vector<double> bps;
    for (double u = u_lo; u < u_hi; u += 5.0) bps.push_back(u);
    auto side = [&](double sgn) {
        auto f = [&](double u) {
            double x = sgn * std::exp(u);
            return w(x) * family.density(x) * std::exp(u);
        };
        return adaptive_gauss_kronrod(f, u_lo, u_hi, cfg, bps);
    };
    double total = side(1.0);
    if (family.kind != ExceedanceKind::GammaExp) total += side(-1.0);
    return total;
}

double J_alpha(double alpha, double x) {
    if (alpha >= 2.0) throw DomainError("J_alpha: alpha must be below 2");
    double a = std::fabs(x);
    if (a == 0.0) return 0.0;
    if (a > 700.0) return std::exp(a) / (2.0 * a);
    double x2 = a * a;
    double fact_term = x2 / 2.0;  // x^{2r} / (2r)! at r = 1
    double sum = 0.0;
    for (int r = 1; r <= 500; ++r) {
        double term = fact_term / (2.0 * r - alpha);
        sum += term;
        if (term < 1e-16 * sum) break;
        fact_term *= x2 / ((2.0 * r + 1.0) * (2.0 * r + 2.0));
    }
    return sum;
}

double gamma_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw DomainError("gamma_alpha: alpha must be in (0,2)");
    double lo = 1e-6, hi = 10.0;
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        (alpha * J_alpha(alpha, mid) < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double I0_cauchy_slab() {
    static std::once_flag flag;
    static double value = 0.0;
    std::call_once(flag, [] {
        value = adaptive_gauss_kronrod(
            [](double x) { return std::exp(-0.5 * x * x) / (1.0 + x * x); }, 0.0, 40.0,
            {1e-13, 1e-16, 400}, {1.0, 5.0});
    });
    return value;
}

double delta_threshold(const ExceedanceFamily& family, double y,
                       const IntegrationConfig& cfg) {
    double a = std::fabs(y);
    if (family.kind == ExceedanceKind::InversePower) {
        if (a == 0.0) throw DomainError("delta_threshold: y must be nonzero");
        return gamma_alpha(family.alpha) / a;
    }
    if (a <= std::exp(1.0))
        throw DomainError("delta_threshold: |y| must exceed e for this shape");
    double ll = std::log(std::log(a));
    switch (family.kind) {
        case ExceedanceKind::LogExp: {
            double arg = std::log(a / ll) * 2.0 * ll;
            if (arg <= 0.0)
                throw DomainError("delta_threshold: |y| too small for the nested logs");
            return std::log(arg) / a;
        }
        case ExceedanceKind::CauchySlab:
            return std::log(2.0 * I0_cauchy_slab() * a) / a;
        case ExceedanceKind::GammaExp: {
            double al = family.alpha, be = family.beta;
            double partial = adaptive_gauss_kronrod(
                [al, be](double x) {
                    return activity_prob_given_x(x) * std::pow(x, al - 1.0) *
                           std::exp(-be * x);
                },
                0.0, 720.0 / be, cfg, {1.0 / be, 10.0 / be});
            double c = 2.0 * (std::tgamma(al) / std::pow(be, al) - partial);
            double arg = c * std::pow(a, al) / std::pow(al * std::log(a), al - 1.0);
            if (arg <= 1.0)
                throw DomainError("delta_threshold: |y| too small for a positive value");
            return std::log(arg) / a;
        }
        default:
            break;
    }
    throw DomainError("delta_threshold: unsupported shape");
}

SignalDistribution SparseFamilyProbe::instantiate() const {
    if (!(nu > 0.0)) throw DomainError("SparseFamilyProbe: nu must be positive");
    switch (kind) {
        case SparseFamilyKind::SparseCauchy:
            return SignalDistribution::cauchy(nu);
        case SparseFamilyKind::AtomAndSlab:
            return SignalDistribution::spike_and_cauchy(nu, 1.0);
        case SparseFamilyKind::ContinuousSpikeSlab:
            return SignalDistribution{
                {{ComponentKind::Normal, 0.0, std::pow(nu, 0.5 * (1.0 + beta)), 1.0,
                  1.0 - nu},
                 {ComponentKind::Cauchy, 0.0, 1.0, 1.0, nu}}};
        case SparseFamilyKind::StudentTScale:
            if (!(alpha > 0.0 && alpha < 2.0))
                throw DomainError("SparseFamilyProbe: degrees of freedom must be in (0,2)");
            return SignalDistribution{{{ComponentKind::StudentT, 0.0, nu, alpha, 1.0}}};
        case SparseFamilyKind::LaplaceMixture:
            return SignalDistribution{
                {{ComponentKind::Laplace, 0.0, std::sqrt(nu), 1.0, 1.0 - nu},
                 {ComponentKind::Laplace, 0.0, 1.0, 1.0, nu}}};
    }
    throw DomainError("SparseFamilyProbe: unsupported family");
}

SparseRatePair sparse_rate_asymptotic(const SparseFamilyProbe& probe,
                                      const IntegrationConfig& cfg) {
    SparseRatePair out;
    out.exact = sparsity_rate(probe.instantiate(), cfg);
    // slab rates entering the closed forms, computed once
    static const double kCauchy1Rate = sparsity_rate(SignalDistribution::cauchy(1.0));
    static const double kLaplace1Rate = sparsity_rate(
        SignalDistribution{{{ComponentKind::Laplace, 0.0, 1.0, 1.0, 1.0}}});
    switch (probe.kind) {
        case SparseFamilyKind::SparseCauchy:
            out.asymptotic = probe.nu * std::sqrt(2.0 / std::acos(-1.0));
            break;
        case SparseFamilyKind::AtomAndSlab:
        case SparseFamilyKind::ContinuousSpikeSlab:
            out.asymptotic = probe.nu * kCauchy1Rate;
            break;
        case SparseFamilyKind::StudentTScale: {
            double al = probe.alpha;
            double c_al = inverse_power_constant(al);
            out.asymptotic = std::pow(al, 0.5 * al) * std::tgamma(0.5 * (al + 1.0)) /
                             (c_al * std::sqrt(std::acos(-1.0)) * std::tgamma(0.5 * al)) *
                             std::pow(probe.nu, al);
            break;
        }
        case SparseFamilyKind::LaplaceMixture:
            // spike contributes E{X^2}/2 = nu, slab contributes nu rho1(L(1))
            out.asymptotic = probe.nu * (1.0 + kLaplace1Rate);
            break;
    }
    return out;
}

std::vector<ThresholdProbeRow> threshold_convergence_probe(
    const std::vector<double>& sigma_seq, double gamma, double omega,
    const IntegrationConfig& cfg) {
    if (!(omega > 0.0))
        throw DomainError("threshold_convergence_probe: omega must be positive");
    std::vector<ThresholdProbeRow> rows;
    for (double sigma : sigma_seq) {
        auto P = SignalDistribution::cauchy(sigma);
        ThresholdProbeRow row;
        row.sigma = sigma;
        row.rho1 = sparsity_rate(P, cfg);
        // rho1 zeta(y) = integral (cosh(xy)-1) e^{-x^2/2} P(dx), increasing in y
        auto coupling = [&](double y) {
            return integrate(P, [y](double x) { return coshm1_gauss(x, y); }, cfg,
                             {0.0, y, -y});
        };
        double hi = 1.0;
        int doublings = 0;
        while (coupling(hi) < omega) {
            hi *= 2.0;
            if (++doublings > 60)
                throw NonConvergence("threshold_convergence_probe: coupling never reaches omega",
                                     omega - coupling(hi));
        }
        double lo = 0.0;
        while (hi - lo > 1e-10) {
            double mid = 0.5 * (lo + hi);
            (coupling(mid) < omega ? lo : hi) = mid;
        }
        row.y = 0.5 * (lo + hi);
        double delta = gamma / row.y;
        double central = integrate_region(
            P, [&](double x) { return norm_pdf(row.y - x); }, -delta, delta, cfg, {0.0});
        row.ratio = central / ((1.0 - row.rho1) * norm_pdf(row.y));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace clarity
