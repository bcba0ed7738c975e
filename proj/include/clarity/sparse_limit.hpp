#pragma once

#include <functional>
#include <vector>

#include "clarity/distributions.hpp"

namespace clarity {

/// The four exceedance-measure shapes.  Densities (before the `scale`
/// multiplier):
///   InversePower:  C_alpha / |x|^{alpha+1},  C_alpha = alpha 2^{alpha/2-1} /
///                  Gamma(1-alpha/2); unit rate integral by construction.
///   LogExp:        |x|^{-1} e^{-beta |x|}
///   CauchySlab:    1 / (1 + x^2)
///   GammaExp:      x^{alpha-1} e^{-beta x} on x > 0 only
enum class ExceedanceKind { InversePower, LogExp, CauchySlab, GammaExp };

struct ExceedanceFamily {
    ExceedanceKind kind = ExceedanceKind::InversePower;
    double alpha = 1.0;
    double beta = 1.0;
    double scale = 1.0;

    static ExceedanceFamily inverse_power(double alpha);
    static ExceedanceFamily log_exp(double beta);
    static ExceedanceFamily cauchy_slab();
    static ExceedanceFamily gamma_exp(double alpha, double beta);

    double density(double x) const;
    /// Copy with `scale` adjusted so the rate integral of 1 - e^{-x^2/2} is 1.
    ExceedanceFamily normalized(const IntegrationConfig& cfg = {}) const;
};

/// integral of w against the family's measure; w must be bounded with
/// w(x)/x^2 bounded near 0 (not checkable here, documented contract).
double exceedance_integral(const ExceedanceFamily& family,
                           const std::function<double(double)>& w,
                           const IntegrationConfig& cfg = {});

/// J_alpha(x) = sum_{r>=1} x^{2r} / {(2r)! (2r-alpha)}, alpha < 2.
double J_alpha(double alpha, double x);

/// The positive root of alpha J_alpha(gamma) = 1, alpha in (0,2).
double gamma_alpha(double alpha);

/// integral_0^inf e^{-x^2/2}/(1+x^2) dx, cached.
double I0_cauchy_slab();

/// The central-interval threshold delta(y) for each exceedance shape:
///   InversePower:  gamma_alpha / |y|
///   LogExp:        log( log(|y|/loglog|y|) * 2 loglog|y| ) / |y|
///   CauchySlab:    log(2 I0 |y|) / |y|
///   GammaExp:      log( c |y|^alpha / (alpha log|y|)^{alpha-1} ) / |y|,
///                  c = 2 { Gamma(alpha)/beta^alpha
///                          - integral (1-e^{-x^2/2}) x^{alpha-1} e^{-beta x} dx }
/// Shapes other than InversePower require |y| > e.
double delta_threshold(const ExceedanceFamily& family, double y,
                       const IntegrationConfig& cfg = {});

/// The five nu-indexed sparse families used to exercise the limit theory.
enum class SparseFamilyKind {
    SparseCauchy,         // C(nu)
    AtomAndSlab,          // (1-nu) d_0 + nu C(1)
    ContinuousSpikeSlab,  // (1-nu) N(0, nu^{1+beta}) + nu C(1)
    StudentTScale,        // t_alpha with scale nu, 0 < alpha < 2
    LaplaceMixture        // (1-nu) L(sqrt(nu)) + nu L(1); no exceedance measure
};

struct SparseFamilyProbe {
    SparseFamilyKind kind = SparseFamilyKind::SparseCauchy;
    double nu = 0.1;
    double alpha = 1.0;  // StudentTScale degrees of freedom
    double beta = 1.0;   // ContinuousSpikeSlab spike exponent

    SignalDistribution instantiate() const;
};

struct SparseRatePair {
    double exact;       // sparsity_rate of the instantiated distribution
    double asymptotic;  // the small-nu closed form for the family
};

SparseRatePair sparse_rate_asymptotic(const SparseFamilyProbe& probe,
                                      const IntegrationConfig& cfg = {});

struct ThresholdProbeRow {
    double sigma;
    double rho1;
    double y;      // solves rho1 zeta(y) = omega
    double ratio;  // P(|X| < gamma/y | Y=y) / clar(y)
};

/// Convergence table for the central-interval equivalence under C(sigma)
/// priors: the ratio approaches 1 as sigma decreases.
std::vector<ThresholdProbeRow> threshold_convergence_probe(
    const std::vector<double>& sigma_seq, double gamma, double omega,
    const IntegrationConfig& cfg = {});

}  // namespace clarity
