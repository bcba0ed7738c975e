#pragma once

#include <vector>

#include "clarity/distributions.hpp"
#include "clarity/twogroups.hpp"

namespace clarity {

/// The three posterior curves over a y grid, with the marginal alongside.
/// Whenever some signal mass is off the origin, clar >= lfsr >= lnsr holds
/// elementwise.
struct PosteriorCurves {
    std::vector<double> y_grid;
    std::vector<double> lnsr;
    std::vector<double> clar;
    std::vector<double> lfsr;
    std::vector<double> marginal;
};

/// Outcome of the compatibility test.  `moment` is the signed value of
/// integral x e^{-x^2/2} P(dx); `y_star` minimizes the density ratio
/// h(y) = integral e^{xy - x^2/2} P(dx); `rho0` = h(y_star).  When h is
/// monotone the minimizer escapes to +-infinity, rho0 is the infimum, and
/// `rho0_attained` is false.
struct CompatibilityReport {
    bool compatible = false;
    double moment = 0.0;
    double y_star = 0.0;
    double rho0 = 1.0;
    bool rho0_attained = true;
};

/// One value of the joint law of (X, Y, activity indicator).  `atom` flags
/// whether the magnitude multiplies an atom weight or a Lebesgue density of
/// the continuous part at x.
struct JointDensity {
    double value = 0.0;
    bool atom = false;
};

struct ConsistencyReport {
    bool passed = false;
    double max_marginal_err = 0.0;
    double max_inactive_err = 0.0;
    double max_active_err = 0.0;
};

/// Posterior probability of an exact zero: (1 - pi1) phi(y) / m(y).
double lnsr(const SignalDistribution& P, double y, const IntegrationConfig& cfg = {});

/// Posterior probability of inactivity: rho0 phi(y) / m(y).  Requires a
/// symmetric or compatible P; always 1 at y = 0.
double clar(const SignalDistribution& P, double y, const IntegrationConfig& cfg = {});

/// min{P(X <= 0 | Y=y), P(X >= 0 | Y=y)}; atoms at 0 count on both sides.
double lfsr(const SignalDistribution& P, double y, const IntegrationConfig& cfg = {});

/// E{sech(YX) | Y=y} for symmetric P; agrees with clar.
double sech_posterior_mean(const SignalDistribution& P, double y,
                           const IntegrationConfig& cfg = {});

/// E{e^{-YX} | Y=y} for compatible P; agrees with clar.
double exp_posterior_mean(const SignalDistribution& P, double y,
                          const IntegrationConfig& cfg = {});

/// Joint law of (X, Y, activity) for symmetric P: phi(y-x) p(x) sech(xy) at
/// a = 0 and phi(y-x) p(x) (1 - sech(xy)) at a = 1.
JointDensity activity_joint_density(const SignalDistribution& P, double x, double y,
                                    int a);

/// P(XY <= 0 | Y=y); equals lfsr for symmetric P and y != 0, and is bounded
/// by clar for compatible P.
double sign_error_prob(const SignalDistribution& P, double y,
                       const IntegrationConfig& cfg = {});

CompatibilityReport compatibility_check(const SignalDistribution& P, double tol = 1e-10,
                                        const IntegrationConfig& cfg = {});

/// The third-atom location mu making the prior w0 d_0 + w1 d_{x1} + w2 d_mu
/// compatible: solves w1 x1 e^{-x1^2/2} + w2 mu e^{-mu^2/2} = 0 on |mu| <= 1.
double solve_compatible_atom(double w0, double w1, double w2, double x1);

/// The inactive/active decomposition for compatible (possibly asymmetric) P:
/// f1(y) = rho1^{-1} phi(y) integral (e^{xy} - xy - 1) e^{-x^2/2} P(dx).
TwoGroupsDecomposition asymmetric_active_model(const SignalDistribution& P,
                                               const IntegrationConfig& cfg = {});

/// rho0 / h(y): the tilted-sech weight of the asymmetric joint law, in (0,1].
double weighted_sech(const SignalDistribution& P, double y,
                     const IntegrationConfig& cfg = {});

/// Verifies that the weighted-sech joint law marginalizes to m(y), to
/// rho0 phi(y) on the inactive branch, and to rho1 psi1(y) on the active one.
ConsistencyReport asymmetric_consistency_check(const SignalDistribution& P,
                                               const std::vector<double>& y_grid,
                                               const IntegrationConfig& cfg = {});

/// Density of the two-sided p-value given a signal x:
/// f(p|x) = {phi(q+x) + phi(q-x)} / {2 phi(q)}, q the (1-p/2) normal quantile.
double pvalue_density(double p, double x);

/// All four curves on a grid, with shared precomputation of pi1 and rho0.
PosteriorCurves compute_curves(const SignalDistribution& P,
                               const std::vector<double>& y_grid,
                               const IntegrationConfig& cfg = {});

}  // namespace clarity
