#include "clarity/twogroups.hpp"

#include <cmath>

#include "clarity/errors.hpp"
#include "clarity/normal.hpp"

namespace clarity {

double f1_from_eta(const SignalDistribution& P, double eta1, double y,
                   const IntegrationConfig& cfg) {
    if (!(eta1 > 0.0 && eta1 <= 1.0))
        throw DomainError("f1_from_eta: eta1 must be in (0, 1]");
    double m = marginal_density(P, y, cfg);
    return (m - (1.0 - eta1) * norm_pdf(y)) / eta1;
}

HInterval h_interval(const SignalDistribution& P, const IntegrationConfig& cfg) {
    if (!P.is_symmetric())
        throw SymmetryError("h_interval: signal distribution must be symmetric");
    return {sparsity_rate(P, cfg), 1.0};
}

TwoGroupsDecomposition null_nonnull_model(const SignalDistribution& P,
                                          const IntegrationConfig& cfg) {
    double pi1 = non_null_proportion(P);
    if (pi1 == 0.0)
        throw DegenerateError("null_nonnull_model: no non-null mass");
    TwoGroupsDecomposition d;
    d.eta1 = pi1;
    d.label = DecompositionLabel::NullNonNull;
    d.marginal = [P, cfg](double y) { return marginal_density(P, y, cfg); };
    // f1 is the marginal of Y given X != 0: the atom at the origin is removed
    // exactly, not by subtraction of two nearly equal densities.
    double pi0_atom = P.atom_weight_at_zero();
    d.f1 = [P, cfg, pi1, pi0_atom](double y) {
        double m = marginal_density(P, y, cfg);
        return (m - pi0_atom * norm_pdf(y)) / pi1;
    };
    return d;
}

TwoGroupsDecomposition inactive_active_model(const SignalDistribution& P,
                                             const IntegrationConfig& cfg) {
    if (!P.is_symmetric())
        throw SymmetryError("inactive_active_model: signal distribution must be symmetric");
    double rho1 = sparsity_rate(P, cfg);
    if (rho1 == 0.0)
        throw DegenerateError("inactive_active_model: no active mass");
    TwoGroupsDecomposition d;
    d.eta1 = rho1;
    d.label = DecompositionLabel::InactiveActive;
    d.marginal = [P, cfg](double y) { return marginal_density(P, y, cfg); };
    d.f1 = [P, cfg, rho1](double y) {
        double v = integrate(P, [y](double x) { return coshm1_gauss(x, y); }, cfg,
                             {0.0, y, -y});
        return norm_pdf(y) * v / rho1;
    };
    return d;
}

bool zda_holds(const TwoGroupsDecomposition& d) {
    double phi0 = norm_pdf(0.0);
    return std::fabs(d.eta1 * d.f1(0.0)) <= 1e-9 * phi0;
}

}  // namespace clarity
