#pragma once

#include <functional>

#include "clarity/distributions.hpp"

namespace clarity {

enum class DecompositionLabel { Generic, NullNonNull, InactiveActive };

/// A binary mixture representation of the marginal of Y:
/// marginal(y) = (1-eta1) phi(y) + eta1 f1(y).
struct TwoGroupsDecomposition {
    double eta1 = 0.0;
    std::function<double(double)> f1;
    std::function<double(double)> marginal;
    DecompositionLabel label = DecompositionLabel::Generic;
};

struct HInterval {
    double lower;  // the sparsity rate rho1
    double upper;  // always 1
};

/// The non-null/active density implied by a mixing weight eta1:
/// f1(y) = {marginal(y) - (1-eta1) phi(y)} / eta1.  Negative values signal
/// eta1 below the admissible interval.
double f1_from_eta(const SignalDistribution& P, double eta1, double y,
                   const IntegrationConfig& cfg = {});

/// The interval of admissible mixing weights, [rho1, 1].  Symmetric P only.
HInterval h_interval(const SignalDistribution& P, const IntegrationConfig& cfg = {});

/// eta1 = pi1, f1 = conditional marginal of the non-null signals.
TwoGroupsDecomposition null_nonnull_model(const SignalDistribution& P,
                                          const IntegrationConfig& cfg = {});

/// eta1 = rho1, f1 = the active density with zero density at the origin.
/// Symmetric P only.
TwoGroupsDecomposition inactive_active_model(const SignalDistribution& P,
                                             const IntegrationConfig& cfg = {});

/// Zero density assumption: marginal(0) == (1-eta1) phi(0) within 1e-9 phi(0).
bool zda_holds(const TwoGroupsDecomposition& d);

}  // namespace clarity
