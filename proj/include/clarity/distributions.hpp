#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "clarity/quadrature.hpp"
#include "json.hpp"

namespace clarity {

enum class ComponentKind { PointMass, Cauchy, Normal, Laplace, StudentT };

/// One mixture component of a signal distribution.  `scale` is the Cauchy
/// probable error / Normal standard deviation / Laplace scale / Student-t
/// scale; `dof` applies to Student-t only.
struct SignalComponent {
    ComponentKind kind = ComponentKind::PointMass;
    double location = 0.0;
    double scale = 1.0;
    double dof = 1.0;
    double weight = 1.0;

    bool is_atom() const { return kind == ComponentKind::PointMass; }
    /// Lebesgue density of the (unweighted) component; atoms have none.
    double density(double x) const;
};

/// A finite mixture of atoms and continuous components: the signal prior.
/// Immutable after construction; duplicate atoms are merged and weights must
/// sum to one within 1e-12.
class SignalDistribution {
public:
    explicit SignalDistribution(std::vector<SignalComponent> components);

    static SignalDistribution point_mass(double location = 0.0);
    static SignalDistribution cauchy(double scale);
    /// (1-pi1) delta_0 + pi1 C(scale), the spike-and-Cauchy prior.
    static SignalDistribution spike_and_cauchy(double pi1, double scale);

    const std::vector<SignalComponent>& components() const { return components_; }

    /// Structural symmetry about 0: atoms pair up with equal weights and every
    /// continuous component sits at location 0 with a symmetric kind.
    bool is_symmetric() const;
    double atom_weight_at_zero() const;

    static SignalDistribution from_json(const nlohmann::json& spec);
    nlohmann::json to_json() const;
    std::string fingerprint() const;

private:
    std::vector<SignalComponent> components_;
};

/// Integral of g against P: exact sum over atoms plus adaptive quadrature on
/// compactified coordinates for the continuous parts.  `x_hints` marks
/// locations (peaks, kinks of g) that seed the quadrature panels.
double integrate(const SignalDistribution& P, const std::function<double(double)>& g,
                 const IntegrationConfig& cfg = {}, const std::vector<double>& x_hints = {});

/// Same, restricted to lo <= x <= hi (either bound may be infinite); atoms on
/// the boundary are included.
double integrate_region(const SignalDistribution& P, const std::function<double(double)>& g,
                        double lo, double hi, const IntegrationConfig& cfg = {},
                        const std::vector<double>& x_hints = {});

/// Marginal density of Y = X + N(0,1) at y, i.e. (phi * P)(y).
double marginal_density(const SignalDistribution& P, double y,
                        const IntegrationConfig& cfg = {});

/// pi1 = P(X != 0).
double non_null_proportion(const SignalDistribution& P);

/// rho1 = integral of (1 - e^{-x^2/2}) dP, the sparsity rate.
double sparsity_rate(const SignalDistribution& P, const IntegrationConfig& cfg = {});

struct Dataset {
    std::vector<double> values;
    std::optional<std::uint64_t> seed;
    std::string source = "external";
};

/// n draws of Y = X + N(0,1) with X ~ P, deterministic in (seed, index).
Dataset sample(const SignalDistribution& P, std::size_t n, std::uint64_t seed);

}  // namespace clarity
