#include "clarity/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "clarity/errors.hpp"
#include "clarity/normal.hpp"

namespace clarity {
namespace {

constexpr double kPi = std::numbers::pi;

double lgamma_pos(double a) { return std::lgamma(a); }

/// Normalizing constant of the standardized Student-t density.
double student_t_norm(double dof) {
    return std::exp(lgamma_pos(0.5 * (dof + 1.0)) - lgamma_pos(0.5 * dof)) /
           std::sqrt(dof * kPi);
}

std::string kind_name(ComponentKind k) {
    switch (k) {
        case ComponentKind::PointMass: return "point";
        case ComponentKind::Cauchy: return "cauchy";
        case ComponentKind::Normal: return "normal";
        case ComponentKind::Laplace: return "laplace";
        case ComponentKind::StudentT: return "student_t";
    }
    return "?";
}

ComponentKind kind_from_name(const std::string& s) {
    if (s == "point") return ComponentKind::PointMass;
    if (s == "cauchy") return ComponentKind::Cauchy;
    if (s == "normal") return ComponentKind::Normal;
    if (s == "laplace") return ComponentKind::Laplace;
    if (s == "student_t") return ComponentKind::StudentT;
    throw DomainError("unknown component kind: " + s);
}

void validate_component(const SignalComponent& c) {
    if (!(c.weight >= 0.0 && c.weight <= 1.0))
        throw DomainError("component weight must be in [0,1]");
    if (!std::isfinite(c.location)) throw DomainError("component location must be finite");
    if (!c.is_atom() && !(c.scale > 0.0 && std::isfinite(c.scale)))
        throw DomainError("continuous component requires scale > 0");
    if (c.kind == ComponentKind::StudentT && !(c.dof > 0.0 && std::isfinite(c.dof)))
        throw DomainError("student_t component requires dof > 0");
}

// Guard against inf*0 = NaN when a compactifying substitution lands at the
// numeric endpoint: beyond this magnitude every admissible g has reached its
// limit and x*x is still representable.
double clamp_x(double x) {
    constexpr double kMax = 1e150;
    return std::clamp(x, -kMax, kMax);
}

}  // namespace

double SignalComponent::density(double x) const {
    double t = (x - location) / scale;
    switch (kind) {
        case ComponentKind::PointMass:
            return 0.0;
        case ComponentKind::Cauchy:
            return 1.0 / (kPi * scale * (1.0 + t * t));
        case ComponentKind::Normal:
            return norm_pdf(t) / scale;
        case ComponentKind::Laplace:
            return std::exp(-std::fabs(t)) / (2.0 * scale);
        case ComponentKind::StudentT:
            return student_t_norm(dof) *
                   std::pow(1.0 + t * t / dof, -0.5 * (dof + 1.0)) / scale;
    }
    return 0.0;
}

SignalDistribution::SignalDistribution(std::vector<SignalComponent> components) {
    if (components.empty()) throw DomainError("signal distribution needs >= 1 component");
    double total = 0.0;
    for (const auto& c : components) {
        validate_component(c);
        total += c.weight;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw DomainError("component weights must sum to 1 (got " + std::to_string(total) +
                          ")");
    // Merge duplicate atoms at the same location.
    for (auto& c : components) {
        if (!c.is_atom()) {
            components_.push_back(c);
            continue;
        }
        auto it = std::find_if(components_.begin(), components_.end(), [&](const auto& d) {
            return d.is_atom() && d.location == c.location;
        });
        if (it != components_.end())
            it->weight += c.weight;
        else
            components_.push_back(c);
    }
}

SignalDistribution SignalDistribution::point_mass(double location) {
    return SignalDistribution{{{ComponentKind::PointMass, location, 1.0, 1.0, 1.0}}};
}

SignalDistribution SignalDistribution::cauchy(double scale) {
    return SignalDistribution{{{ComponentKind::Cauchy, 0.0, scale, 1.0, 1.0}}};
}

SignalDistribution SignalDistribution::spike_and_cauchy(double pi1, double scale) {
    if (!(pi1 >= 0.0 && pi1 <= 1.0)) throw DomainError("pi1 must be in [0,1]");
    return SignalDistribution{
        {{ComponentKind::PointMass, 0.0, 1.0, 1.0, 1.0 - pi1},
         {ComponentKind::Cauchy, 0.0, scale, 1.0, pi1}}};
}

bool SignalDistribution::is_symmetric() const {
    std::vector<const SignalComponent*> atoms;
    for (const auto& c : components_) {
        if (c.is_atom()) {
            atoms.push_back(&c);
        } else if (c.location != 0.0) {
            return false;
        }
        // all continuous kinds here are symmetric about their location
    }
    for (const auto* a : atoms) {
        if (a->location == 0.0) continue;
        auto it = std::find_if(atoms.begin(), atoms.end(), [&](const SignalComponent* b) {
            return b->location == -a->location;
        });
        if (it == atoms.end() || std::fabs((*it)->weight - a->weight) > 1e-15) return false;
    }
    return true;
}

double SignalDistribution::atom_weight_at_zero() const {
    double w = 0.0;
    for (const auto& c : components_)
        if (c.is_atom() && c.location == 0.0) w += c.weight;
    return w;
}

SignalDistribution SignalDistribution::from_json(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("components"))
        throw DomainError("prior spec must be an object with a \"components\" array");
    for (const auto& [key, _] : spec.items())
        if (key != "components") throw DomainError("unknown field in prior spec: " + key);
    std::vector<SignalComponent> comps;
    for (const auto& jc : spec.at("components")) {
        SignalComponent c;
        c.kind = kind_from_name(jc.at("kind").get<std::string>());
        for (const auto& [key, val] : jc.items()) {
            if (key == "kind") continue;
            if (key == "location")
                c.location = val.get<double>();
            else if (key == "weight")
                c.weight = val.get<double>();
            else if (key == "scale" && c.kind != ComponentKind::PointMass)
                c.scale = val.get<double>();
            else if (key == "dof" && c.kind == ComponentKind::StudentT)
                c.dof = val.get<double>();
            else
                throw DomainError("unknown field in component spec: " + key);
        }
        comps.push_back(c);
    }
    return SignalDistribution(std::move(comps));
}

nlohmann::json SignalDistribution::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : components_) {
        nlohmann::json jc{{"kind", kind_name(c.kind)},
                          {"location", c.location},
                          {"weight", c.weight}};
        if (!c.is_atom()) jc["scale"] = c.scale;
        if (c.kind == ComponentKind::StudentT) jc["dof"] = c.dof;
        arr.push_back(jc);
    }
    return nlohmann::json{{"components", arr}};
}

std::string SignalDistribution::fingerprint() const {
    std::ostringstream os;
    os.precision(17);
    for (const auto& c : components_) {
        os << kind_name(c.kind) << "(" << c.location << "," << c.scale;
        if (c.kind == ComponentKind::StudentT) os << ",dof=" << c.dof;
        os << ";w=" << c.weight << ")";
    }
    return os.str();
}

namespace {

/// Integral of g(x) * component density over [lo, hi] for one continuous
/// component.  Cauchy/Student-t use the tan substitution (with an exact
/// power-law tail map for sub-quadratic Student-t tails); Normal/Laplace use
/// the affine standardization with truncation far below the abs tolerance.
double integrate_continuous(const SignalComponent& c, const std::function<double(double)>& g,
                            double lo, double hi, const IntegrationConfig& cfg,
                            const std::vector<double>& x_hints) {
    const double loc = c.location, s = c.scale;
    auto to_t = [&](double x) { return (x - loc) / s; };
    const double t_lo = std::isinf(lo) ? -std::numeric_limits<double>::infinity() : to_t(lo);
    const double t_hi = std::isinf(hi) ? std::numeric_limits<double>::infinity() : to_t(hi);
    if (t_lo >= t_hi) return 0.0;

    switch (c.kind) {
        case ComponentKind::Cauchy: {
            // x = loc + s tan(theta): integrand becomes g(x)/pi, smooth on the
            // whole compact range.
            double a = std::atan(t_lo), b = std::atan(t_hi);
            std::vector<double> bps;
            for (double h : x_hints) bps.push_back(std::atan(to_t(h)));
            bps.push_back(0.0);
            auto f = [&](double th) { return g(clamp_x(loc + s * std::tan(th))) / kPi; };
            return adaptive_gauss_kronrod(f, a, b, cfg, bps);
        }
        case ComponentKind::Normal: {
            constexpr double kRange = 45.0;  // phi(45) ~ e^-1012, below any tolerance
            double a = std::max(t_lo, -kRange), b = std::min(t_hi, kRange);
            if (a >= b) return 0.0;
            std::vector<double> bps{0.0};
            for (double h : x_hints) bps.push_back(to_t(h));
            auto f = [&](double t) { return g(loc + s * t) * norm_pdf(t); };
            return adaptive_gauss_kronrod(f, a, b, cfg, bps);
        }
        case ComponentKind::Laplace: {
            constexpr double kRange = 60.0;  // e^-60 ~ 9e-27 tail mass
            double a = std::max(t_lo, -kRange), b = std::min(t_hi, kRange);
            if (a >= b) return 0.0;
            std::vector<double> bps{0.0};  // density kink
            for (double h : x_hints) bps.push_back(to_t(h));
            auto f = [&](double t) { return g(loc + s * t) * 0.5 * std::exp(-std::fabs(t)); };
            return adaptive_gauss_kronrod(f, a, b, cfg, bps);
        }
        case ComponentKind::StudentT: {
            // Central body on |t| <= T by direct quadrature; each tail by the
            // power map w = (|t|/T)^{-dof}, which flattens the t^{-dof-1}
            // decay exactly so the transformed integrand stays bounded for
            // every dof in (0, 2) and beyond.
            const double T = 10.0;
            const double k = student_t_norm(c.dof);
            auto dens_t = [&](double t) {
                return k * std::pow(1.0 + t * t / c.dof, -0.5 * (c.dof + 1.0));
            };
            double total = 0.0;
            double a = std::max(t_lo, -T), b = std::min(t_hi, T);
            if (a < b) {
                std::vector<double> bps{0.0};
                for (double h : x_hints) bps.push_back(to_t(h));
                auto f = [&](double t) { return g(loc + s * t) * dens_t(t); };
                total += adaptive_gauss_kronrod(f, a, b, cfg, bps);
            }
            auto tail = [&](double sign, double from, double to) {
                // integrate over t in [from, to] (>= T), in w coordinates
                double w_hi = std::pow(from / T, -c.dof);
                double w_lo = std::isinf(to) ? 0.0 : std::pow(to / T, -c.dof);
                if (w_lo >= w_hi) return 0.0;
                auto f = [&](double w) {
                    double t = T * std::pow(w, -1.0 / c.dof);
                    double jac = (T / c.dof) * std::pow(w, -1.0 / c.dof - 1.0);
                    if (!std::isfinite(t) || !std::isfinite(jac)) {
                        // exact power-tail limit of dens_t(t) * jac
                        double lim = k * std::pow(c.dof, 0.5 * (c.dof + 1.0)) *
                                     std::pow(T, -c.dof) * T / c.dof;
                        return g(sign * clamp_x(1e150)) * lim;
                    }
                    return g(clamp_x(loc + s * sign * t)) * dens_t(t) * jac;
                };
                return adaptive_gauss_kronrod(f, w_lo, w_hi, cfg);
            };
            if (t_hi > T) total += tail(+1.0, std::max(t_lo, T), t_hi);
            if (t_lo < -T)
                total += tail(-1.0, std::max(-t_hi, T),
                              std::isinf(t_lo) ? std::numeric_limits<double>::infinity()
                                               : -t_lo);
            return total;
        }
        case ComponentKind::PointMass:
            break;
    }
    return 0.0;
}

}  // namespace

double integrate_region(const SignalDistribution& P, const std::function<double(double)>& g,
                        double lo, double hi, const IntegrationConfig& cfg,
                        const std::vector<double>& x_hints) {
    double total = 0.0;
    for (const auto& c : P.components()) {
        if (c.weight == 0.0) continue;
        if (c.is_atom()) {
            if (c.location >= lo && c.location <= hi) total += c.weight * g(c.location);
        } else {
            total += c.weight * integrate_continuous(c, g, lo, hi, cfg, x_hints);
        }
    }
    return total;
}

double integrate(const SignalDistribution& P, const std::function<double(double)>& g,
                 const IntegrationConfig& cfg, const std::vector<double>& x_hints) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return integrate_region(P, g, -inf, inf, cfg, x_hints);
}

double marginal_density(const SignalDistribution& P, double y, const IntegrationConfig& cfg) {
    return integrate(P, [y](double x) { return norm_pdf(y - x); }, cfg, {y});
}

double non_null_proportion(const SignalDistribution& P) {
    double w0 = 0.0;
    for (const auto& c : P.components())
        if (c.is_atom() && c.location == 0.0) w0 += c.weight;
    return 1.0 - w0;
}

double sparsity_rate(const SignalDistribution& P, const IntegrationConfig& cfg) {
    return integrate(P, [](double x) { return activity_prob_given_x(x); }, cfg, {0.0});
}

namespace {

// Counter-based stream: the state for draw i is derived from (seed, i) by
// splitmix64, so replicates are reproducible independent of evaluation order.
struct DrawStream {
    std::uint64_t state;
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    DrawStream(std::uint64_t seed, std::uint64_t index)
        : state(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL))) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform in the open interval (0,1).
    double u01() {
        double u;
        do {
            u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        } while (u <= 0.0);
        return u;
    }
    /// Standard normal via Box-Muller (deterministic, no library variance).
    double normal() {
        double u1 = u01(), u2 = u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }
    /// Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            double u = u01();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double cc = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + cc * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = u01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }
};

double sample_component(const SignalComponent& c, DrawStream& rs) {
    switch (c.kind) {
        case ComponentKind::PointMass:
            return c.location;
        case ComponentKind::Cauchy:
            return c.location + c.scale * std::tan(kPi * (rs.u01() - 0.5));
        case ComponentKind::Normal:
            return c.location + c.scale * rs.normal();
        case ComponentKind::Laplace: {
            double u = rs.u01();
            return u < 0.5 ? c.location + c.scale * std::log(2.0 * u)
                           : c.location - c.scale * std::log(2.0 * (1.0 - u));
        }
        case ComponentKind::StudentT: {
            double z = rs.normal();
            double chi2 = 2.0 * rs.gamma(0.5 * c.dof);
            return c.location + c.scale * z * std::sqrt(c.dof / chi2);
        }
    }
    return 0.0;
}

}  // namespace

Dataset sample(const SignalDistribution& P, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DomainError("sample: n >= 1 required");
    Dataset ds;
    ds.values.resize(n);
    ds.seed = seed;
    ds.source = P.fingerprint();
    const auto& comps = P.components();
    for (std::size_t i = 0; i < n; ++i) {
        DrawStream rs(seed, i);
        double u = rs.u01();
        double x = 0.0, acc = 0.0;
        for (const auto& c : comps) {
            acc += c.weight;
            if (u <= acc || &c == &comps.back()) {
                x = sample_component(c, rs);
                break;
            }
        }
        ds.values[i] = x + rs.normal();
    }
    return ds;
}

}  // namespace clarity
