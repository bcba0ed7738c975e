#include "clarity/twogroups.hpp"

#include <cmath>

#include "clarity/errors.hpp"
#include "clarity/normal.hpp"
#include "doctest.h"

using namespace clarity;

namespace {
const SignalDistribution kMix = SignalDistribution::spike_and_cauchy(0.4, 0.5);
}

TEST_CASE("h_interval: bounds and symmetry guard") {
    auto h = h_interval(kMix);
    CHECK(h.lower == doctest::Approx(0.12030493222368155).epsilon(1e-8));
    CHECK(h.upper == 1.0);

    auto shifted = SignalDistribution{{{ComponentKind::Normal, 0.5, 1.0, 1.0, 1.0}}};
    CHECK_THROWS_AS(h_interval(shifted), SymmetryError);
}

TEST_CASE("f1_from_eta: admissible iff eta1 >= rho1") {
    double rho1 = sparsity_rate(kMix);
    // strictly below rho1 the implied density dips negative near the origin
    for (double c : {0.25, 0.5, 0.9}) {
        CHECK(f1_from_eta(kMix, c * rho1, 0.0) < 0.0);
    }
    // at and above rho1 it stays nonnegative on a wide grid
    for (double eta : {rho1, 0.5 * (rho1 + 1.0), 1.0}) {
        for (double y = -8.0; y <= 8.0; y += 0.25) {
            CHECK(f1_from_eta(kMix, eta, y) >= -1e-12);
        }
    }
    CHECK_THROWS_AS(f1_from_eta(kMix, 0.0, 1.0), DomainError);
}

TEST_CASE("null_nonnull_model: atom removed exactly") {
    auto d = null_nonnull_model(kMix);
    CHECK(d.eta1 == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(d.label == DecompositionLabel::NullNonNull);
    // f1 is the marginal of the Cauchy part alone
    auto c = SignalDistribution::cauchy(0.5);
    for (double y : {0.0, 0.7, -2.0, 5.0}) {
        CHECK(d.f1(y) == doctest::Approx(marginal_density(c, y)).epsilon(1e-9));
    }
    // mixture identity m = (1-eta1) phi + eta1 f1
    for (double y = -8.0; y <= 8.0; y += 0.5) {
        double lhs = d.marginal(y);
        double rhs = (1.0 - d.eta1) * norm_pdf(y) + d.eta1 * d.f1(y);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
    CHECK_THROWS_AS(null_nonnull_model(SignalDistribution::point_mass(0.0)),
                    DegenerateError);
}

TEST_CASE("inactive_active_model: zero at origin, mixture identity") {
    auto d = inactive_active_model(kMix);
    CHECK(d.eta1 == doctest::Approx(0.12030493222368155).epsilon(1e-8));
    CHECK(d.label == DecompositionLabel::InactiveActive);
    CHECK(d.f1(0.0) == 0.0);
    for (double y = -8.0; y <= 8.0; y += 0.5) {
        CHECK(d.f1(y) >= 0.0);
        double lhs = d.marginal(y);
        double rhs = (1.0 - d.eta1) * norm_pdf(y) + d.eta1 * d.f1(y);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
    // the active density integrates to one: grid mass on |y|<=L plus the exact
    // tail through the prior, using phi(y)cosh(xy)e^{-x^2/2} = (phi(y-x)+phi(y+x))/2
    const double L = 12.0;
    double mass = adaptive_gauss_kronrod([&](double y) { return d.f1(y); }, -L, L,
                                         {1e-9, 1e-12, 400}, {0.0});
    double tail = integrate(kMix, [L](double x) {
                      return norm_cdf(x - L) + norm_cdf(-L - x) -
                             2.0 * norm_cdf(-L) * std::exp(-0.5 * x * x);
                  }) / d.eta1;
    CHECK(mass + tail == doctest::Approx(1.0).epsilon(1e-8));

    CHECK_THROWS_AS(inactive_active_model(SignalDistribution::point_mass(0.0)),
                    DegenerateError);
    auto shifted = SignalDistribution{{{ComponentKind::Normal, 0.5, 1.0, 1.0, 1.0}}};
    CHECK_THROWS_AS(inactive_active_model(shifted), SymmetryError);
}

TEST_CASE("both models reproduce the same marginal") {
    auto a = null_nonnull_model(kMix);
    auto b = inactive_active_model(kMix);
    for (double y = -8.0; y <= 8.0; y += 0.5) {
        CHECK(a.marginal(y) == doctest::Approx(b.marginal(y)).epsilon(1e-12));
        double via_a = (1.0 - a.eta1) * norm_pdf(y) + a.eta1 * a.f1(y);
        double via_b = (1.0 - b.eta1) * norm_pdf(y) + b.eta1 * b.f1(y);
        CHECK(via_a == doctest::Approx(via_b).epsilon(1e-9));
    }
}

TEST_CASE("zda_holds separates the two models") {
    CHECK(zda_holds(inactive_active_model(kMix)));
    CHECK(!zda_holds(null_nonnull_model(kMix)));
    // fully continuous prior: even the null/non-null split has f1(0) > 0
    CHECK(!zda_holds(null_nonnull_model(SignalDistribution::cauchy(1.0))));
    CHECK(zda_holds(inactive_active_model(SignalDistribution::cauchy(1.0))));
}
