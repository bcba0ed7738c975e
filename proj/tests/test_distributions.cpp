#include "clarity/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "clarity/errors.hpp"
#include "clarity/normal.hpp"
#include "doctest.h"

using namespace clarity;

namespace {
const SignalDistribution kMix = []() {
    return SignalDistribution::spike_and_cauchy(0.4, 0.5);  // 0.6 d0 + 0.4 C(0.5)
}();
}

TEST_CASE("integrate: atoms are exact") {
    auto d0 = SignalDistribution::point_mass(0.0);
    CHECK(integrate(d0, [](double x) { return x * x; }) == 0.0);
    auto d = SignalDistribution{{{ComponentKind::PointMass, -1.5, 1, 1, 0.25},
                                {ComponentKind::PointMass, 0.0, 1, 1, 0.5},
                                {ComponentKind::PointMass, 2.0, 1, 1, 0.25}}};
    double v = integrate(d, [](double x) { return std::exp(-x); });
    CHECK(v == doctest::Approx(0.25 * std::exp(1.5) + 0.5 + 0.25 * std::exp(-2.0))
                   .epsilon(1e-15));
}

TEST_CASE("integrate: Cauchy activity rate") {
    // C(1): rate 0.477 (oracle 0.4768434162697533)
    auto c1 = SignalDistribution::cauchy(1.0);
    double v = integrate(c1, [](double x) { return activity_prob_given_x(x); });
    CHECK(v == doctest::Approx(0.4768434162697533).epsilon(1e-9));
    // N(0,1): second moment is 1
    auto n1 = SignalDistribution{{{ComponentKind::Normal, 0.0, 1.0, 1.0, 1.0}}};
    CHECK(integrate(n1, [](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("integrate: heavy student-t tails converge") {
    for (double dof : {0.5, 1.0, 1.5}) {
        auto t = SignalDistribution{{{ComponentKind::StudentT, 0.0, 1.0, dof, 1.0}}};
        CHECK(integrate(t, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-9));
    }
    // dof=1 student-t is Cauchy
    auto t1 = SignalDistribution{{{ComponentKind::StudentT, 0.0, 0.3, 1.0, 1.0}}};
    auto c = SignalDistribution::cauchy(0.3);
    auto g = [](double x) { return activity_prob_given_x(x); };
    CHECK(integrate(t1, g) == doctest::Approx(integrate(c, g)).epsilon(1e-9));
}

TEST_CASE("integrate: subdivision limit reports NonConvergence") {
    auto c = SignalDistribution::cauchy(1.0);
    IntegrationConfig strangled{1e-10, 1e-13, 1};
    bool threw = false;
    try {
        integrate(c, [](double x) { return std::cos(50.0 * x) * std::exp(-x * x); },
                  strangled);
    } catch (const NonConvergence& e) {
        threw = true;
        CHECK(e.achieved_error() > 0.0);
    }
    CHECK(threw);
}

TEST_CASE("marginal_density: closed forms and oracle value") {
    auto d0 = SignalDistribution::point_mass(0.0);
    CHECK(marginal_density(d0, 1.5) == doctest::Approx(norm_pdf(1.5)).epsilon(1e-14));
    CHECK(norm_pdf(1.5) == doctest::Approx(0.129518).epsilon(1e-5));

    // Gaussian-Gaussian convolution: N(0,1) prior -> N(0,2) marginal
    auto n1 = SignalDistribution{{{ComponentKind::Normal, 0.0, 1.0, 1.0, 1.0}}};
    for (double y : {-6.0, -2.5, 0.0, 1.0, 4.0, 6.0}) {
        double truth = norm_pdf(y / std::sqrt(2.0)) / std::sqrt(2.0);
        CHECK(marginal_density(n1, y) == doctest::Approx(truth).epsilon(1e-10));
    }
    CHECK(marginal_density(n1, 0.0) == doctest::Approx(0.282095).epsilon(1e-5));

    // frozen scipy oracle for the 0.6 d0 + 0.4 C(0.5) mixture at 0
    CHECK(marginal_density(kMix, 0.0) == doctest::Approx(0.3509475563965774).epsilon(1e-8));
}

TEST_CASE("marginal_density: positive, normalized, symmetric") {
    for (const auto& P : {kMix, SignalDistribution::cauchy(0.1),
                          SignalDistribution{{{ComponentKind::Laplace, 0.0, 0.7, 1.0, 1.0}}}}) {
        for (double y = -8.0; y <= 8.0; y += 0.5) {
            double m = marginal_density(P, y);
            CHECK(m > 0.0);
            CHECK(m == doctest::Approx(marginal_density(P, -y)).epsilon(1e-12));
        }
        // normalization over a wide grid; the mass beyond |y|<=L is added back
        // exactly through the prior via Gaussian tail CDFs (Fubini route)
        const double L = 12.0;
        double mass = adaptive_gauss_kronrod(
            [&](double y) { return marginal_density(P, y); }, -L, L,
            {1e-9, 1e-12, 400}, {0.0});
        double tail = integrate(P, [L](double x) { return norm_cdf(x - L) + norm_cdf(-L - x); });
        CHECK(mass + tail == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("non_null_proportion") {
    CHECK(non_null_proportion(SignalDistribution::point_mass(0.0)) == 0.0);
    CHECK(non_null_proportion(SignalDistribution::spike_and_cauchy(0.4, 0.5)) ==
          doctest::Approx(0.4).epsilon(1e-15));
    CHECK(non_null_proportion(SignalDistribution::cauchy(0.1)) == 1.0);
}

TEST_CASE("sparsity_rate: anchors and bounds") {
    CHECK(sparsity_rate(SignalDistribution::point_mass(0.0)) == 0.0);
    CHECK(sparsity_rate(kMix) == doctest::Approx(0.12030493222368155).epsilon(1e-8));
    // Example: tiny Cauchy scale, rate ~ nu*sqrt(2/pi)
    double r = sparsity_rate(SignalDistribution::cauchy(0.001));
    CHECK(r == doctest::Approx(0.001 * std::sqrt(2.0 / 3.14159265358979)).epsilon(0.01));

    for (const auto& P : {kMix, SignalDistribution::cauchy(0.1),
                          SignalDistribution::spike_and_cauchy(0.2, 0.5)}) {
        double rho = sparsity_rate(P), pi1 = non_null_proportion(P);
        CHECK(rho >= 0.0);
        CHECK(rho < pi1);  // strict: 1-e^{-x^2/2} < 1
    }
}

TEST_CASE("sample: determinism and moments") {
    auto d0 = SignalDistribution::point_mass(0.0);
    auto ds = sample(d0, 100000, 7);
    double mean = 0.0, var = 0.0;
    for (double v : ds.values) mean += v;
    mean /= ds.values.size();
    for (double v : ds.values) var += (v - mean) * (v - mean);
    var /= ds.values.size();
    CHECK(std::fabs(mean) < 3.0 / std::sqrt(1e5));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));

    auto p1 = SignalDistribution::spike_and_cauchy(0.2, 0.5);
    auto a = sample(p1, 10000, 1);
    CHECK(a.values.size() == 10000);
    auto b = sample(p1, 10000, 1);
    CHECK(a.values == b.values);
    CHECK(a.seed == 1);
    CHECK(a.source == p1.fingerprint());
}

TEST_CASE("sample: empirical CDF matches the convolution CDF") {
    // KS statistic < 1.63/sqrt(n) (1% critical value) at n=1e5, fixed seeds
    for (const auto& [P, seed] :
         {std::pair{SignalDistribution::cauchy(0.1), std::uint64_t{11}},
          std::pair{SignalDistribution::spike_and_cauchy(0.2, 0.5), std::uint64_t{12}}}) {
        const std::size_t n = 100000;
        auto ds = sample(P, n, seed);
        std::sort(ds.values.begin(), ds.values.end());
        double ks = 0.0;
        for (std::size_t i = 0; i < n; i += 97) {
            double y = ds.values[i];
            double truth = integrate(P, [y](double x) { return norm_cdf(y - x); }, {}, {y});
            double emp_lo = static_cast<double>(i) / n;
            double emp_hi = static_cast<double>(i + 1) / n;
            ks = std::max({ks, std::fabs(emp_lo - truth), std::fabs(emp_hi - truth)});
        }
        CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("JSON spec round trip and strictness") {
    auto spec = nlohmann::json::parse(R"({"components":[
        {"kind":"point","location":0.0,"weight":0.6},
        {"kind":"cauchy","location":0.0,"scale":0.5,"weight":0.4}]})");
    auto P = SignalDistribution::from_json(spec);
    CHECK(non_null_proportion(P) == doctest::Approx(0.4));
    auto P2 = SignalDistribution::from_json(P.to_json());
    CHECK(P2.fingerprint() == P.fingerprint());

    CHECK_THROWS_AS(SignalDistribution::from_json(nlohmann::json::parse(
                        R"({"components":[{"kind":"point","weight":1.0,"frob":2}]})")),
                    DomainError);
    CHECK_THROWS_AS(SignalDistribution::from_json(nlohmann::json::parse(
                        R"({"components":[{"kind":"point","weight":0.7}]})")),
                    DomainError);
    // duplicate atoms merged
    auto Pm = SignalDistribution::from_json(nlohmann::json::parse(
        R"({"components":[{"kind":"point","location":0.0,"weight":0.3},
                          {"kind":"point","location":0.0,"weight":0.7}]})"));
    CHECK(Pm.components().size() == 1);
}

TEST_CASE("structural symmetry check") {
    CHECK(kMix.is_symmetric());
    CHECK(SignalDistribution::cauchy(1.0).is_symmetric());
    auto paired = SignalDistribution{{{ComponentKind::PointMass, 1.0, 1, 1, 0.5},
                                     {ComponentKind::PointMass, -1.0, 1, 1, 0.5}}};
    CHECK(paired.is_symmetric());
    auto lopsided = SignalDistribution{{{ComponentKind::PointMass, 1.0, 1, 1, 0.6},
                                       {ComponentKind::PointMass, -1.0, 1, 1, 0.4}}};
    CHECK(!lopsided.is_symmetric());
    auto shifted = SignalDistribution{{{ComponentKind::Normal, 0.5, 1.0, 1.0, 1.0}}};
    CHECK(!shifted.is_symmetric());
}
