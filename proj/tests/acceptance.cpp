// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Criterion 13 contains a decay-rate subcheck that the symmetric
// +-xi perturbation cannot meet (its marginal gap is second order in xi, see
// the perturbation test for the measured first differences); it is reported
// honestly rather than weakened.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "clarity/estimation.hpp"
#include "clarity/normal.hpp"
#include "clarity/posterior.hpp"
#include "clarity/simulate.hpp"
#include "clarity/sparse_limit.hpp"
#include "clarity/twogroups.hpp"

using namespace clarity;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail, double seconds) {
    std::printf("criterion %2d: %s%s%s  [%.2fs]\n", id, ok ? "PASS" : "FAIL",
                detail.empty() ? "" : " ", detail.c_str(), seconds);
    if (!ok) ++failures;
}

template <typename F>
void criterion(int id, F body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, ok, detail, secs);
}

// deterministic stream of symmetric mixture priors with an atom at zero
SignalDistribution random_symmetric_prior(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double w0 = 0.2 + 0.6 * u(rng);
    std::vector<SignalComponent> comps{{ComponentKind::PointMass, 0.0, 1, 1, w0}};
    double rest = 1.0 - w0;
    int blocks = 1 + static_cast<int>(u(rng) * 2.0);
    for (int b = 0; b < blocks; ++b) {
        double w = b + 1 == blocks ? rest : rest * u(rng);
        rest -= w;
        double s = 0.2 + 2.0 * u(rng);
        switch (static_cast<int>(u(rng) * 4.0)) {
            case 0:
                comps.push_back({ComponentKind::Cauchy, 0.0, s, 1, w});
                break;
            case 1:
                comps.push_back({ComponentKind::Normal, 0.0, s, 1, w});
                break;
            case 2:
                comps.push_back({ComponentKind::Laplace, 0.0, s, 1, w});
                break;
            default: {
                double x = 0.3 + 2.5 * u(rng);
                comps.push_back({ComponentKind::PointMass, x, 1, 1, 0.5 * w});
                comps.push_back({ComponentKind::PointMass, -x, 1, 1, 0.5 * w});
            }
        }
    }
    return SignalDistribution{comps};
}

std::vector<double> grid(double a, double b, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1.0);
    return g;
}

char buf[256];

}  // namespace

int main() {
    const auto sparse = SignalDistribution::spike_and_cauchy(0.2, 0.5);

    criterion(1, [](std::string& d) {
        const std::pair<double, double> table[] = {
            {0.50, 2.2370}, {0.75, 1.7383}, {1.0, 1.3770}, {1.25, 1.0809}, {1.50, 0.8120}};
        for (auto [a, g] : table) {
            if (std::fabs(gamma_alpha(a) - g) >= 1e-3) {
                std::snprintf(buf, sizeof buf, "gamma(%.2f)=%.5f", a, gamma_alpha(a));
                d = buf;
                return false;
            }
        }
        return true;
    });

    criterion(2, [&](std::string& d) {
        double mix = sparsity_rate(SignalDistribution::spike_and_cauchy(0.4, 0.5));
        double c1 = sparsity_rate(SignalDistribution::cauchy(1.0));
        double c01 = sparsity_rate(SignalDistribution::cauchy(0.1));
        double sp = sparsity_rate(sparse);
        bool ok = std::fabs(mix - 0.12) < 0.005 && std::fabs(c1 - 0.477) < 0.001 &&
                  c01 > 0.06 && c01 < 0.08 && sp > 0.06 && sp < 0.08;
        if (!ok) {
            std::snprintf(buf, sizeof buf, "rates %.4f %.4f %.4f %.4f", mix, c1, c01, sp);
            d = buf;
        }
        return ok;
    });

    criterion(3, [&](std::string& d) {
        double v = lnsr(sparse, 0.0);
        if (std::fabs(v - 0.85) < 0.01) return true;
        std::snprintf(buf, sizeof buf, "lnsr(0)=%.4f", v);
        d = buf;
        return false;
    });

    criterion(4, [](std::string& d) {
        std::mt19937_64 rng(41);
        double worst = 0.0;
        auto ys = grid(-5.0, 5.0, 21);
        for (int k = 0; k < 50; ++k) {
            auto P = random_symmetric_prior(rng);
            for (double y : ys) {
                double c = clar(P, y);
                worst = std::max(worst, std::fabs(c - sech_posterior_mean(P, y)));
                worst = std::max(worst, std::fabs(c - exp_posterior_mean(P, y)));
            }
        }
        if (worst < 1e-8) return true;
        std::snprintf(buf, sizeof buf, "max identity gap %.3e", worst);
        d = buf;
        return false;
    });

    criterion(5, [](std::string& d) {
        std::mt19937_64 rng(52);
        auto ys = grid(-8.0, 8.0, 33);
        for (int k = 0; k < 20; ++k) {
            auto P = random_symmetric_prior(rng);
            for (double y : ys) {
                double c = clar(P, y), f = lfsr(P, y), n = lnsr(P, y);
                if (!(c > f && f > n)) {
                    std::snprintf(buf, sizeof buf, "chain broken at prior %d, y=%.2f", k, y);
                    d = buf;
                    return false;
                }
            }
        }
        return true;
    });

    criterion(6, [](std::string& d) {
        std::mt19937_64 rng(63);
        for (int k = 0; k < 10; ++k) {
            auto P = random_symmetric_prior(rng);
            double rho1 = sparsity_rate(P);
            if (!(f1_from_eta(P, 0.5 * rho1, 0.0) < 0.0) ||
                std::fabs(f1_from_eta(P, rho1, 0.0)) > 1e-9) {
                std::snprintf(buf, sizeof buf, "boundary violated at prior %d", k);
                d = buf;
                return false;
            }
        }
        return true;
    });

    criterion(7, [](std::string& d) {
        double mu = solve_compatible_atom(0.8, 0.12, 0.08, 2.0);
        if (std::fabs(mu + 0.45) >= 0.005) {
            d = "atom location off";
            return false;
        }
        SignalDistribution p3{{{ComponentKind::PointMass, 0.0, 1, 1, 0.8},
                               {ComponentKind::PointMass, 2.0, 1, 1, 0.12},
                               {ComponentKind::PointMass, mu, 1, 1, 0.08}}};
        auto rep = compatibility_check(p3);
        if (!rep.compatible || std::fabs(rep.moment) >= 1e-10) {
            d = "moment not balanced";
            return false;
        }
        auto model = asymmetric_active_model(p3);
        if (std::fabs(model.f1(0.0)) > 1e-10) {
            d = "active density nonzero at origin";
            return false;
        }
        double mass = adaptive_gauss_kronrod([&](double y) { return model.f1(y); }, -15.0,
                                             15.0, {1e-9, 1e-12, 400}, {0.0});
        if (std::fabs(mass - 1.0) > 1e-8) {
            std::snprintf(buf, sizeof buf, "active mass %.10f", mass);
            d = buf;
            return false;
        }
        return true;
    });

    criterion(8, [](std::string& d) {
        auto ys = grid(-5.0, 5.0, 21);
        auto sym = asymmetric_consistency_check(SignalDistribution::spike_and_cauchy(0.4, 0.5), ys);
        double mu = solve_compatible_atom(0.8, 0.12, 0.08, 2.0);
        SignalDistribution p3{{{ComponentKind::PointMass, 0.0, 1, 1, 0.8},
                               {ComponentKind::PointMass, 2.0, 1, 1, 0.12},
                               {ComponentKind::PointMass, mu, 1, 1, 0.08}}};
        auto asym = asymmetric_consistency_check(p3, ys);
        if (sym.passed && asym.passed) return true;
        d = "marginalization identity broke";
        return false;
    });

    criterion(9, [](std::string& d) {
        auto check = [&](SparseFamilyKind kind, double al, const char* name) {
            auto pr = sparse_rate_asymptotic({kind, 1e-3, al});
            if (std::fabs(pr.exact / pr.asymptotic - 1.0) < 0.01) return true;
            std::snprintf(buf, sizeof buf, "%s ratio %.4f", name, pr.exact / pr.asymptotic);
            d = buf;
            return false;
        };
        if (!check(SparseFamilyKind::SparseCauchy, 1.0, "cauchy")) return false;
        if (!check(SparseFamilyKind::AtomAndSlab, 1.0, "atom-and-slab")) return false;
        if (!check(SparseFamilyKind::LaplaceMixture, 1.0, "laplace")) return false;
        auto t = sparse_rate_asymptotic({SparseFamilyKind::StudentTScale, 1e-3, 1.0});
        auto c = sparse_rate_asymptotic({SparseFamilyKind::SparseCauchy, 1e-3});
        if (std::fabs(t.asymptotic / c.asymptotic - 1.0) < 0.01) return true;
        d = "inverse-power formula disagrees with the Cauchy formula";
        return false;
    });

    criterion(10, [](std::string& d) {
        double v = I0_cauchy_slab();
        if (std::fabs(v - 0.822) < 5e-4) return true;
        std::snprintf(buf, sizeof buf, "I0=%.6f", v);
        d = buf;
        return false;
    });

    criterion(11, [](std::string& d) {
        auto rows = threshold_convergence_probe({0.1, 0.03, 0.01, 0.003}, 1.3770, 1.0);
        double first = std::fabs(rows.front().ratio - 1.0);
        double last = std::fabs(rows.back().ratio - 1.0);
        if (last < 0.05 && last < first) return true;
        std::snprintf(buf, sizeof buf, "ratios %.4f -> %.4f", rows.front().ratio,
                      rows.back().ratio);
        d = buf;
        return false;
    });

    criterion(12, [](std::string& d) {
        auto P = SignalDistribution::cauchy(0.1);
        auto ys = grid(-3.0, 3.0, 41);
        std::vector<double> clar_truth, lnsr_truth;
        for (double y : ys) {
            clar_truth.push_back(clar(P, y));
            lnsr_truth.push_back(0.0);
        }
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto data = sample(P, 10000, seed);
            for (auto method : {EstimatorMethod::SincKernel, EstimatorMethod::GaussianKDE}) {
                auto pts = estimate_on_grid(data, ys, method);
                double to_clar = 0.0, to_lnsr = 0.0;
                for (std::size_t i = 0; i < ys.size(); ++i) {
                    to_clar += std::fabs(pts[i].value - clar_truth[i]);
                    to_lnsr += std::fabs(pts[i].value - lnsr_truth[i]);
                }
                if (!(to_clar < to_lnsr)) {
                    std::snprintf(buf, sizeof buf, "seed %llu tracks lnsr",
                                  static_cast<unsigned long long>(seed));
                    d = buf;
                    return false;
                }
            }
        }
        auto big = sample(P, 100000, 42);
        double mae = 0.0;
        for (std::size_t i = 0; i < ys.size(); ++i)
            mae += std::fabs(sinc_clar_estimate(big, ys[i]) - clar_truth[i]);
        mae /= ys.size();
        if (mae < 0.05) return true;
        std::snprintf(buf, sizeof buf, "sinc MAE %.4f", mae);
        d = buf;
        return false;
    });

    criterion(13, [&](std::string& d) {
        auto rows = run_perturbation_demo(sparse, {0.1, 0.01, 0.001}, 2.0);
        for (const auto& r : rows) {
            if (r.lnsr_perturbed != 0.0) {
                d = "perturbed null probability not zero";
                return false;
            }
        }
        double ratio = rows[0].tv_proxy / rows[1].tv_proxy;
        double clar_gap = std::fabs(rows[2].clar_perturbed - rows[2].clar_base);
        bool ratio_ok = ratio >= 8.0 && ratio <= 12.0;
        bool clar_ok = clar_gap < 1e-3;
        if (ratio_ok && clar_ok) return true;
        std::snprintf(buf, sizeof buf,
                      "TV ratio %.2f outside [8,12]%s; marginal gap is quadratic in xi "
                      "for this construction",
                      ratio, clar_ok ? "" : ", clar gap too large");
        d = buf;
        return false;
    });

    criterion(14, [](std::string& d) {
        auto ys = grid(-4.0, 4.0, 41);
        auto files = emit_decomposition_figures(SignalDistribution::spike_and_cauchy(0.4, 0.5),
                                                ys, "acceptance_out");
        auto P = SignalDistribution::spike_and_cauchy(0.4, 0.5);
        auto nn = null_nonnull_model(P);
        auto ia = inactive_active_model(P);
        for (double y : ys) {
            for (const auto* m : {&nn, &ia}) {
                double sum = (1.0 - m->eta1) * norm_pdf(y) + m->eta1 * m->f1(y);
                if (std::fabs(sum - m->marginal(y)) > 1e-9) {
                    d = "component sum misses the marginal";
                    return false;
                }
            }
        }
        if (ia.f1(0.0) != 0.0) {
            d = "active contribution nonzero at origin";
            return false;
        }
        if (!(nn.eta1 * nn.f1(0.0) > 0.0)) {
            d = "non-null contribution not positive at origin";
            return false;
        }
        return files.size() == 2;
    });

    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
