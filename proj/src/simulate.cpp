#include "clarity/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "clarity/errors.hpp"
#include "clarity/normal.hpp"
#include "clarity/twogroups.hpp"

namespace clarity {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string method_name(EstimatorMethod m) {
    return m == EstimatorMethod::SincKernel ? "sinc" : "kde";
}

EstimatorMethod method_from_name(const std::string& s) {
    if (s == "sinc") return EstimatorMethod::SincKernel;
    if (s == "kde") return EstimatorMethod::GaussianKDE;
    throw DomainError("unknown method: " + s);
}

void write_text_atomic(const std::string& path, const std::string& body) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << body;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void write_csv_atomic(const std::string& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    os << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << fmt(row[i]);
        }
        os << '\n';
    }
    write_text_atomic(path, os.str());
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& spec) {
    static const std::vector<std::string> known{"prior",  "n",       "seeds", "grid",
                                               "methods", "outputs"};
    for (auto it = spec.begin(); it != spec.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw DomainError("ExperimentConfig: unknown key " + it.key());
    }
    ExperimentConfig cfg;
    cfg.prior = SignalDistribution::from_json(spec.at("prior"));
    cfg.n = spec.at("n").get<std::size_t>();
    if (cfg.n < 100) throw DomainError("ExperimentConfig: n must be at least 100");
    cfg.seeds = spec.at("seeds").get<std::vector<std::uint64_t>>();
    if (cfg.seeds.empty()) throw DomainError("ExperimentConfig: need at least one seed");
    auto grid = spec.at("grid");
    cfg.grid_lo = grid.at(0).get<double>();
    cfg.grid_hi = grid.at(1).get<double>();
    cfg.grid_count = grid.at(2).get<std::size_t>();
    if (cfg.grid_count < 2) throw DomainError("ExperimentConfig: grid needs two points");
    if (!(cfg.grid_lo < cfg.grid_hi)) throw DomainError("ExperimentConfig: empty grid range");
    cfg.methods.clear();
    for (const auto& m : spec.at("methods")) cfg.methods.push_back(method_from_name(m));
    if (cfg.methods.empty()) throw DomainError("ExperimentConfig: need at least one method");
    cfg.outputs = spec.value("outputs", std::string("."));
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["prior"] = prior.to_json();
    j["n"] = n;
    j["seeds"] = seeds;
    j["grid"] = {grid_lo, grid_hi, grid_count};
    j["methods"] = nlohmann::json::array();
    for (auto m : methods) j["methods"].push_back(method_name(m));
    j["outputs"] = outputs;
    return j;
}

std::vector<double> ExperimentConfig::grid() const {
    std::vector<double> g(grid_count);
    for (std::size_t i = 0; i < grid_count; ++i)
        g[i] = grid_lo + (grid_hi - grid_lo) * i / (grid_count - 1.0);
    return g;
}

ExperimentResult run_fig3_experiment(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.outputs);
    ExperimentResult result;
    result.y_grid = cfg.grid();
    result.truth = compute_curves(cfg.prior, result.y_grid);

    {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < result.y_grid.size(); ++i) {
            rows.push_back({result.y_grid[i], result.truth.marginal[i],
                            result.truth.lnsr[i], result.truth.clar[i],
                            result.truth.lfsr[i]});
        }
        std::string path = cfg.outputs + "/truth.csv";
        write_csv_atomic(path, "y,marginal,lnsr,clar,lfsr", rows);
        result.files.push_back(path);
    }

    nlohmann::json summary;
    summary["config"] = cfg.to_json();
    summary["lnsr_at_zero"] = lnsr(cfg.prior, 0.0);
    summary["rho1"] = sparsity_rate(cfg.prior);
    summary["pi1"] = non_null_proportion(cfg.prior);
    summary["runs"] = nlohmann::json::array();

    for (std::uint64_t seed : cfg.seeds) {
        auto data = sample(cfg.prior, cfg.n, seed);
        for (auto method : cfg.methods) {
            auto est = zda_lfdr_estimate(data, method);
            auto points = estimate_on_grid(data, result.y_grid, method);
            MethodErrorSummary s;
            s.seed = seed;
            s.method = method;
            s.eta1_hat = est.eta1_hat;
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < result.y_grid.size(); ++i) {
                const auto& p = points[i];
                rows.push_back({result.y_grid[i], p.value, p.raw,
                                p.unstable ? 1.0 : 0.0});
                if (p.unstable) ++s.flagged_points;
                double dc = std::fabs(p.value - result.truth.clar[i]);
                double dn = std::fabs(p.value - result.truth.lnsr[i]);
                double df = std::fabs(p.value - result.truth.lfsr[i]);
                s.sup_to_clar = std::max(s.sup_to_clar, dc);
                s.sup_to_lnsr = std::max(s.sup_to_lnsr, dn);
                s.sup_to_lfsr = std::max(s.sup_to_lfsr, df);
                s.mean_to_clar += dc;
                s.mean_to_lnsr += dn;
                s.mean_to_lfsr += df;
            }
            double m = static_cast<double>(result.y_grid.size());
            s.mean_to_clar /= m;
            s.mean_to_lnsr /= m;
            s.mean_to_lfsr /= m;
            result.summaries.push_back(s);

            std::string path = cfg.outputs + "/estimate_seed" + std::to_string(seed) +
                               "_" + method_name(method) + ".csv";
            write_csv_atomic(path, "y,lfdr_hat,raw,flag", rows);
            result.files.push_back(path);

            nlohmann::json run;
            run["seed"] = seed;
            run["method"] = method_name(method);
            run["eta1_hat"] = s.eta1_hat;
            run["sup_to_clar"] = s.sup_to_clar;
            run["mean_to_clar"] = s.mean_to_clar;
            run["sup_to_lnsr"] = s.sup_to_lnsr;
            run["mean_to_lnsr"] = s.mean_to_lnsr;
            run["sup_to_lfsr"] = s.sup_to_lfsr;
            run["mean_to_lfsr"] = s.mean_to_lfsr;
            run["flagged_points"] = s.flagged_points;
            summary["runs"].push_back(run);
        }
    }

    std::string spath = cfg.outputs + "/summary.json";
    write_text_atomic(spath, summary.dump(2) + "\n");
    result.files.push_back(spath);
    return result;
}

std::vector<PerturbationRow> run_perturbation_demo(const SignalDistribution& P_base,
                                                   const std::vector<double>& xi_seq,
                                                   double y) {
    double w0 = P_base.atom_weight_at_zero();
    if (w0 <= 0.0)
        throw DomainError("run_perturbation_demo: base distribution needs an atom at 0");
    double lnsr_b = lnsr(P_base, y);
    double clar_b = clar(P_base, y);
    std::vector<PerturbationRow> rows;
    for (double xi : xi_seq) {
        if (!(xi > 0.0)) throw DomainError("run_perturbation_demo: xi must be positive");
        // move the atom at 0 out to +-xi, half the weight each way
        std::vector<SignalComponent> comps;
        for (const auto& c : P_base.components())
            if (!(c.is_atom() && c.location == 0.0)) comps.push_back(c);
        comps.push_back({ComponentKind::PointMass, xi, 1, 1, 0.5 * w0});
        comps.push_back({ComponentKind::PointMass, -xi, 1, 1, 0.5 * w0});
        SignalDistribution pert{comps};

        PerturbationRow row;
        row.xi = xi;
        row.lnsr_base = lnsr_b;
        row.lnsr_perturbed = lnsr(pert, y);
        row.clar_base = clar_b;
        row.clar_perturbed = clar(pert, y);
        // half the L1 distance of the marginals; only the moved atom
        // contributes, so the grid integral over |y| <= 10 plus a Gaussian
        // tail bound captures everything
        const double L = 10.0;
        double body = adaptive_gauss_kronrod(
            [&](double t) {
                return std::fabs(marginal_density(P_base, t) - marginal_density(pert, t));
            },
            -L, L, {1e-9, 1e-13, 400}, {-xi, 0.0, xi});
        double tail = w0 * (2.0 * norm_cdf(-L) + norm_cdf(xi - L) + norm_cdf(-L - xi));
        row.tv_proxy = 0.5 * (body + tail);
        rows.push_back(row);
    }
    return rows;
}

std::vector<std::string> emit_decomposition_figures(const SignalDistribution& P,
                                                    const std::vector<double>& grid,
                                                    const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> files;

    {
        std::vector<std::vector<double>> rows;
        std::string header = "y,marginal,null_contribution,nonnull_contribution";
        try {
            auto d = null_nonnull_model(P);
            for (double y : grid) {
                double m = d.marginal(y);
                rows.push_back({y, m, (1.0 - d.eta1) * norm_pdf(y), d.eta1 * d.f1(y)});
            }
        } catch (const DegenerateError&) {
            header += ",note_all_mass_null";
            for (double y : grid) rows.push_back({y, norm_pdf(y), norm_pdf(y), 0.0});
        }
        std::string path = out_dir + "/decomposition_null_nonnull.csv";
        write_csv_atomic(path, header, rows);
        files.push_back(path);
    }

    {
        std::vector<std::vector<double>> rows;
        std::string header = "y,marginal,inactive_contribution,active_contribution";
        try {
            auto d = P.is_symmetric() ? inactive_active_model(P)
                                      : asymmetric_active_model(P);
            for (double y : grid) {
                double m = d.marginal(y);
                rows.push_back({y, m, (1.0 - d.eta1) * norm_pdf(y), d.eta1 * d.f1(y)});
            }
        } catch (const DegenerateError&) {
            header += ",note_all_mass_inactive";
            for (double y : grid) rows.push_back({y, norm_pdf(y), norm_pdf(y), 0.0});
        }
        std::string path = out_dir + "/decomposition_inactive_active.csv";
        write_csv_atomic(path, header, rows);
        files.push_back(path);
    }

    return files;
}

}  // namespace clarity
