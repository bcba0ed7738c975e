#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clarity/errors.hpp"
#include "clarity/estimation.hpp"
#include "clarity/posterior.hpp"
#include "clarity/simulate.hpp"
#include "clarity/sparse_limit.hpp"
#include "clarity/twogroups.hpp"
#include "json.hpp"

using namespace clarity;

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<double> parse_grid(const std::string& spec) {
    double a, b;
    long n;
    char c1, c2;
    std::istringstream is(spec);
    if (!(is >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || !is.eof())
        throw CLI::ValidationError("--grid", "expected a:b:n");
    if (n < 2 || !(a < b)) throw CLI::ValidationError("--grid", "need a < b and n >= 2");
    std::vector<double> g(n);
    for (long i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1.0);
    return g;
}

SignalDistribution parse_prior(const std::string& text) {
    return SignalDistribution::from_json(nlohmann::json::parse(text));
}

void emit_csv(std::ostream& out, const std::string& header,
              const std::vector<std::vector<double>>& rows) {
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << fmt(row[i]);
        }
        out << '\n';
    }
}

void emit(const std::string& body, const std::string& output) {
    if (output.empty() || output == "-") {
        std::cout << body;
        return;
    }
    std::string tmp = output + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp);
        f << body;
    }
    std::rename(tmp.c_str(), output.c_str());
}

ExceedanceFamily parse_family(const std::string& kind, double alpha, double beta) {
    if (kind == "inverse-power") return ExceedanceFamily::inverse_power(alpha);
    if (kind == "log-exp") return ExceedanceFamily::log_exp(beta);
    if (kind == "cauchy-slab") return ExceedanceFamily::cauchy_slab();
    if (kind == "gamma-exp") return ExceedanceFamily::gamma_exp(alpha, beta);
    throw DomainError("unknown family kind: " + kind);
}

std::vector<double> read_observations(const std::string& input) {
    std::istream* in = &std::cin;
    std::ifstream file;
    if (input != "-") {
        file.open(input);
        if (!file) throw DomainError("cannot open input: " + input);
        in = &file;
    }
    std::vector<double> values;
    std::string line;
    while (std::getline(*in, line)) {
        if (line.empty()) continue;
        values.push_back(std::stod(line));
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact zero vs active signal decompositions of the Gaussian "
                 "signal-plus-noise model"};
    app.require_subcommand(1);

    std::string prior_text, grid_spec = "-4:4:401", output, outdir = ".";
    std::string family_kind = "inverse-power", method_name = "sinc", input = "-";
    std::string config_path, sigmas_text = "0.1,0.03,0.01";
    double alpha = 1.0, beta = 1.0, y_val = 0.0, gamma_val = 1.3770, omega_val = 1.0;
    double p_val = 0.05, x_val = 0.0;

    auto* rates = app.add_subcommand("rates", "Non-null and activity rates of a prior");
    rates->add_option("--prior", prior_text, "prior spec JSON")->required();

    auto* curves = app.add_subcommand("curves", "Posterior curves over a grid (CSV)");
    curves->add_option("--prior", prior_text)->required();
    curves->add_option("--grid", grid_spec, "a:b:n inclusive");
    curves->add_option("--output", output, "file path or - for stdout");

    auto* decompose = app.add_subcommand("decompose", "Two-groups decomposition CSVs");
    decompose->add_option("--prior", prior_text)->required();
    decompose->add_option("--grid", grid_spec);
    decompose->add_option("--outdir", outdir);

    auto* ga = app.add_subcommand("gamma-alpha", "Central-interval constant gamma_alpha");
    ga->add_option("--alpha", alpha)->required();

    auto* thr = app.add_subcommand("threshold", "False-signal threshold delta(y)");
    thr->add_option("--family", family_kind,
                    "inverse-power | log-exp | cauchy-slab | gamma-exp");
    thr->add_option("--alpha", alpha);
    thr->add_option("--beta", beta);
    thr->add_option("--y", y_val)->required();

    auto* probe = app.add_subcommand("probe-threshold",
                                     "Convergence table of the interval/clar ratio");
    probe->add_option("--gamma", gamma_val);
    probe->add_option("--omega", omega_val);
    probe->add_option("--sigmas", sigmas_text, "comma-separated decreasing scales");

    auto* est = app.add_subcommand("estimate", "Plug-in lfdr curve from observations");
    est->add_option("--input", input, "CSV of observations, one per line, - for stdin");
    est->add_option("--method", method_name, "sinc | kde");
    est->add_option("--grid", grid_spec);
    est->add_option("--output", output);

    auto* sim = app.add_subcommand("simulate", "Estimator comparison experiment");
    sim->add_option("--config", config_path, "experiment config JSON file")->required();

    auto* compat = app.add_subcommand("compat", "Compatibility report for a prior");
    compat->add_option("--prior", prior_text)->required();

    auto* pv = app.add_subcommand("pvalue-density", "Two-sided p-value density f(p|x)");
    pv->add_option("--p", p_val)->required();
    pv->add_option("--x", x_val)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        if (rates->parsed()) {
            auto P = parse_prior(prior_text);
            nlohmann::json out;
            out["pi1"] = non_null_proportion(P);
            out["rho1"] = sparsity_rate(P);
            std::cout << out.dump() << '\n';
        } else if (curves->parsed()) {
            auto grid = parse_grid(grid_spec);
            auto P = parse_prior(prior_text);
            auto c = compute_curves(P, grid);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < grid.size(); ++i)
                rows.push_back({grid[i], c.marginal[i], c.lnsr[i], c.clar[i], c.lfsr[i]});
            std::ostringstream os;
            emit_csv(os, "y,marginal,lnsr,clar,lfsr", rows);
            emit(os.str(), output);
        } else if (decompose->parsed()) {
            auto grid = parse_grid(grid_spec);
            auto files = emit_decomposition_figures(parse_prior(prior_text), grid, outdir);
            for (const auto& f : files) std::cout << f << '\n';
        } else if (ga->parsed()) {
            std::cout << fmt(gamma_alpha(alpha)) << '\n';
        } else if (thr->parsed()) {
            std::cout << fmt(delta_threshold(parse_family(family_kind, alpha, beta), y_val))
                      << '\n';
        } else if (probe->parsed()) {
            std::vector<double> sigmas;
            std::istringstream is(sigmas_text);
            std::string tok;
            while (std::getline(is, tok, ',')) sigmas.push_back(std::stod(tok));
            auto rows = threshold_convergence_probe(sigmas, gamma_val, omega_val);
            std::vector<std::vector<double>> table;
            for (const auto& r : rows) table.push_back({r.sigma, r.rho1, r.y, r.ratio});
            std::ostringstream os;
            emit_csv(os, "sigma,rho1,y,ratio", table);
            emit(os.str(), output);
        } else if (est->parsed()) {
            auto grid = parse_grid(grid_spec);
            Dataset data;
            data.values = read_observations(input);
            auto method = method_name == "kde" ? EstimatorMethod::GaussianKDE
                                               : EstimatorMethod::SincKernel;
            if (method_name != "kde" && method_name != "sinc")
                throw DomainError("unknown method: " + method_name);
            auto points = estimate_on_grid(data, grid, method);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < grid.size(); ++i)
                rows.push_back({grid[i], points[i].value, points[i].unstable ? 1.0 : 0.0});
            std::ostringstream os;
            emit_csv(os, "y,lfdr_hat,flag", rows);
            emit(os.str(), output);
        } else if (sim->parsed()) {
            std::ifstream f(config_path);
            if (!f) throw DomainError("cannot open config: " + config_path);
            auto cfg = ExperimentConfig::from_json(nlohmann::json::parse(f));
            auto result = run_fig3_experiment(cfg);
            for (const auto& file : result.files) std::cout << file << '\n';
        } else if (compat->parsed()) {
            auto rep = compatibility_check(parse_prior(prior_text));
            nlohmann::json out;
            out["compatible"] = rep.compatible;
            out["moment"] = rep.moment;
            if (std::isinf(rep.y_star)) {
                out["y_star"] = rep.y_star > 0 ? "inf" : "-inf";
            } else {
                out["y_star"] = rep.y_star;
            }
            out["rho0"] = rep.rho0;
            out["rho0_attained"] = rep.rho0_attained;
            std::cout << out.dump() << '\n';
        } else if (pv->parsed()) {
            std::cout << fmt(pvalue_density(p_val, x_val)) << '\n';
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const NonConvergence& e) {
        nlohmann::json err{{"error", "non_convergence"},
                           {"message", e.what()},
                           {"achieved_error", e.achieved_error()}};
        std::cout << err.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", "computation"}, {"message", e.what()}};
        std::cout << err.dump() << '\n';
        return 1;
    }
    return 0;
}
