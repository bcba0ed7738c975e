#include "clarity/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "clarity/errors.hpp"
#include "clarity/normal.hpp"

namespace clarity {

namespace {

double sinc(double u) {
    if (std::fabs(u) < 1e-8) return 1.0 / std::acos(-1.0);
    return std::sin(u) / (std::acos(-1.0) * u);
}

void require_data(const Dataset& data, const char* who) {
    if (data.values.size() < 2)
        throw DomainError(std::string(who) + ": need at least two observations");
}

double sinc_density(const std::vector<double>& v, double h, double y) {
    double s = 0.0;
    for (double x : v) s += sinc((x - y) / h);
    return s / (v.size() * h);
}

double kde_density(const std::vector<double>& v, double h, double y) {
    double s = 0.0;
    for (double x : v) s += norm_pdf((x - y) / h);
    return s / (v.size() * h);
}

EstimatePoint ratio_point(double num, double den) {
    EstimatePoint p;
    if (den <= 0.0) {
        p.unstable = true;
        p.raw = std::numeric_limits<double>::infinity();
        p.value = 1.0;
        return p;
    }
    p.raw = num / den;
    p.value = std::clamp(p.raw, 0.0, 1.0);
    return p;
}

unsigned thread_budget() {
    if (const char* env = std::getenv("CLARITY_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace

double sinc_bandwidth(std::size_t n) {
    if (n < 2) throw DomainError("sinc_bandwidth: need at least two observations");
    return 1.0 / std::sqrt(std::log(static_cast<double>(n)));
}

double kde_bandwidth(const std::vector<double>& values) {
    if (values.size() < 2) throw DomainError("kde_bandwidth: need at least two observations");
    double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / (n - 1.0));
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        double pos = q * (n - 1.0);
        std::size_t i = static_cast<std::size_t>(pos);
        double frac = pos - i;
        if (i + 1 >= sorted.size()) return sorted.back();
        return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
    };
    double iqr = quantile(0.75) - quantile(0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (spread <= 0.0) spread = sd > 0.0 ? sd : 1.0;
    return 1.06 * spread * std::pow(n, -0.2);
}

EstimatePoint sinc_clar_point(const Dataset& data, double y) {
    require_data(data, "sinc_clar_point");
    double h = sinc_bandwidth(data.values.size());
    double f0 = sinc_density(data.values, h, 0.0);
    double fy = sinc_density(data.values, h, y);
    return ratio_point(norm_pdf(y) * f0, norm_pdf(0.0) * fy);
}

double sinc_clar_estimate(const Dataset& data, double y) {
    return sinc_clar_point(data, y).value;
}

LfdrEstimate zda_lfdr_estimate(const Dataset& data, EstimatorMethod method) {
    require_data(data, "zda_lfdr_estimate");
    auto values = data.values;
    double h = method == EstimatorMethod::SincKernel ? sinc_bandwidth(values.size())
                                                     : kde_bandwidth(values);
    auto fhat = [values, h, method](double y) {
        return method == EstimatorMethod::SincKernel ? sinc_density(values, h, y)
                                                     : kde_density(values, h, y);
    };
    LfdrEstimate est;
    est.method = method;
    est.density = fhat;
    double f0 = fhat(0.0);
    est.eta1_hat_raw = 1.0 - f0 / norm_pdf(0.0);
    est.eta1_hat = std::clamp(est.eta1_hat_raw, 0.0, 1.0);
    est.at = [fhat, f0](double y) {
        return ratio_point(norm_pdf(y) * f0, norm_pdf(0.0) * fhat(y));
    };
    return est;
}

std::vector<EstimatePoint> estimate_on_grid(const Dataset& data,
                                            const std::vector<double>& y_grid,
                                            EstimatorMethod method) {
    auto est = zda_lfdr_estimate(data, method);
    std::vector<EstimatePoint> out(y_grid.size());
    unsigned workers = std::min<unsigned>(thread_budget(),
                                          std::max<std::size_t>(y_grid.size(), 1));
    if (workers <= 1 || y_grid.size() < 8) {
        for (std::size_t i = 0; i < y_grid.size(); ++i) out[i] = est.at(y_grid[i]);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < y_grid.size(); i += workers)
                out[i] = est.at(y_grid[i]);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace clarity
