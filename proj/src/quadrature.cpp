#include "clarity/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "clarity/errors.hpp"

namespace clarity {
namespace {

// Kronrod-15 abscissae on [0,1] (positive half) and weights; the embedded
// Gauss-7 rule uses the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double integral;
    double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double result_gauss = fc * kWg[3];
    double result_kronrod = fc * kWgk[7];
    double fv[15];
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        double dx = h * kXgk[j];
        double f1 = f(c - dx);
        double f2 = f(c + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
    }
    double mean = 0.5 * result_kronrod;
    double asc = kWgk[7] * std::fabs(fv[7] - mean);
    for (int j = 0; j < 7; ++j)
        asc += kWgk[j] * (std::fabs(fv[j] - mean) + std::fabs(fv[14 - j] - mean));
    asc *= h;
    double err = std::fabs((result_kronrod - result_gauss) * h);
    if (asc != 0.0 && err != 0.0)
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    return {result_kronrod * h, err};
}

struct Panel {
    double a, b, integral, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace

double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                              const IntegrationConfig& cfg,
                              const std::vector<double>& breakpoints) {
    if (a == b) return 0.0;
    std::vector<double> edges{a, b};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    std::sort(edges.begin(), edges.end());

    std::priority_queue<Panel> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto r = gk15(f, edges[i], edges[i + 1]);
        heap.push({edges[i], edges[i + 1], r.integral, r.error});
        total += r.integral;
        total_err += r.error;
    }

    int splits = 0;
    while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total))) {
        if (splits >= cfg.max_subdivisions)
            throw NonConvergence("adaptive_gauss_kronrod: subdivision limit reached",
                                 total_err);
        Panel worst = heap.top();
        heap.pop();
        double m = 0.5 * (worst.a + worst.b);
        if (m <= worst.a || m >= worst.b)
            throw NonConvergence("adaptive_gauss_kronrod: interval too small", total_err);
        auto left = gk15(f, worst.a, m);
        auto right = gk15(f, m, worst.b);
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        heap.push({worst.a, m, left.integral, left.error});
        heap.push({m, worst.b, right.integral, right.error});
        ++splits;
    }
    return total;
}

}  // namespace clarity
