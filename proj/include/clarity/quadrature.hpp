#pragma once

#include <functional>
#include <vector>

namespace clarity {

struct IntegrationConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    int max_subdivisions = 200;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over the finite interval
/// [a, b].  `breakpoints` seeds the initial panel boundaries (peaks, kinks);
/// values outside (a, b) are ignored.  Throws NonConvergence carrying the
/// achieved error estimate if the subdivision budget runs out.
double adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                              const IntegrationConfig& cfg = {},
                              const std::vector<double>& breakpoints = {});

}  // namespace clarity
