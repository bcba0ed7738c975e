#pragma once

#include <functional>
#include <vector>

#include "clarity/distributions.hpp"

namespace clarity {

enum class EstimatorMethod { SincKernel, GaussianKDE };

/// One evaluation of an estimated curve.  `raw` is the unclamped ratio;
/// `unstable` marks a nonpositive density estimate in the denominator, in
/// which case `value` is set to the conservative 1.
struct EstimatePoint {
    double value = 1.0;
    double raw = 1.0;
    bool unstable = false;
};

/// The plug-in lfdr estimator built on a density estimate fhat:
/// eta1_hat = 1 - fhat(0)/phi(0), curve(y) = (1 - eta1_hat) phi(y) / fhat(y).
struct LfdrEstimate {
    double eta1_hat_raw = 0.0;
    double eta1_hat = 0.0;  // clamped to [0,1]
    EstimatorMethod method = EstimatorMethod::SincKernel;
    std::function<double(double)> density;   // the fitted fhat
    std::function<EstimatePoint(double)> at;
};

/// 1/sqrt(log n), the sinc-kernel bandwidth.
double sinc_bandwidth(std::size_t n);

/// Gaussian KDE bandwidth: 1.06 min(sd, IQR/1.34) n^{-1/5}.  The robust
/// spread keeps the bandwidth finite under heavy-tailed samples.
double kde_bandwidth(const std::vector<double>& values);

/// phi(y) sum K(Y_i/h) / {phi(0) sum K((Y_i-y)/h)} with K(u) = sin(u)/(pi u).
EstimatePoint sinc_clar_point(const Dataset& data, double y);
double sinc_clar_estimate(const Dataset& data, double y);

LfdrEstimate zda_lfdr_estimate(const Dataset& data, EstimatorMethod method);

/// Curve evaluation over a sorted grid; parallel across points, capped by the
/// CLARITY_THREADS environment variable.
std::vector<EstimatePoint> estimate_on_grid(const Dataset& data,
                                            const std::vector<double>& y_grid,
                                            EstimatorMethod method);

}  // namespace clarity
