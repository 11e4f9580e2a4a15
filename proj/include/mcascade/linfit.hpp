#pragma once

#include <Eigen/Dense>

namespace mcas {

struct OlsLine {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
};

// Ordinary least squares y = slope * x + intercept with the
// residual-based standard error of the slope.
inline OlsLine ols_fit(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
    const auto n = static_cast<double>(x.size());
    const double xbar = x.mean();
    const double ybar = y.mean();
    const double sxx = ((x - xbar) * (x - xbar)).sum();
    const double sxy = ((x - xbar) * (y - ybar)).sum();
    OlsLine line;
    line.slope = sxy / sxx;
    line.intercept = ybar - line.slope * xbar;
    if (x.size() > 2) {
        const Eigen::ArrayXd resid = y - (line.intercept + line.slope * x);
        const double s2 = (resid * resid).sum() / (n - 2.0);
        line.stderr_slope = std::sqrt(s2 / sxx);
    }
    return line;
}

}  // namespace mcas
