// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace cherry::stats {

// The bivariate-fit summary block: correlation with its confidence
// interval and significance, the moments, and the least-squares line.
struct StatsSummary {
    std::size_t n = 0;
    double r = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_value = 1.0;
    double covariance = 0.0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double sd_x = 0.0;
    double sd_y = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Fisher z interval: atanh(r) +- z_crit/sqrt(n-3), mapped back with tanh.
// Supported levels: 0.90, 0.95, 0.99.
std::pair<double, double> fisher_ci(double r, std::size_t n, double level = 0.95);

// Two-sided p for H0: rho = 0, via Student's t with n-2 degrees of freedom.
double p_value(double r, std::size_t n);

LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

std::pair<double, double> mean_std(const std::vector<double>& x);

// Sample covariance, n-1 denominator.
double covariance(const std::vector<double>& x, const std::vector<double>& y);

StatsSummary summarize(const std::vector<double>& x, const std::vector<double>& y,
                       double level = 0.95);

namespace detail {
// Regularized incomplete beta I_x(a,b), continued-fraction expansion.
double incomplete_beta(double a, double b, double x);
}

}  // namespace cherry::stats
