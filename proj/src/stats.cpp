// SPDX-License-Identifier: Apache-2.0

#include "cherrymetrics/stats.hpp"

#include <cmath>
#include <string>

#include "cherrymetrics/errors.hpp"

namespace cherry::stats {

namespace {

void check_paired(const std::vector<double>& x, const std::vector<double>& y,
                  std::size_t min_n) {
    if (x.size() != y.size())
        throw StatsError("series length mismatch: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
    if (x.size() < min_n)
        throw StatsError("insufficient sample: need n >= " + std::to_string(min_n) +
                         ", got " + std::to_string(x.size()));
}

double mean_of(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

// Centered sums: Sxx, Syy, Sxy.
struct CenteredSums {
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    double mx = 0.0;
    double my = 0.0;
};

CenteredSums centered_sums(const std::vector<double>& x, const std::vector<double>& y) {
    CenteredSums s;
    s.mx = mean_of(x);
    s.my = mean_of(y);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - s.mx;
        double dy = y[i] - s.my;
        s.sxx += dx * dx;
        s.syy += dy * dy;
        s.sxy += dx * dy;
    }
    return s;
}

double normal_quantile_for(double level) {
    // Two-sided critical values, hard-coded for the supported levels.
    if (level == 0.90) return 1.644854;
    if (level == 0.95) return 1.959964;
    if (level == 0.99) return 2.575829;
    throw StatsError("unsupported confidence level " + std::to_string(level) +
                     "; supported: 0.90, 0.95, 0.99");
}

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 200;
    constexpr double kEps = 1e-12;
    constexpr double kTiny = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw StatsError("incomplete beta continued fraction did not converge");
}

}  // namespace

namespace detail {

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace detail

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    check_paired(x, y, 3);
    CenteredSums s = centered_sums(x, y);
    if (s.sxx == 0.0 || s.syy == 0.0)
        throw StatsError("zero variance: a constant series has no correlation");
    return s.sxy / std::sqrt(s.sxx * s.syy);
}

std::pair<double, double> fisher_ci(double r, std::size_t n, double level) {
    if (std::fabs(r) >= 1.0)
        throw StatsError("Fisher interval requires |r| < 1");
    if (n < 4)
        throw StatsError("insufficient sample: Fisher interval requires n >= 4");
    double z = std::atanh(r);
    double half = normal_quantile_for(level) / std::sqrt(static_cast<double>(n - 3));
    return {std::tanh(z - half), std::tanh(z + half)};
}

double p_value(double r, std::size_t n) {
    if (std::fabs(r) >= 1.0)
        throw StatsError("p-value requires |r| < 1");
    if (n < 3)
        throw StatsError("insufficient sample: p-value requires n >= 3");
    double df = static_cast<double>(n - 2);
    double t2 = r * r * df / (1.0 - r * r);
    // Two-sided: P(|T| >= t) = I_{df/(df+t^2)}(df/2, 1/2).
    return detail::incomplete_beta(df / 2.0, 0.5, df / (df + t2));
}

LinearFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
    check_paired(x, y, 3);
    CenteredSums s = centered_sums(x, y);
    if (s.sxx == 0.0)
        throw StatsError("zero variance: constant x admits no least-squares line");
    LinearFit fit;
    fit.slope = s.sxy / s.sxx;
    fit.intercept = s.my - fit.slope * s.mx;
    if (s.syy == 0.0) {
        fit.r_squared = 1.0;  // y is constant and the flat line is exact
    } else {
        double ss_res = s.syy - fit.slope * s.sxy;
        fit.r_squared = 1.0 - ss_res / s.syy;
    }
    return fit;
}

std::pair<double, double> mean_std(const std::vector<double>& x) {
    if (x.size() < 2)
        throw StatsError("insufficient sample: standard deviation requires n >= 2");
    double m = mean_of(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / static_cast<double>(x.size() - 1))};
}

double covariance(const std::vector<double>& x, const std::vector<double>& y) {
    check_paired(x, y, 2);
    CenteredSums s = centered_sums(x, y);
    return s.sxy / static_cast<double>(x.size() - 1);
}

StatsSummary summarize(const std::vector<double>& x, const std::vector<double>& y,
                       double level) {
    check_paired(x, y, 4);
    StatsSummary out;
    out.n = x.size();
    out.r = pearson(x, y);
    auto [lo, hi] = fisher_ci(out.r, out.n, level);
    out.ci_low = lo;
    out.ci_high = hi;
    out.p_value = p_value(out.r, out.n);
    out.covariance = covariance(x, y);
    auto [mx, sx] = mean_std(x);
    auto [my, sy] = mean_std(y);
    out.mean_x = mx;
    out.sd_x = sx;
    out.mean_y = my;
    out.sd_y = sy;
    LinearFit fit = ols_fit(x, y);
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.r_squared = fit.r_squared;
    return out;
}

}  // namespace cherry::stats
