// Independent brute-force reference implementations, deliberately written
// with none of the library's shortcuts (no shared fit context, no prefix
// sums, no reuse across q). Test-only.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace naive {

inline std::vector<double> profile(const std::vector<double>& series) {
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(series.size());
    std::vector<double> y(series.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series[i] - mean;
        y[i] = acc;
    }
    return y;
}

// Least squares polynomial of degree m on x = 0..s-1, returns mean squared
// residual. Plain Vandermonde normal equations in long double.
inline double poly_mean_sq_residual(const std::vector<double>& y, std::size_t start,
                                    std::size_t s, int m) {
    const int dim = m + 1;
    std::vector<std::vector<long double>> a(static_cast<std::size_t>(dim),
                                            std::vector<long double>(static_cast<std::size_t>(dim) + 1, 0.0L));
    for (std::size_t t = 0; t < s; ++t) {
        long double xp[8];
        xp[0] = 1.0L;
        for (int j = 1; j < dim; ++j) xp[j] = xp[j - 1] * static_cast<long double>(t);
        for (int j = 0; j < dim; ++j) {
            for (int k = 0; k < dim; ++k)
                a[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] += xp[j] * xp[k];
            a[static_cast<std::size_t>(j)][static_cast<std::size_t>(dim)] +=
                xp[j] * static_cast<long double>(y[start + t]);
        }
    }
    for (int col = 0; col < dim; ++col) {
        int piv = col;
        for (int r = col + 1; r < dim; ++r)
            if (fabsl(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                fabsl(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                piv = r;
        std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(piv)]);
        for (int r = 0; r < dim; ++r) {
            if (r == col) continue;
            long double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                            a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            for (int k = 0; k <= dim; ++k)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -=
                    f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
        }
    }
    std::vector<long double> c(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j)
        c[static_cast<std::size_t>(j)] =
            a[static_cast<std::size_t>(j)][static_cast<std::size_t>(dim)] /
            a[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
    long double ss = 0.0L;
    for (std::size_t t = 0; t < s; ++t) {
        long double fit = 0.0L, xp = 1.0L;
        for (int j = 0; j < dim; ++j) {
            fit += c[static_cast<std::size_t>(j)] * xp;
            xp *= static_cast<long double>(t);
        }
        long double r = static_cast<long double>(y[start + t]) - fit;
        ss += r * r;
    }
    return static_cast<double>(ss / static_cast<long double>(s));
}

inline std::vector<std::size_t> box_starts(std::size_t n, std::size_t s) {
    std::vector<std::size_t> starts;
    std::size_t ns = n / s;
    for (std::size_t v = 0; v < ns; ++v) starts.push_back(v * s);
    if (ns * s != n)
        for (std::size_t v = 0; v < ns; ++v) starts.push_back(n - ns * s + v * s);
    return starts;
}

inline std::vector<double> dfa_fv(const std::vector<double>& series, std::size_t s, int m) {
    auto y = profile(series);
    std::vector<double> fv;
    for (std::size_t start : box_starts(y.size(), s))
        fv.push_back(std::sqrt(poly_mean_sq_residual(y, start, s, m)));
    return fv;
}

inline std::vector<double> dma_fv(const std::vector<double>& series, std::size_t s,
                                  double theta) {
    auto y = profile(series);
    const std::size_t n = y.size();
    const long fwd = static_cast<long>(std::floor((static_cast<double>(s) - 1.0) * theta));
    std::vector<double> residuals;
    // 1-based valid range: s - fwd <= i <= n - fwd.
    for (long i = static_cast<long>(s) - fwd; i <= static_cast<long>(n) - fwd; ++i) {
        double sum = 0.0;
        // window y(i - k), k from -fwd to ceil((s-1)(1-theta))
        long khi = static_cast<long>(
            std::ceil((static_cast<double>(s) - 1.0) * (1.0 - theta) - 1e-12));
        // guard against float noise: the window must hold exactly s points
        if (khi + fwd + 1 != static_cast<long>(s)) khi = static_cast<long>(s) - 1 - fwd;
        for (long k = -fwd; k <= khi; ++k) sum += y[static_cast<std::size_t>(i - k - 1)];
        double ma = sum / static_cast<double>(s);
        residuals.push_back(y[static_cast<std::size_t>(i - 1)] - ma);
    }
    std::vector<double> fv;
    for (std::size_t start : box_starts(residuals.size(), s)) {
        double ss = 0.0;
        for (std::size_t t = 0; t < s; ++t) ss += residuals[start + t] * residuals[start + t];
        fv.push_back(std::sqrt(ss / static_cast<double>(s)));
    }
    return fv;
}

inline double fq(const std::vector<double>& fv, double q) {
    const auto ns = static_cast<double>(fv.size());
    if (q == 0.0) {
        double acc = 0.0;
        for (double f : fv) acc += std::log(f);
        return std::exp(acc / ns);
    }
    double acc = 0.0;
    for (double f : fv) acc += std::pow(f, q);
    return std::pow(acc / ns, 1.0 / q);
}

// Mass exponent of a dyadic measure by direct partition sums: aggregate the
// measure at box sizes 2^j and regress log2(sum mu^q) on -j.
inline double partition_tau(const std::vector<double>& measure, double q, int levels) {
    std::vector<double> mu = measure;
    std::vector<double> logz;
    std::vector<double> logeps;
    int total_levels = 0;
    for (std::size_t m = mu.size(); m > 1; m /= 2) ++total_levels;
    int level = 0;
    while (mu.size() > 1 && level < levels) {
        double z = 0.0;
        for (double v : mu) z += std::pow(v, q);
        logz.push_back(std::log2(z));
        logeps.push_back(static_cast<double>(level) - total_levels);  // log2 of box size
        std::vector<double> coarser(mu.size() / 2);
        for (std::size_t i = 0; i < coarser.size(); ++i) coarser[i] = mu[2 * i] + mu[2 * i + 1];
        mu = coarser;
        ++level;
    }
    // OLS slope of log2 Z against log2 eps.
    double mx = 0, my = 0;
    const auto n = static_cast<double>(logz.size());
    for (std::size_t i = 0; i < logz.size(); ++i) {
        mx += logeps[i];
        my += logz[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logz.size(); ++i) {
        sxx += (logeps[i] - mx) * (logeps[i] - mx);
        sxy += (logeps[i] - mx) * (logz[i] - my);
    }
    return sxy / sxx;
}

}  // namespace naive
