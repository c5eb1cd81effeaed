#include "itd/distfit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace itd {

namespace {

// Profile log-likelihood score in beta, per observation:
//   S(beta) = 1/beta + mean(ln g) - sum(g^b ln g) / sum(g^b)
// Strictly decreasing in beta, so a bracketed bisection is enough.
double weibull_profile_score(const std::vector<double>& g, double beta) {
    double sum_pow = 0.0, sum_pow_log = 0.0, sum_log = 0.0;
    for (double x : g) {
        double lx = std::log(x);
        double p = std::pow(x, beta);
        sum_pow += p;
        sum_pow_log += p * lx;
        sum_log += lx;
    }
    auto n = static_cast<double>(g.size());
    return 1.0 / beta + sum_log / n - sum_pow_log / sum_pow;
}

}  // namespace

double weibull_log_density(double g, double alpha, double beta) {
    return std::log(alpha) + std::log(beta) + (beta - 1.0) * std::log(g) -
           alpha * std::pow(g, beta);
}

double qexp_log_density(double g, double a, double g0, double gamma) {
    return std::log(a) - (gamma + 1.0) * std::log(g + g0);
}

WeibullFit fit_weibull_mle(const ScaledSample& sample, const WeibullOptions& opts) {
    std::vector<double> g;
    g.reserve(sample.g.size());
    for (double x : sample.g)
        if (x > 0.0) g.push_back(x);
    if (g.size() < opts.min_positive)
        throw DataError("fit_weibull_mle: fewer than " + std::to_string(opts.min_positive) +
                        " positive values");

    double lo = 1e-3, hi = 100.0;
    double slo = weibull_profile_score(g, lo);
    double shi = weibull_profile_score(g, hi);
    if (slo < 0.0 || shi > 0.0)
        throw NumericError("fit_weibull_mle: profile score has no root in [1e-3, 100]");

    double beta = 1.0;
    int iters = 0;
    for (; iters < opts.max_iterations; ++iters) {
        beta = 0.5 * (lo + hi);
        double s = weibull_profile_score(g, beta);
        if (std::abs(s) < opts.tolerance || hi - lo < 1e-14 * beta) break;
        if (s > 0.0) lo = beta;
        else hi = beta;
    }

    auto n = static_cast<double>(g.size());
    double sum_pow = 0.0, sum_log = 0.0;
    for (double x : g) {
        sum_pow += std::pow(x, beta);
        sum_log += std::log(x);
    }
    double alpha = n / sum_pow;

    WeibullFit fit;
    fit.alpha = alpha;
    fit.beta = beta;
    fit.n = g.size();
    fit.iterations = iters;
    fit.loglik = n * (std::log(alpha) + std::log(beta)) + (beta - 1.0) * sum_log - alpha * sum_pow;
    double score_beta = weibull_profile_score(g, beta);
    double score_alpha = 1.0 / alpha - sum_pow / n;  // zero by construction
    fit.grad_norm = std::hypot(score_alpha, score_beta);
    return fit;
}

namespace {

// ln of the bin-averaged model density, up to the amplitude ln a:
//   avg = [ (lo+g0)^-gamma - (hi+g0)^-gamma ] / ( gamma * (hi - lo) )
// Fitting bin averages rather than densities at the geometric center matters:
// in the steep tail the average over a log-spaced bin sits several percent
// above the center value (Jensen), which otherwise biases both parameters.
double qexp_ln_bin_avg(double lo, double hi, double g0, double gamma) {
    double la = -gamma * std::log(lo + g0);
    double lb = -gamma * std::log(hi + g0);
    return la + std::log1p(-std::exp(lb - la)) - std::log(gamma) - std::log(hi - lo);
}

}  // namespace

QExpFit fit_qexp_nls(const EmpiricalPdf& pdf) {
    std::vector<double> lo, hi, y, w;  // bin edges, ln densities, count weights
    const bool has_edges = pdf.bin_edges.size() == pdf.densities.size() + 1;
    // Weighted least squares with the (expected) bin count as the weight:
    // the log-density variance of a Poisson bin scales as 1/count, so this is
    // the statistically efficient weighting and it defuses the enormous
    // leverage the noisy few-count tail bins would otherwise have. Bins with
    // fewer than 10 expected counts are dropped outright, falling back to all
    // positive-density bins for tiny or exactly tabulated inputs.
    auto collect = [&](double min_count) {
        lo.clear();
        hi.clear();
        y.clear();
        w.clear();
        for (std::size_t i = 0; i < pdf.densities.size(); ++i) {
            if (pdf.densities[i] <= 0.0) continue;
            double count = pdf.densities[i] * static_cast<double>(pdf.n) * pdf.bin_widths[i];
            if (count < min_count) continue;
            if (has_edges) {
                lo.push_back(pdf.bin_edges[i]);
                hi.push_back(pdf.bin_edges[i + 1]);
            } else {
                // recover geometric-center edges: sqrt(l*h) = c, h - l = width
                double c = pdf.bin_centers[i], width = pdf.bin_widths[i];
                double l = 0.5 * (std::sqrt(width * width + 4.0 * c * c) - width);
                lo.push_back(l);
                hi.push_back(l + width);
            }
            y.push_back(std::log(pdf.densities[i]));
            w.push_back(count);
        }
    };
    collect(10.0);
    if (y.size() < 10) collect(0.0);
    if (y.size() < 10) throw DataError("fit_qexp_nls: fewer than 10 positive-density bins");
    double wsum = 0.0;
    for (double x : w) wsum += x;

    // Weighted SSE with ln a profiled out: u_i = y_i - ln avg_i(g0, gamma),
    // ln a = weighted mean of u.
    auto sse_at = [&](double g0, double gamma, double* lna_out = nullptr) {
        double su = 0.0;
        std::vector<double> u(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            u[i] = y[i] - qexp_ln_bin_avg(lo[i], hi[i], g0, gamma);
            su += w[i] * u[i];
        }
        double ubar = su / wsum;
        double sse = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double r = u[i] - ubar;
            sse += w[i] * r * r;
        }
        if (lna_out) *lna_out = ubar;
        return sse;
    };

    // Damped Gauss-Newton in (ln g0, ln gamma), forward-difference Jacobian.
    auto refine = [&](double g0, double gamma, int& iters_out) {
        double v0 = std::log(g0), v1 = std::log(gamma);
        double sse = sse_at(std::exp(v0), std::exp(v1));
        double lambda = 1e-3;
        int it = 0;
        for (; it < 500; ++it) {
            double eg0 = std::exp(v0), egamma = std::exp(v1);
            const double step = 1e-6;
            double su = 0.0, sj0 = 0.0, sj1 = 0.0;
            std::vector<double> u(y.size()), j0(y.size()), j1(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) {
                double m = qexp_ln_bin_avg(lo[i], hi[i], eg0, egamma);
                u[i] = y[i] - m;
                j0[i] = -(qexp_ln_bin_avg(lo[i], hi[i], eg0 * std::exp(step), egamma) - m) / step;
                j1[i] = -(qexp_ln_bin_avg(lo[i], hi[i], eg0, egamma * std::exp(step)) - m) / step;
                su += w[i] * u[i];
                sj0 += w[i] * j0[i];
                sj1 += w[i] * j1[i];
            }
            double ubar = su / wsum, j0bar = sj0 / wsum, j1bar = sj1 / wsum;
            double a00 = 0, a01 = 0, a11 = 0, b0 = 0, b1 = 0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                double r = u[i] - ubar, d0 = j0[i] - j0bar, d1 = j1[i] - j1bar;
                a00 += w[i] * d0 * d0;
                a01 += w[i] * d0 * d1;
                a11 += w[i] * d1 * d1;
                b0 += w[i] * d0 * r;
                b1 += w[i] * d1 * r;
            }
            bool improved = false;
            for (int tries = 0; tries < 20; ++tries) {
                double m00 = a00 + lambda * (a00 + 1e-12);
                double m11 = a11 + lambda * (a11 + 1e-12);
                double det = m00 * m11 - a01 * a01;
                if (det == 0.0) break;
                double d0 = (-b0 * m11 + b1 * a01) / det;
                double d1 = (-b1 * m00 + b0 * a01) / det;
                // box-constrain the parameters: far outside this range the
                // huge (gamma+1)*ln(c+g0) terms lose the residual digits to
                // cancellation and the SSE becomes meaningless
                double w0 = std::clamp(v0 + d0, std::log(1e-8), std::log(1e8));
                double w1 = std::clamp(v1 + d1, std::log(1e-4), std::log(1e4));
                double trial = sse_at(std::exp(w0), std::exp(w1));
                if (trial < sse) {
                    double rel = (sse - trial) / std::max(sse, 1e-300);
                    v0 = w0;
                    v1 = w1;
                    sse = trial;
                    lambda = std::max(lambda * 0.3, 1e-12);
                    improved = true;
                    if (rel < 1e-10) it = 500;
                    break;
                }
                lambda *= 10.0;
            }
            if (!improved) break;
        }
        iters_out = std::min(it, 500);
        return std::array<double, 3>{std::exp(v0), std::exp(v1), sse};
    };

    // 5x5 multi-start: g0 log-spaced in [0.1, 20], gamma linear in [1, 10].
    QExpFit best;
    best.sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 5; ++i) {
        double g0 = 0.1 * std::pow(200.0, i / 4.0);
        for (int j = 0; j < 5; ++j) {
            double gamma = 1.0 + 9.0 * j / 4.0;
            int iters = 0;
            auto [rg0, rgamma, sse] = refine(g0, gamma, iters);
            if (sse < best.sse) {
                best.g0 = rg0;
                best.gamma = rgamma;
                best.sse = sse;
                best.iterations = iters;
            }
        }
    }
    if (!std::isfinite(best.sse)) throw NumericError("fit_qexp_nls: optimizer failed to converge");
    double lna = 0.0;
    sse_at(best.g0, best.gamma, &lna);
    best.a = std::exp(lna);
    return best;
}

FitComparison compare_fits(const EmpiricalPdf& pdf, const WeibullFit& wfit, const QExpFit& qfit) {
    struct Acc {
        double w = 0.0, q = 0.0;
        int bins = 0;
    };
    std::vector<int> decades;
    std::vector<Acc> accs;
    constexpr double log10e = 0.4342944819032518;
    for (std::size_t i = 0; i < pdf.densities.size(); ++i) {
        if (pdf.densities[i] <= 0.0) continue;
        double g = pdf.bin_centers[i];
        int dec = static_cast<int>(std::floor(std::log10(g)));
        double ld = std::log10(pdf.densities[i]);
        double lw = weibull_log_density(g, wfit.alpha, wfit.beta) * log10e;
        double lq = qexp_log_density(g, qfit.a, qfit.g0, qfit.gamma) * log10e;
        auto it = std::find(decades.begin(), decades.end(), dec);
        std::size_t k;
        if (it == decades.end()) {
            decades.push_back(dec);
            accs.push_back({});
            k = decades.size() - 1;
        } else {
            k = static_cast<std::size_t>(it - decades.begin());
        }
        accs[k].w += std::abs(ld - lw);
        accs[k].q += std::abs(ld - lq);
        accs[k].bins += 1;
    }
    FitComparison cmp;
    for (std::size_t k = 0; k < decades.size(); ++k) {
        DecadeError e;
        e.decade_lo = std::pow(10.0, decades[k]);
        e.weibull_mae = accs[k].w / accs[k].bins;
        e.qexp_mae = accs[k].q / accs[k].bins;
        e.bins = accs[k].bins;
        cmp.decades.push_back(e);
    }
    std::sort(cmp.decades.begin(), cmp.decades.end(),
              [](const DecadeError& a, const DecadeError& b) { return a.decade_lo < b.decade_lo; });
    if (!cmp.decades.empty()) {
        const auto& body = cmp.decades.front();
        const auto& tail = cmp.decades.back();
        cmp.body_winner = body.weibull_mae <= body.qexp_mae ? "weibull" : "qexp";
        cmp.tail_winner = tail.weibull_mae <= tail.qexp_mae ? "weibull" : "qexp";
    }
    return cmp;
}

}  // namespace itd
