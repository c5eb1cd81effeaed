#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "itd/stats_core.hpp"

namespace itd {

/// Weibull density p(g) = alpha * beta * g^(beta-1) * exp(-alpha * g^beta).
struct WeibullFit {
    double alpha = 0.0;
    double beta = 0.0;
    double loglik = 0.0;
    std::size_t n = 0;
    double grad_norm = 0.0;  // per-observation gradient norm at the optimum
    int iterations = 0;
};

/// Shifted power law p(g) = a * (g + g0)^-(gamma+1).
struct QExpFit {
    double a = 0.0;
    double g0 = 0.0;
    double gamma = 0.0;
    double sse = 0.0;  // residual sum of squares in log density
    int iterations = 0;
};

struct WeibullOptions {
    std::size_t min_positive = 100;
    int max_iterations = 200;
    double tolerance = 1e-12;  // on the per-observation score
};

/// Maximum likelihood on the positive part of the sample; beta by a 1-D
/// root find on the profile score, alpha = n / sum(g^beta) in closed form.
WeibullFit fit_weibull_mle(const ScaledSample& sample, const WeibullOptions& opts = {});

double weibull_log_density(double g, double alpha, double beta);
double qexp_log_density(double g, double a, double g0, double gamma);

/// Nonlinear least squares of log density against log-binned empirical
/// densities; `a` is profiled in closed form, (g0, gamma) by damped
/// Gauss-Newton from a multi-start grid.
QExpFit fit_qexp_nls(const EmpiricalPdf& pdf);

struct DecadeError {
    double decade_lo = 0.0;   // lower edge of the decade, in g
    double weibull_mae = 0.0; // mean |log10 rho_emp - log10 rho_model|
    double qexp_mae = 0.0;
    int bins = 0;
};

struct FitComparison {
    std::vector<DecadeError> decades;
    std::string body_winner;  // lowest decade with data
    std::string tail_winner;  // highest decade with data
};

FitComparison compare_fits(const EmpiricalPdf& pdf, const WeibullFit& wfit,
                           const QExpFit& qfit);

}  // namespace itd
