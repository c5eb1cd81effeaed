#include "itd/multifractal.hpp"

#include <algorithm>
#include <cmath>

namespace itd {

std::vector<double> default_q_grid() {
    std::vector<double> q;
    for (int k = -20; k <= 20; ++k) q.push_back(k / 5.0);
    q[20] = 0.0;
    return q;
}

double fq(const std::vector<double>& series, int s, double q, const Detrender& d,
          ProfileKind kind) {
    Profile profile = build_profile(series, kind);
    return aggregate_fq(box_fluctuations(profile, s, d), q);
}

MultifractalResult generalized_hurst(const std::vector<double>& series,
                                     const std::vector<int>& s_grid,
                                     const std::vector<double>& q_grid, const Detrender& d,
                                     int threads, ProfileKind kind) {
    if (q_grid.size() < 2) throw UsageError("generalized_hurst: need >= 2 q values");
    for (std::size_t i = 1; i < q_grid.size(); ++i)
        if (q_grid[i] <= q_grid[i - 1])
            throw UsageError("generalized_hurst: q grid must be strictly increasing");
    if (s_grid.size() < 10) throw UsageError("generalized_hurst: need >= 10 scales");

    Profile profile = build_profile(series, kind);

    // F_q(s) lattice; detrended box fluctuations computed once per scale.
    const std::size_t ns = s_grid.size(), nq = q_grid.size();
    std::vector<double> lattice(ns * nq);
    parallel_for(ns, threads, [&](std::size_t k) {
        std::vector<double> fv = box_fluctuations(profile, s_grid[k], d);
        if (fv.size() < 4)
            throw NumericError("generalized_hurst: fewer than 4 boxes at scale " +
                               std::to_string(s_grid[k]));
        std::vector<double> lf = log_fluctuations(fv);
        for (std::size_t j = 0; j < nq; ++j)
            lattice[k * nq + j] = aggregate_fq_from_logs(lf, q_grid[j]);
    });

    MultifractalResult res;
    res.q = q_grid;
    res.detrender = detrender_tag(d);
    res.scales = s_grid;
    res.series_hash = hash_series(series);

    std::vector<double> lx(ns);
    for (std::size_t k = 0; k < ns; ++k) lx[k] = std::log10(static_cast<double>(s_grid[k]));
    for (std::size_t j = 0; j < nq; ++j) {
        std::vector<double> ly(ns);
        for (std::size_t k = 0; k < ns; ++k) {
            double f = lattice[k * nq + j];
            if (f <= 0.0)
                throw NumericError("generalized_hurst: nonpositive F_q at scale " +
                                   std::to_string(s_grid[k]));
            ly[k] = std::log10(f);
        }
        OlsFit fit = ols_loglog(lx, ly);
        res.h.push_back(fit.slope);
        res.e_rms.push_back(fit.rms_residual);
        res.h_ci.push_back(fit.slope_ci95);
    }

    for (std::size_t j = 1; j < nq; ++j)
        if (res.h[j] > res.h[j - 1] + 1e-3) res.h_monotone = false;
    if (!res.h_monotone)
        res.warnings.push_back("h(q) is not non-increasing; estimate may be unreliable");

    res.tau = mass_exponents(res.h, res.q);
    legendre_spectrum(res);
    return res;
}

std::vector<double> mass_exponents(const std::vector<double>& h,
                                   const std::vector<double>& q_grid) {
    if (h.size() != q_grid.size()) throw UsageError("mass_exponents: size mismatch");
    std::vector<double> tau(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) {
        if (!std::isfinite(h[j])) throw NumericError("mass_exponents: non-finite h(q)");
        tau[j] = q_grid[j] * h[j] - 1.0;  // D_f = 1 for time series
    }
    return tau;
}

void legendre_spectrum(MultifractalResult& result) {
    const std::size_t n = result.q.size();
    if (n < 5) throw UsageError("legendre_spectrum: need >= 5 q points");
    if (result.tau.size() != n) throw UsageError("legendre_spectrum: tau/q size mismatch");

    result.alpha.assign(n, 0.0);
    result.f_alpha.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double da;
        if (j == 0)
            da = (result.tau[1] - result.tau[0]) / (result.q[1] - result.q[0]);
        else if (j == n - 1)
            da = (result.tau[n - 1] - result.tau[n - 2]) / (result.q[n - 1] - result.q[n - 2]);
        else
            da = (result.tau[j + 1] - result.tau[j - 1]) / (result.q[j + 1] - result.q[j - 1]);
        result.alpha[j] = da;
        result.f_alpha[j] = result.q[j] * da - result.tau[j];
    }

    result.concave = true;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        double d2 = (result.tau[j + 1] - result.tau[j]) / (result.q[j + 1] - result.q[j]) -
                    (result.tau[j] - result.tau[j - 1]) / (result.q[j] - result.q[j - 1]);
        if (d2 > 1e-6) result.concave = false;
    }
    if (!result.concave)
        result.warnings.push_back("tau(q) is not concave; spectrum may look multivalued");
}

double spectrum_width(const MultifractalResult& result) {
    if (result.alpha.empty()) throw UsageError("spectrum_width: spectrum not computed");
    auto [lo, hi] = std::minmax_element(result.alpha.begin(), result.alpha.end());
    return *hi - *lo;
}

}  // namespace itd
