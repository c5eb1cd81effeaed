#include "itd/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

namespace itd {

Profile build_profile(const std::vector<double>& series, ProfileKind kind) {
    if (series.size() < 2) throw DataError("build_profile: series length < 2");
    long double m = 0.0L;
    if (kind == ProfileKind::MeanRemoved) {
        long double sum = 0.0L;
        for (double v : series) sum += v;
        m = sum / static_cast<long double>(series.size());
    }
    Profile p;
    p.y.resize(series.size());
    long double acc = 0.0L;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += static_cast<long double>(series[i]) - m;
        p.y[i] = static_cast<double>(acc);
    }
    return p;
}

std::string detrender_tag(const Detrender& d) {
    if (const auto* dfa = std::get_if<DfaDetrender>(&d))
        return "dfa(m=" + std::to_string(dfa->order) + ")";
    const auto& dma = std::get<DmaDetrender>(d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "dma(theta=%g)", dma.theta);
    return buf;
}

namespace {

// Least-squares polynomial context for one (s, order): x grid normalized to
// [-1, 1], normal matrix factored once and reused for every box.
class PolyFitContext {
public:
    PolyFitContext(int s, int order) : s_(s), m_(order) {
        xpow_.resize(static_cast<std::size_t>(s) * static_cast<std::size_t>(m_ + 1));
        for (int t = 0; t < s; ++t) {
            double x = s == 1 ? 0.0 : 2.0 * t / (s - 1) - 1.0;
            double p = 1.0;
            for (int j = 0; j <= m_; ++j) {
                xpow_[static_cast<std::size_t>(t) * (m_ + 1) + j] = p;
                p *= x;
            }
        }
        // Normal matrix A[j][k] = sum_t x^(j+k).
        int dim = m_ + 1;
        a_.assign(static_cast<std::size_t>(dim) * dim, 0.0L);
        std::vector<long double> psum(static_cast<std::size_t>(2 * m_ + 1), 0.0L);
        for (int t = 0; t < s; ++t) {
            long double x = s == 1 ? 0.0L : 2.0L * t / (s - 1) - 1.0L;
            long double p = 1.0L;
            for (int j = 0; j <= 2 * m_; ++j) {
                psum[static_cast<std::size_t>(j)] += p;
                p *= x;
            }
        }
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                a_[static_cast<std::size_t>(j) * dim + k] = psum[static_cast<std::size_t>(j + k)];
    }

    // Mean squared residual of the degree-m fit over y[0..s).
    double mean_sq_residual(const double* y) const {
        int dim = m_ + 1;
        long double b[8] = {};
        for (int t = 0; t < s_; ++t) {
            const double* xp = &xpow_[static_cast<std::size_t>(t) * dim];
            for (int j = 0; j < dim; ++j) b[j] += static_cast<long double>(xp[j]) * y[t];
        }
        // Solve A c = b by Gaussian elimination with partial pivoting.
        long double mat[8][9];
        for (int j = 0; j < dim; ++j) {
            for (int k = 0; k < dim; ++k) mat[j][k] = a_[static_cast<std::size_t>(j) * dim + k];
            mat[j][dim] = b[j];
        }
        for (int col = 0; col < dim; ++col) {
            int piv = col;
            for (int r = col + 1; r < dim; ++r)
                if (std::abs(static_cast<double>(mat[r][col])) >
                    std::abs(static_cast<double>(mat[piv][col])))
                    piv = r;
            if (piv != col)
                for (int k = 0; k <= dim; ++k) std::swap(mat[col][k], mat[piv][k]);
            for (int r = col + 1; r < dim; ++r) {
                long double f = mat[r][col] / mat[col][col];
                for (int k = col; k <= dim; ++k) mat[r][k] -= f * mat[col][k];
            }
        }
        long double c[8];
        for (int j = dim - 1; j >= 0; --j) {
            long double v = mat[j][dim];
            for (int k = j + 1; k < dim; ++k) v -= mat[j][k] * c[k];
            c[j] = v / mat[j][j];
        }
        long double ss = 0.0L;
        for (int t = 0; t < s_; ++t) {
            const double* xp = &xpow_[static_cast<std::size_t>(t) * dim];
            long double fit = 0.0L;
            for (int j = 0; j < dim; ++j) fit += c[j] * xp[j];
            long double r = static_cast<long double>(y[t]) - fit;
            ss += r * r;
        }
        return static_cast<double>(ss / s_);
    }

private:
    int s_;
    int m_;
    std::vector<double> xpow_;
    std::vector<long double> a_;
};

// Disjoint size-s boxes over data[0..n): floor(n/s) from the left and, when
// s does not divide n, the same count again anchored at the right end.
template <typename PerBox>
void for_each_box(std::size_t n, int s, PerBox&& per_box) {
    const std::size_t su = static_cast<std::size_t>(s);
    const std::size_t ns = n / su;
    for (std::size_t v = 0; v < ns; ++v) per_box(v * su);
    if (ns * su != n) {
        const std::size_t r0 = n - ns * su;
        for (std::size_t v = 0; v < ns; ++v) per_box(r0 + v * su);
    }
}

std::vector<double> dfa_box_fluctuations(const Profile& profile, int s, int order) {
    const std::size_t n = profile.size();
    if (order < 1 || order > 3) throw UsageError("dfa: polynomial order must be in [1,3]");
    if (s < 2 * order + 2 || static_cast<std::size_t>(s) > n / 2)
        throw UsageError("dfa: box size " + std::to_string(s) + " out of [2m+2, N/2]");
    PolyFitContext ctx(s, order);
    std::vector<double> fv;
    fv.reserve(2 * (n / static_cast<std::size_t>(s)));
    for_each_box(n, s, [&](std::size_t start) {
        fv.push_back(std::sqrt(ctx.mean_sq_residual(&profile.y[start])));
    });
    return fv;
}

std::vector<double> dma_box_fluctuations(const Profile& profile, int s, double theta) {
    const std::size_t n = profile.size();
    if (s < 2) throw UsageError("dma: window size must be >= 2");
    if (theta < 0.0 || theta > 1.0) throw UsageError("dma: theta must be in [0,1]");
    if (static_cast<std::size_t>(s) > n)
        throw UsageError("dma: window larger than series");

    const int fwd = static_cast<int>(std::floor((s - 1) * theta));   // points in the future
    const int back = s - 1 - fwd;                                    // points in the past
    // Valid 1-based range: s - fwd <= i <= N - fwd.
    const std::size_t first = static_cast<std::size_t>(s - fwd) - 1;  // 0-based
    const std::size_t last = n - static_cast<std::size_t>(fwd) - 1;
    if (last < first) throw UsageError("dma: empty residual support");

    std::vector<long double> prefix(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + profile.y[i];

    const std::size_t m = last - first + 1;
    std::vector<double> residuals(m);
    for (std::size_t i = first; i <= last; ++i) {
        // Window covers y[i-back .. i+fwd].
        const std::size_t lo = i - static_cast<std::size_t>(back);
        const std::size_t hi = i + static_cast<std::size_t>(fwd);
        long double ma = (prefix[hi + 1] - prefix[lo]) / s;
        residuals[i - first] = static_cast<double>(static_cast<long double>(profile.y[i]) - ma);
    }

    if (m < static_cast<std::size_t>(s)) throw UsageError("dma: residual support shorter than s");
    std::vector<double> fv;
    fv.reserve(2 * (m / static_cast<std::size_t>(s)));
    for_each_box(m, s, [&](std::size_t start) {
        long double ss = 0.0L;
        for (int t = 0; t < s; ++t) {
            long double r = residuals[start + static_cast<std::size_t>(t)];
            ss += r * r;
        }
        fv.push_back(std::sqrt(static_cast<double>(ss / s)));
    });
    return fv;
}

}  // namespace

std::vector<double> box_fluctuations(const Profile& profile, int s, const Detrender& d) {
    if (const auto* dfa = std::get_if<DfaDetrender>(&d))
        return dfa_box_fluctuations(profile, s, dfa->order);
    return dma_box_fluctuations(profile, s, std::get<DmaDetrender>(d).theta);
}

std::vector<double> log_fluctuations(const std::vector<double>& fv) {
    std::vector<double> lf(fv.size());
    for (std::size_t v = 0; v < fv.size(); ++v)
        lf[v] = fv[v] > 0.0 ? std::log(fv[v]) : -std::numeric_limits<double>::infinity();
    return lf;
}

double aggregate_fq_from_logs(const std::vector<double>& lf, double q) {
    if (lf.empty()) throw NumericError("aggregate_fq: no boxes");
    const auto ns = static_cast<double>(lf.size());
    if (q == 0.0) {
        long double acc = 0.0L;
        for (std::size_t v = 0; v < lf.size(); ++v) {
            if (!std::isfinite(lf[v]))
                throw NumericError("aggregate_fq: zero local fluctuation in box " +
                                   std::to_string(v) + " poisons q=0");
            acc += lf[v];
        }
        return static_cast<double>(std::exp(acc / ns));
    }
    if (q < 0.0) {
        for (std::size_t v = 0; v < lf.size(); ++v)
            if (!std::isfinite(lf[v]))
                throw NumericError("aggregate_fq: zero local fluctuation in box " +
                                   std::to_string(v) + " poisons q=" + std::to_string(q));
    }
    // exp(q * ln f) instead of pow(f, q): the logs are computed once per box
    // and shared by a whole q sweep (exp(q * -inf) = 0 matches pow(0, q>0))
    long double acc = 0.0L;
    for (double l : lf) acc += std::exp(q * l);
    return static_cast<double>(std::pow(acc / ns, 1.0L / static_cast<long double>(q)));
}

double aggregate_fq(const std::vector<double>& fv, double q) {
    return aggregate_fq_from_logs(log_fluctuations(fv), q);
}

double dfa_fluctuation(const Profile& profile, int s, int order) {
    return aggregate_fq(dfa_box_fluctuations(profile, s, order), 2.0);
}

double dma_fluctuation(const Profile& profile, int s, double theta) {
    return aggregate_fq(dma_box_fluctuations(profile, s, theta), 2.0);
}

std::vector<int> default_scale_grid(std::size_t n, int s_min, int count) {
    const auto s_max = static_cast<int>(n / 4);
    if (s_max < s_min) throw UsageError("scale grid: series too short for s_min");
    std::vector<int> grid;
    const double ratio = std::log(static_cast<double>(s_max) / s_min);
    for (int k = 0; k < count; ++k) {
        double f = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
        int s = static_cast<int>(std::lround(s_min * std::exp(ratio * f)));
        s = std::clamp(s, s_min, s_max);
        if (grid.empty() || s != grid.back()) grid.push_back(s);
    }
    return grid;
}

OlsFit ols_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) throw NumericError("ols: need >= 3 points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw NumericError("ols: degenerate abscissa");
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - fit.intercept - fit.slope * x[i];
        ssr += r * r;
    }
    fit.rms_residual = std::sqrt(ssr / static_cast<double>(n));
    const auto dof = static_cast<double>(n - 2);
    double se = std::sqrt(ssr / dof / sxx);
    boost::math::students_t dist(dof);
    fit.slope_ci95 = boost::math::quantile(dist, 0.975) * se;
    return fit;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const auto nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += nthreads) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

FluctuationCurve estimate_hurst(const std::vector<double>& series,
                                const std::vector<int>& s_grid, const Detrender& d,
                                int threads, ProfileKind kind) {
    if (s_grid.size() < 10) throw UsageError("estimate_hurst: need >= 10 scales");
    Profile profile = build_profile(series, kind);
    const std::size_t n = profile.size();
    for (int s : s_grid)
        if (static_cast<std::size_t>(s) > n / 4)
            throw UsageError("estimate_hurst: scale " + std::to_string(s) + " exceeds N/4");

    std::vector<double> F(s_grid.size());
    parallel_for(s_grid.size(), threads, [&](std::size_t k) {
        F[k] = aggregate_fq(box_fluctuations(profile, s_grid[k], d), 2.0);
    });

    FluctuationCurve curve;
    curve.method = detrender_tag(d);
    curve.series_hash = hash_series(series);
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        if (F[k] <= 0.0) {
            curve.warnings.push_back("dropped scale " + std::to_string(s_grid[k]) +
                                     ": zero fluctuation");
            continue;
        }
        curve.scales.push_back(s_grid[k]);
        curve.F.push_back(F[k]);
        lx.push_back(std::log10(static_cast<double>(s_grid[k])));
        ly.push_back(std::log10(F[k]));
    }
    if (curve.scales.size() < 10)
        throw NumericError("estimate_hurst: fewer than 10 usable scales");
    OlsFit fit = ols_loglog(lx, ly);
    curve.H = fit.slope;
    curve.H_ci = fit.slope_ci95;
    curve.E_rms = fit.rms_residual;
    return curve;
}

std::pair<double, double> exponent_relations(double H) {
    if (!std::isfinite(H)) throw NumericError("exponent_relations: H not finite");
    return {2.0 * H - 1.0, 2.0 - 2.0 * H};
}

}  // namespace itd
