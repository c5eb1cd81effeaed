#include "itd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include <fftw3.h>

namespace itd {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// FFTW planning is not thread-safe.
std::mutex& fftw_plan_mutex() {
    static std::mutex mu;
    return mu;
}

struct FftwBuffer {
    fftw_complex* data = nullptr;
    explicit FftwBuffer(std::size_t n) {
        data = fftw_alloc_complex(n);
        if (!data) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

}  // namespace

double fgn_autocovariance(double hurst, std::size_t lag) {
    const double h2 = 2.0 * hurst;
    const auto k = static_cast<double>(lag);
    if (lag == 0) return 1.0;
    return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(k - 1.0, h2));
}

std::vector<double> gen_fgn(double hurst, std::size_t n, std::uint64_t seed) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw UsageError("gen_fgn: Hurst must be in (0,1)");
    if (!is_power_of_two(n)) throw UsageError("gen_fgn: N must be a power of two");
    if (n < 2) throw UsageError("gen_fgn: N must be >= 2");

    const std::size_t m = 2 * n;

    // Eigenvalues of the circulant embedding = DFT of the wrapped covariance.
    FftwBuffer cov(m), eig(m);
    for (std::size_t k = 0; k <= n; ++k) {
        cov.data[k][0] = fgn_autocovariance(hurst, k);
        cov.data[k][1] = 0.0;
    }
    for (std::size_t k = n + 1; k < m; ++k) {
        cov.data[k][0] = cov.data[m - k][0];
        cov.data[k][1] = 0.0;
    }
    fftw_plan plan_eig;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan_eig = fftw_plan_dft_1d(static_cast<int>(m), cov.data, eig.data, FFTW_FORWARD,
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan_eig);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan_eig);
    }

    std::vector<double> lambda(m);
    for (std::size_t k = 0; k < m; ++k) {
        double v = eig.data[k][0];
        if (v < -1e-9 * static_cast<double>(m))
            throw NumericError("gen_fgn: circulant embedding not positive semidefinite");
        lambda[k] = std::max(v, 0.0);
    }

    // Hermitian-symmetric Gaussian spectrum; draw order is fixed (k = 0, N,
    // then pairs 1..N-1) so streams reproduce exactly from the seed.
    Rng rng(seed);
    FftwBuffer spec(m), out(m);
    spec.data[0][0] = std::sqrt(lambda[0]) * rng.normal();
    spec.data[0][1] = 0.0;
    spec.data[n][0] = std::sqrt(lambda[n]) * rng.normal();
    spec.data[n][1] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        double a = rng.normal();
        double b = rng.normal();
        double scale = std::sqrt(lambda[k] / 2.0);
        spec.data[k][0] = scale * a;
        spec.data[k][1] = scale * b;
        spec.data[m - k][0] = scale * a;
        spec.data[m - k][1] = -scale * b;
    }

    fftw_plan plan_out;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan_out = fftw_plan_dft_1d(static_cast<int>(m), spec.data, out.data, FFTW_FORWARD,
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan_out);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan_out);
    }

    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    std::vector<double> series(n);
    for (std::size_t i = 0; i < n; ++i) series[i] = out.data[i][0] * norm;
    return series;
}

std::vector<double> gen_binomial_cascade(double p, int k) {
    if (!(p > 0.0 && p < 1.0)) throw UsageError("gen_binomial_cascade: p must be in (0,1)");
    if (k < 1 || k > 24) throw UsageError("gen_binomial_cascade: k must be in [1,24]");
    std::vector<double> mass{1.0};
    for (int level = 0; level < k; ++level) {
        std::vector<double> next(mass.size() * 2);
        for (std::size_t i = 0; i < mass.size(); ++i) {
            next[2 * i] = mass[i] * p;
            next[2 * i + 1] = mass[i] * (1.0 - p);
        }
        mass = std::move(next);
    }
    return mass;
}

double binomial_tau(double p, double q) {
    return -std::log2(std::pow(p, q) + std::pow(1.0 - p, q));
}

double binomial_hq(double p, double q) {
    if (std::abs(q) < 1e-12) {
        // tau'(0): limit of (tau(q)+1)/q as q -> 0.
        constexpr double ln2 = 0.6931471805599453;
        return -(std::log(p) + std::log(1.0 - p)) / (2.0 * ln2);
    }
    return (binomial_tau(p, q) + 1.0) / q;
}

std::vector<double> shuffled(const std::vector<double>& series, std::uint64_t seed) {
    if (series.empty()) throw DataError("shuffled: empty series");
    std::vector<double> out = series;
    Rng rng(seed);
    for (std::size_t i = out.size() - 1; i > 0; --i)
        std::swap(out[i], out[rng.bounded(i + 1)]);
    return out;
}

std::vector<double> gen_iid_gaussian(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = rng.normal();
    return out;
}

std::vector<double> gen_iid_exponential(double rate, std::size_t n, std::uint64_t seed) {
    if (rate <= 0.0) throw UsageError("gen_iid_exponential: rate must be positive");
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = -std::log(rng.uniform_open()) / rate;
    return out;
}

std::vector<double> gen_iid_weibull(double alpha, double beta, std::size_t n,
                                    std::uint64_t seed) {
    if (alpha <= 0.0 || beta <= 0.0) throw UsageError("gen_iid_weibull: invalid parameters");
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& x : out)
        x = std::pow(-std::log(rng.uniform_open()) / alpha, 1.0 / beta);
    return out;
}

std::vector<double> gen_iid_qexp(double g0, double gamma, std::size_t n, std::uint64_t seed) {
    if (g0 <= 0.0 || gamma <= 0.0) throw UsageError("gen_iid_qexp: invalid parameters");
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& x : out)
        x = g0 * (std::pow(rng.uniform_open(), -1.0 / gamma) - 1.0);
    return out;
}

}  // namespace itd
