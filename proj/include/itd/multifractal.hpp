#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "itd/scaling.hpp"

namespace itd {

/// 41 points, q in [-4, 4] with step 0.2 (q = 0 uses the logarithmic form).
std::vector<double> default_q_grid();

struct MultifractalResult {
    std::vector<double> q;
    std::vector<double> h;        // generalized Hurst exponents
    std::vector<double> tau;      // q*h(q) - 1
    std::vector<double> alpha;    // d tau / d q (central differences)
    std::vector<double> f_alpha;  // q*alpha - tau
    std::vector<double> e_rms;    // per-q log-log fit residual
    std::vector<double> h_ci;     // per-q slope 95% CI half-width
    std::string detrender;
    std::vector<int> scales;
    bool concave = true;            // tau concavity flag (tolerance 1e-6)
    bool h_monotone = true;         // h non-increasing in q (tolerance 1e-3)
    std::uint64_t series_hash = 0;
    std::vector<std::string> warnings;
};

/// qth-order fluctuation at one scale.
double fq(const std::vector<double>& series, int s, double q, const Detrender& d,
          ProfileKind profile = ProfileKind::MeanRemoved);

/// h(q) over the grids. Per-box fluctuations are computed once per scale and
/// reused across all q values. Use ProfileKind::RawCumsum for multiplicative
/// measures analyzed with DMA detrending (see scaling.hpp).
MultifractalResult generalized_hurst(const std::vector<double>& series,
                                     const std::vector<int>& s_grid,
                                     const std::vector<double>& q_grid,
                                     const Detrender& d, int threads = 1,
                                     ProfileKind profile = ProfileKind::MeanRemoved);

std::vector<double> mass_exponents(const std::vector<double>& h,
                                   const std::vector<double>& q_grid);

/// Legendre transform by finite differences; fills alpha and f_alpha and
/// re-checks concavity. Safe to call on an externally assembled result.
void legendre_spectrum(MultifractalResult& result);

double spectrum_width(const MultifractalResult& result);

}  // namespace itd
