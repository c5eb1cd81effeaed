#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "itd/common.hpp"

namespace itd {

/// Cumulative sum of the mean-removed series; the object every detrending
/// method operates on.
struct Profile {
    std::vector<double> y;
    std::size_t size() const { return y.size(); }
};

/// Profile convention. MeanRemoved (the default) is required for noise-like
/// series: a nonzero series mean becomes a linear profile trend that the
/// moving average cannot absorb (a constant (s-1)*theta'-style offset per
/// residual). RawCumsum is the reference construction for singular measures
/// such as multiplicative cascades, where subtracting the mean injects a
/// spurious smooth component that floors the small-box fluctuations and
/// wrecks the negative-q moments under DMA. Polynomial (DFA) detrending of
/// order >= 1 absorbs the difference, so the choice only matters for DMA.
enum class ProfileKind { MeanRemoved, RawCumsum };

Profile build_profile(const std::vector<double>& series,
                      ProfileKind kind = ProfileKind::MeanRemoved);

/// Box-wise polynomial detrending of degree `order`.
struct DfaDetrender {
    int order = 1;
};

/// Moving-average detrending with position parameter theta in [0,1]
/// (0 backward, 0.5 centered, 1 forward).
struct DmaDetrender {
    double theta = 0.0;
};

using Detrender = std::variant<DfaDetrender, DmaDetrender>;

std::string detrender_tag(const Detrender& d);

/// Local r.m.s. fluctuations f_v(s), one per box.
///
/// DFA: the profile is covered by floor(N/s) boxes from the left; when s
/// does not divide N the coverage is repeated from the right end, giving
/// 2*Ns boxes (left boxes first, then right boxes — this fixed order is the
/// documented summation order for determinism).
///
/// DMA: residuals y - moving_average over their valid index range, then the
/// same box coverage applied to the residual support.
std::vector<double> box_fluctuations(const Profile& profile, int s, const Detrender& d);

/// Eq-style aggregation over boxes: (mean f_v^q)^(1/q); geometric mean at
/// q = 0. Shared with the multifractal module so that q = 2 is bitwise
/// identical to the plain fluctuation.
double aggregate_fq(const std::vector<double>& fv, double q);

/// ln f_v per box (-infinity encodes f_v = 0), and the same aggregation from
/// those precomputed logs: hoisting the logarithms out of a q sweep lets the
/// multifractal lattice reuse them across all moment orders. aggregate_fq is
/// the composition of the two, so results stay bitwise identical.
std::vector<double> log_fluctuations(const std::vector<double>& fv);
double aggregate_fq_from_logs(const std::vector<double>& lf, double q);

double dfa_fluctuation(const Profile& profile, int s, int order = 1);
double dma_fluctuation(const Profile& profile, int s, double theta = 0.0);

/// `count` geometrically spaced integer scales in [s_min, n/4], deduplicated.
std::vector<int> default_scale_grid(std::size_t n, int s_min = 20, int count = 30);

struct FluctuationCurve {
    std::vector<int> scales;
    std::vector<double> F;
    double H = 0.0;
    double H_ci = 0.0;   // half-width of the 95% CI of the regression slope
    double E_rms = 0.0;  // r.m.s. residual of the log-log fit
    std::string method;  // e.g. "dfa(m=1)" or "dma(theta=0)"
    std::vector<std::string> warnings;
    std::uint64_t series_hash = 0;
};

/// Fluctuation function over a scale grid plus the log-log OLS exponent.
/// Scales with F(s) = 0 are dropped with a warning; fewer than 10 surviving
/// scales is an error.
FluctuationCurve estimate_hurst(const std::vector<double>& series,
                                const std::vector<int>& s_grid, const Detrender& d,
                                int threads = 1,
                                ProfileKind profile = ProfileKind::MeanRemoved);

/// Power-spectrum and autocorrelation exponents (2H-1, 2-2H).
std::pair<double, double> exponent_relations(double H);

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_ci95 = 0.0;
    double rms_residual = 0.0;
};

OlsFit ols_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Deterministic static-partition parallel for; results must be written to
/// disjoint slots by index.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace itd
