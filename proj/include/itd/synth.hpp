#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "itd/common.hpp"

namespace itd {

/// Exact fractional Gaussian noise by circulant embedding (Davies-Harte).
/// N must be a power of two; the output is stationary Gaussian with the
/// analytic fGn autocovariance for Hurst exponent `hurst` and unit variance.
/// Randomness comes from the splitmix64 stream documented in common.hpp.
std::vector<double> gen_fgn(double hurst, std::size_t n, std::uint64_t seed);

/// Analytic fGn autocovariance at integer lag.
double fgn_autocovariance(double hurst, std::size_t lag);

/// Deterministic binomial multiplicative measure of length 2^k: at each
/// dyadic refinement mass splits p : (1-p), left cell first. Total mass 1.
std::vector<double> gen_binomial_cascade(double p, int k);

/// Analytic mass exponent of the binomial measure: -log2(p^q + (1-p)^q).
double binomial_tau(double p, double q);

/// Analytic generalized Hurst exponent under the series-based multifractal
/// estimators: h(q) = (tau(q) + 1) / q, with the q -> 0 limit handled.
double binomial_hq(double p, double q);

/// Unbiased Fisher-Yates permutation.
std::vector<double> shuffled(const std::vector<double>& series, std::uint64_t seed);

std::vector<double> gen_iid_gaussian(std::size_t n, std::uint64_t seed);
std::vector<double> gen_iid_exponential(double rate, std::size_t n, std::uint64_t seed);

/// Inverse-CDF Weibull with CDF 1 - exp(-alpha * g^beta).
std::vector<double> gen_iid_weibull(double alpha, double beta, std::size_t n,
                                    std::uint64_t seed);

/// Inverse-CDF shifted power law with density gamma*g0^gamma*(g+g0)^-(gamma+1).
std::vector<double> gen_iid_qexp(double g0, double gamma, std::size_t n, std::uint64_t seed);

}  // namespace itd
