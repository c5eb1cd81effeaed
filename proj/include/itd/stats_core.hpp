#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "itd/common.hpp"

namespace itd {

enum class ZeroPolicy { Include, Exclude };

ZeroPolicy parse_zero_policy(const std::string& name);

/// Durations divided by their sample standard deviation (population
/// convention, divide by n). With ZeroPolicy::Exclude both sigma and g are
/// computed over the positive part only.
struct ScaledSample {
    std::vector<double> g;
    double sigma = 0.0;
    std::size_t n = 0;           // size of g
    double atom_zero = 0.0;      // fraction of zeros in the selected values
    ZeroPolicy zero_policy = ZeroPolicy::Include;
};

ScaledSample scale_by_std(const std::vector<double>& tau, ZeroPolicy policy);

struct EmpiricalPdf {
    std::vector<double> bin_centers;   // geometric centers
    std::vector<double> densities;     // count / (n * width)
    std::vector<double> bin_widths;
    std::vector<double> bin_edges;     // size bins+1
    double atom_mass = 0.0;            // probability mass at exactly zero
    std::size_t n = 0;
};

/// Log-spaced histogram of the positive part of the sample; zeros are
/// reported as a separate atom mass, never binned.
EmpiricalPdf log_binned_pdf(const ScaledSample& sample, int bins_per_decade = 10);

double mean(const std::vector<double>& v);

/// Population standard deviation (divide by n).
double stddev_population(const std::vector<double>& v);

}  // namespace itd
