#include "itd/stats_core.hpp"

#include <algorithm>
#include <cmath>

namespace itd {

ZeroPolicy parse_zero_policy(const std::string& name) {
    if (name == "include") return ZeroPolicy::Include;
    if (name == "exclude") return ZeroPolicy::Exclude;
    throw UsageError("unknown zero policy '" + name + "'");
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stddev_population(const std::vector<double>& v) {
    double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

ScaledSample scale_by_std(const std::vector<double>& tau, ZeroPolicy policy) {
    std::vector<double> selected;
    selected.reserve(tau.size());
    for (double x : tau) {
        if (x < 0.0) throw DataError("scale_by_std: negative duration");
        if (policy == ZeroPolicy::Exclude && x == 0.0) continue;
        selected.push_back(x);
    }
    if (selected.size() < 2) throw DataError("scale_by_std: fewer than 2 selected values");

    ScaledSample out;
    out.zero_policy = policy;
    out.sigma = stddev_population(selected);
    if (out.sigma == 0.0) throw NumericError("scale_by_std: zero variance (constant series)");
    out.n = selected.size();
    std::size_t zeros = 0;
    out.g.reserve(selected.size());
    for (double x : selected) {
        zeros += (x == 0.0);
        out.g.push_back(x / out.sigma);
    }
    out.atom_zero = static_cast<double>(zeros) / static_cast<double>(out.n);
    return out;
}

EmpiricalPdf log_binned_pdf(const ScaledSample& sample, int bins_per_decade) {
    if (bins_per_decade < 2) throw UsageError("log_binned_pdf: bins_per_decade must be >= 2");
    double lo = 0.0, hi = 0.0;
    std::size_t positives = 0;
    for (double g : sample.g) {
        if (g <= 0.0) continue;
        if (positives == 0) {
            lo = hi = g;
        } else {
            lo = std::min(lo, g);
            hi = std::max(hi, g);
        }
        ++positives;
    }
    if (positives == 0) throw DataError("log_binned_pdf: sample has no positive values");

    EmpiricalPdf pdf;
    pdf.n = sample.g.size();
    pdf.atom_mass = static_cast<double>(pdf.n - positives) / static_cast<double>(pdf.n);

    const double step = 1.0 / bins_per_decade;
    // Edges aligned to the decade grid so identical data always bins the same.
    double e0 = std::floor(std::log10(lo) / step) * step;
    double e1 = std::ceil(std::log10(hi) / step) * step;
    int bins = std::max(1, static_cast<int>(std::lround((e1 - e0) / step)));
    // Guard the top edge so the max value falls inside the last bin.
    while (std::pow(10.0, e0 + bins * step) <= hi) ++bins;

    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b)
        edges[static_cast<std::size_t>(b)] = std::pow(10.0, e0 + b * step);

    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double g : sample.g) {
        if (g <= 0.0) continue;
        int b = static_cast<int>(std::floor((std::log10(g) - e0) / step));
        b = std::clamp(b, 0, bins - 1);
        // Float boundary cases: nudge into the bin actually containing g.
        if (g < edges[static_cast<std::size_t>(b)]) --b;
        else if (g >= edges[static_cast<std::size_t>(b) + 1]) ++b;
        counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
    }

    for (int b = 0; b < bins; ++b) {
        auto bu = static_cast<std::size_t>(b);
        double w = edges[bu + 1] - edges[bu];
        pdf.bin_centers.push_back(std::sqrt(edges[bu] * edges[bu + 1]));
        pdf.bin_widths.push_back(w);
        pdf.densities.push_back(static_cast<double>(counts[bu]) /
                                (static_cast<double>(pdf.n) * w));
    }
    pdf.bin_edges = std::move(edges);
    return pdf;
}

}  // namespace itd
