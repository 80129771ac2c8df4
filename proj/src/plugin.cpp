#include "featcomp/plugin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace featcomp {

std::size_t BinningSpec::bins_for(std::size_t dim) const {
    if (bins.empty()) throw PmfError("binning spec has no bin counts");
    std::size_t b = bins.size() == 1 ? bins[0] : bins.at(dim);
    if (b == 0) throw PmfError("bin count must be >= 1");
    return b;
}

namespace {

std::vector<std::size_t> equal_width(const std::vector<double>& column, std::size_t bins) {
    auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    const double min = *lo;
    const double span = *hi - *lo;
    std::vector<std::size_t> codes(column.size(), 0);
    if (span <= 0.0) return codes;
    for (std::size_t i = 0; i < column.size(); ++i) {
        auto b = static_cast<std::size_t>(std::floor((column[i] - min) / span * static_cast<double>(bins)));
        codes[i] = std::min(b, bins - 1);
    }
    return codes;
}

// Rank-based quantile bins; tied values always share the bin of their first rank.
std::vector<std::size_t> equal_frequency(const std::vector<double>& column, std::size_t bins) {
    const std::size_t n = column.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
    std::vector<std::size_t> codes(n, 0);
    std::size_t rank = 0;
    while (rank < n) {
        std::size_t end = rank;
        while (end < n && column[order[end]] == column[order[rank]]) ++end;
        const std::size_t b = std::min(rank * bins / n, bins - 1);
        for (std::size_t r = rank; r < end; ++r) codes[order[r]] = b;
        rank = end;
    }
    return codes;
}

}  // namespace

JointPMF plugin_pmf_from_samples(const std::vector<std::vector<double>>& samples,
                                 const BinningSpec& binning) {
    if (samples.empty()) throw PmfError("plug-in estimator needs at least one sample");
    const std::size_t dims = samples.front().size();
    if (dims == 0) throw PmfError("samples have zero arity");
    for (const auto& row : samples) {
        if (row.size() != dims) throw PmfError("samples have ragged arity");
        for (double v : row) {
            if (!std::isfinite(v)) throw PmfError("samples contain non-finite values");
        }
    }

    std::vector<Variable> vars;
    std::vector<std::vector<std::size_t>> codes;
    for (std::size_t d = 0; d < dims; ++d) {
        const std::size_t bins = binning.bins_for(d);
        std::vector<double> column(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) column[i] = samples[i][d];
        codes.push_back(binning.mode == BinningMode::EqualWidth ? equal_width(column, bins)
                                                                : equal_frequency(column, bins));
        vars.push_back({"x" + std::to_string(d), bins});
    }

    std::size_t cells = 1;
    for (const auto& v : vars) {
        if (cells > JointPMF::kDefaultCellCap / v.size) throw PmfError("binned table exceeds cell cap");
        cells *= v.size;
    }
    std::vector<std::size_t> counts(cells, 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::size_t flat = 0;
        for (std::size_t d = 0; d < dims; ++d) flat = flat * vars[d].size + codes[d][i];
        ++counts[flat];
    }
    std::vector<double> table(cells);
    const double n = static_cast<double>(samples.size());
    for (std::size_t c = 0; c < cells; ++c) table[c] = static_cast<double>(counts[c]) / n;
    return JointPMF(std::move(vars), std::move(table));
}

}  // namespace featcomp
