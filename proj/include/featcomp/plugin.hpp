#pragma once
// Plug-in (empirical frequency) pmf from real-valued samples.

#include <cstddef>
#include <vector>

#include "featcomp/joint_pmf.hpp"

namespace featcomp {

enum class BinningMode { EqualWidth, EqualFrequency };

struct BinningSpec {
    BinningMode mode = BinningMode::EqualWidth;
    /// One entry per dimension, or a single entry applied to every dimension.
    std::vector<std::size_t> bins{2};

    std::size_t bins_for(std::size_t dim) const;
};

/// Bin every column independently and tabulate raw frequencies (no bias correction).
/// Throws PmfError on empty input, ragged rows, or non-finite values.
JointPMF plugin_pmf_from_samples(const std::vector<std::vector<double>>& samples,
                                 const BinningSpec& binning);

}  // namespace featcomp
