#pragma once
// Entropy, mutual information and the feature "signal" chain, all in bits.

#include <vector>

#include "featcomp/joint_pmf.hpp"

namespace featcomp {

/// Probabilities below this are treated as exact zeros inside log terms.
inline constexpr double kLogFloor = 1e-15;
/// Information quantities within this distance of zero are reported as zero.
inline constexpr double kInfoZeroTolerance = 1e-12;

/// Joint entropy of `vars` in bits. Empty selector gives 0.
double entropy(const JointPMF& p, const VarSelector& vars);

/// H(target | given) = H(target, given) - H(given).
double conditional_entropy(const JointPMF& p, const VarSelector& target, const VarSelector& given);

/// I(a; b). Symmetric, non-negative.
double mutual_information(const JointPMF& p, const VarSelector& a, const VarSelector& b);

/// I(a; b | given).
double conditional_mutual_information(const JointPMF& p, const VarSelector& a,
                                      const VarSelector& b, const VarSelector& given);

/// Signal of each feature in order: element i is I(y; f_i | f_0..f_{i-1}).
/// The elements telescope to I(y; f_0..f_{n-1}), which is at most H(y).
std::vector<double> signal_sequence(const JointPMF& p, const VarSelector& y,
                                    const std::vector<VarSelector>& features);

// Entropy of a single probability vector in bits (0 log 0 := 0).
double entropy_of(std::span<const double> probabilities);

/// Binary entropy H_b(q) in bits.
double binary_entropy(double q);

}  // namespace featcomp
