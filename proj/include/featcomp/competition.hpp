#pragma once
// Exact model of the two-digit corruption task and its signal surface.
//
// A clean left digit reveals its label; a corrupted one reveals only that it
// is noise. The left observation X_l is therefore the pair (C, C*Y_l), stored
// as one variable with alphabet {noise, digit 0, ..., digit K-1}. The right
// observation X_r is its label Y_r.

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "featcomp/joint_pmf.hpp"

namespace featcomp {

struct CorruptionParams {
    double rho_l = 1.0;  ///< probability the left digit stays informative
    double rho_r = 0.0;  ///< probability the right label is copied from the left
    std::size_t num_classes = 10;

    /// Throws std::invalid_argument outside [0,1] or for num_classes < 2.
    void validate() const;
};

/// Variable positions inside build_task_joint's result.
namespace task_var {
inline constexpr std::size_t kCorruption = 0;  // C, 1 = clean
inline constexpr std::size_t kLeftLabel = 1;   // Y_l
inline constexpr std::size_t kRightLabel = 2;  // Y_r (= X_r)
inline constexpr std::size_t kLeftView = 3;    // X_l: 0 = noise, 1 + y = clean digit y
}  // namespace task_var

JointPMF build_task_joint(const CorruptionParams& params);

/// I(Y_l; X_r | X_l) in bits, computed on the enumerated joint.
double task_signal(const CorruptionParams& params);

/// (1 - rho_l) * I(Y_l; Y_r), evaluated from the coupled row directly.
double task_signal_closed_form(const CorruptionParams& params);

struct SignalSurface {
    std::vector<double> rho_l_grid;
    std::vector<double> rho_r_grid;
    std::size_t num_classes = 10;
    /// values[i][j] at (rho_l_grid[i], rho_r_grid[j]).
    std::vector<std::vector<double>> values;
};

SignalSurface signal_surface(const std::vector<double>& rho_l_grid,
                             const std::vector<double>& rho_r_grid, std::size_t num_classes = 10);

/// `rho_l\rho_r,<rho_r...>` header, then one row per rho_l with 6-decimal values.
void write_surface_csv(std::ostream& out, const SignalSurface& surface);

/// H(Y)/k: some feature among k must have signal at most this.
double min_signal_bound(double h_y, std::size_t k);

/// n evenly spaced points on [0,1], endpoints exact.
std::vector<double> unit_grid(std::size_t n);

}  // namespace featcomp
