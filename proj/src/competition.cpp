#include "featcomp/competition.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "featcomp/information.hpp"

namespace featcomp {

void CorruptionParams::validate() const {
    auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!in_unit(rho_l)) throw std::invalid_argument("rho_l must lie in [0,1]");
    if (!in_unit(rho_r)) throw std::invalid_argument("rho_r must lie in [0,1]");
    if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
}

JointPMF build_task_joint(const CorruptionParams& params) {
    params.validate();
    const std::size_t k = params.num_classes;
    const double kd = static_cast<double>(k);
    std::vector<Variable> vars{{"C", 2}, {"Y_l", k}, {"Y_r", k}, {"X_l", k + 1}};
    std::vector<double> table(2 * k * k * (k + 1), 0.0);

    for (std::size_t c = 0; c < 2; ++c) {
        const double pc = c == 1 ? params.rho_l : 1.0 - params.rho_l;
        for (std::size_t yl = 0; yl < k; ++yl) {
            for (std::size_t yr = 0; yr < k; ++yr) {
                double p_yr = (1.0 - params.rho_r) / kd;
                if (yr == yl) p_yr += params.rho_r;
                const std::size_t xl = c == 1 ? 1 + yl : 0;
                table[((c * k + yl) * k + yr) * (k + 1) + xl] = pc * (1.0 / kd) * p_yr;
            }
        }
    }
    return JointPMF(std::move(vars), std::move(table));
}

double task_signal(const CorruptionParams& params) {
    auto joint = build_task_joint(params);
    return conditional_mutual_information(joint, {task_var::kLeftLabel}, {task_var::kRightLabel},
                                          {task_var::kLeftView});
}

double task_signal_closed_form(const CorruptionParams& params) {
    params.validate();
    const double kd = static_cast<double>(params.num_classes);
    const double off = (1.0 - params.rho_r) / kd;
    const double diag = params.rho_r + off;
    double row_entropy = 0.0;
    if (diag > 0.0) row_entropy -= diag * std::log2(diag);
    if (off > 0.0) row_entropy -= (kd - 1.0) * off * std::log2(off);
    double coupling = std::log2(kd) - row_entropy;
    if (coupling < 0.0) coupling = 0.0;
    return (1.0 - params.rho_l) * coupling;
}

std::vector<double> unit_grid(std::size_t n) {
    if (n == 0) throw std::invalid_argument("grid needs at least one point");
    if (n == 1) return {0.0};
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

namespace {

void check_grid(const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
            throw std::invalid_argument(std::string(name) + " grid value outside [0,1]");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw std::invalid_argument(std::string(name) + " grid must be strictly ascending");
        }
    }
}

}  // namespace

SignalSurface signal_surface(const std::vector<double>& rho_l_grid,
                             const std::vector<double>& rho_r_grid, std::size_t num_classes) {
    check_grid(rho_l_grid, "rho_l");
    check_grid(rho_r_grid, "rho_r");
    SignalSurface s{rho_l_grid, rho_r_grid, num_classes, {}};
    s.values.assign(rho_l_grid.size(), std::vector<double>(rho_r_grid.size(), 0.0));
    for (std::size_t i = 0; i < rho_l_grid.size(); ++i) {
        for (std::size_t j = 0; j < rho_r_grid.size(); ++j) {
            s.values[i][j] = task_signal({rho_l_grid[i], rho_r_grid[j], num_classes});
        }
    }
    return s;
}

void write_surface_csv(std::ostream& out, const SignalSurface& surface) {
    char buf[64];
    out << "rho_l\\rho_r";
    for (double r : surface.rho_r_grid) {
        std::snprintf(buf, sizeof buf, ",%.15g", r);
        out << buf;
    }
    out << '\n';
    for (std::size_t i = 0; i < surface.rho_l_grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.15g", surface.rho_l_grid[i]);
        out << buf;
        for (double v : surface.values[i]) {
            std::snprintf(buf, sizeof buf, ",%.6f", v);
            out << buf;
        }
        out << '\n';
    }
}

double min_signal_bound(double h_y, std::size_t k) {
    if (k == 0) throw std::invalid_argument("min_signal_bound needs k >= 1");
    if (!(h_y >= 0.0)) throw std::invalid_argument("label entropy must be >= 0");
    return h_y / static_cast<double>(k);
}

}  // namespace featcomp
