#include "featcomp/information.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace featcomp {

namespace {

void require_disjoint(const VarSelector& a, const VarSelector& b, const char* what) {
    if (a.overlaps(b)) throw PmfError(std::string(what) + ": selectors overlap");
}

// Clamp floating-point residue around zero. A genuinely negative information
// value means the entropy bookkeeping is broken, not a user error.
double settle(double value, const char* what) {
    if (value < -kInfoZeroTolerance) {
        throw std::logic_error(std::string(what) + " came out negative: " + std::to_string(value));
    }
    return std::abs(value) <= kInfoZeroTolerance ? 0.0 : value;
}

}  // namespace

double entropy_of(std::span<const double> probabilities) {
    double h = 0.0;
    for (double q : probabilities) {
        if (q > kLogFloor) h -= q * std::log2(q);
    }
    return h;
}

double binary_entropy(double q) {
    const double pair[2] = {q, 1.0 - q};
    return entropy_of(pair);
}

double entropy(const JointPMF& p, const VarSelector& vars) {
    if (vars.empty()) return 0.0;
    p.validate_selector(vars);
    if (vars.size() == p.arity()) {
        // Same set in any order has the same entropy.
        return entropy_of(p.table());
    }
    return entropy_of(marginalize(p, vars).table());
}

double conditional_entropy(const JointPMF& p, const VarSelector& target, const VarSelector& given) {
    require_disjoint(target, given, "conditional_entropy");
    p.validate_selector(target);
    p.validate_selector(given);
    double h = entropy(p, target.join(given)) - entropy(p, given);
    return settle(h, "conditional entropy");
}

double mutual_information(const JointPMF& p, const VarSelector& a, const VarSelector& b) {
    require_disjoint(a, b, "mutual_information");
    p.validate_selector(a);
    p.validate_selector(b);
    double mi = entropy(p, a) + entropy(p, b) - entropy(p, a.join(b));
    return settle(mi, "mutual information");
}

double conditional_mutual_information(const JointPMF& p, const VarSelector& a,
                                      const VarSelector& b, const VarSelector& given) {
    require_disjoint(a, b, "conditional_mutual_information");
    require_disjoint(a, given, "conditional_mutual_information");
    require_disjoint(b, given, "conditional_mutual_information");
    p.validate_selector(a);
    p.validate_selector(b);
    p.validate_selector(given);
    double cmi = entropy(p, a.join(given)) + entropy(p, b.join(given)) -
                 entropy(p, a.join(b).join(given)) - entropy(p, given);
    return settle(cmi, "conditional mutual information");
}

std::vector<double> signal_sequence(const JointPMF& p, const VarSelector& y,
                                    const std::vector<VarSelector>& features) {
    for (std::size_t i = 0; i < features.size(); ++i) {
        require_disjoint(y, features[i], "signal_sequence");
        for (std::size_t j = 0; j < i; ++j) require_disjoint(features[i], features[j], "signal_sequence");
    }
    std::vector<double> signals;
    signals.reserve(features.size());
    VarSelector learned;
    for (const auto& f : features) {
        signals.push_back(conditional_mutual_information(p, y, f, learned));
        learned = learned.join(f);
    }
    return signals;
}

}  // namespace featcomp
