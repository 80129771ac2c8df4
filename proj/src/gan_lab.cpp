#include "featcomp/gan_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "featcomp/information.hpp"

namespace featcomp::gan {

namespace {

void check_pmf(const std::vector<double>& p, std::size_t size, const std::string& what) {
    if (p.size() != size) throw std::invalid_argument(what + ": expected " + std::to_string(size) + " entries");
    double sum = 0.0;
    for (double v : p) {
        if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument(what + ": entries must be finite and >= 0");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument(what + ": does not sum to 1");
}

std::size_t cell_count(const GanScenario& s) {
    std::size_t cells = 1;
    for (const auto& f : s.features) cells *= f.alphabet;
    return cells;
}

// Marginal of coordinate k (0-based) of a joint over all features, last feature fastest.
std::vector<double> coordinate_marginal(const GanScenario& s, const std::vector<double>& joint, std::size_t k) {
    std::size_t inner = 1;
    for (std::size_t i = k + 1; i < s.features.size(); ++i) inner *= s.features[i].alphabet;
    const std::size_t a = s.features[k].alphabet;
    std::vector<double> m(a, 0.0);
    for (std::size_t flat = 0; flat < joint.size(); ++flat) m[(flat / inner) % a] += joint[flat];
    return m;
}

std::vector<double> class_conditional(const GanScenario& s, bool real) {
    if (s.dependence == Dependence::ExplicitJoint) return real ? s.joint_real : s.joint_gen;
    std::vector<double> table{1.0};
    for (const auto& f : s.features) {
        const auto& p = real ? f.p_real : f.p_gen;
        std::vector<double> next;
        next.reserve(table.size() * p.size());
        for (double a : table) {
            for (double b : p) next.push_back(a * b);
        }
        table = std::move(next);
    }
    return table;
}

VarSelector features_between(std::size_t first, std::size_t last) {
    // 1-based inclusive feature range -> joint variable positions (y is 0)
    if (first > last) return {};
    return VarSelector::range(first, last + 1);
}

void check_index(const GanScenario& s, std::size_t k, const char* what) {
    if (k < 1 || k > s.feature_count()) {
        throw std::invalid_argument(std::string(what) + ": feature index " + std::to_string(k) +
                                    " outside 1.." + std::to_string(s.feature_count()));
    }
}

void require_confusion(const JointPMF& joint, std::size_t upto, const char* what) {
    const double h = conditional_entropy(joint, {0}, features_between(1, upto));
    if (std::abs(h - 1.0) > kIdentityTolerance) {
        std::ostringstream msg;
        msg << what << ": discriminator is not confused on f_1..f_" << upto
            << " (H(y|f_1..f_" << upto << ") = " << h
            << " bits, the motivation identity needs 1); use lead_motivation for the lead setting";
        throw PreconditionError(msg.str());
    }
}

void require_lead(const GanScenario& s, const JointPMF& joint, std::size_t k, std::size_t l, const char* what) {
    if (l < 1) throw std::invalid_argument(std::string(what) + ": lead l must be >= 1");
    check_index(s, k, what);
    if (k + l > s.feature_count()) throw std::invalid_argument(std::string(what) + ": f_{k+l} does not exist");
    if (s.learned_by_d < k + l - 1) {
        throw PreconditionError(std::string(what) + ": features f_k..f_{k+l-1} are not all learned by D");
    }
    require_confusion(joint, k - 1, what);
    const double h_lead = conditional_entropy(joint, {0}, features_between(k, k + l - 1));
    if (!(h_lead < 1.0 - kIdentityTolerance)) {
        std::ostringstream msg;
        msg << what << ": confusion-break precondition unmet, H(y|f_k..f_{k+l-1}) = " << h_lead << " is not < 1";
        throw PreconditionError(msg.str());
    }
}

// 1 - H in bits, with the same zero snapping as the information routines.
double one_minus(double h) {
    const double v = 1.0 - h;
    return v <= kInfoZeroTolerance ? 0.0 : v;
}

}  // namespace

void GanScenario::validate() const {
    if (features.empty()) throw std::invalid_argument("scenario has no features");
    for (const auto& f : features) {
        if (f.alphabet == 0) throw std::invalid_argument("feature '" + f.name + "' has empty alphabet");
        check_pmf(f.p_real, f.alphabet, "feature '" + f.name + "' p_real");
        check_pmf(f.p_gen, f.alphabet, "feature '" + f.name + "' p_gen");
    }
    if (learned_by_g > learned_by_d) throw std::invalid_argument("G cannot have learned more features than D");
    if (learned_by_d > features.size()) throw std::invalid_argument("D learned more features than exist");
    if (dependence == Dependence::ExplicitJoint) {
        const std::size_t cells = cell_count(*this);
        check_pmf(joint_real, cells, "explicit real joint");
        check_pmf(joint_gen, cells, "explicit gen joint");
        for (std::size_t k = 0; k < features.size(); ++k) {
            auto mr = coordinate_marginal(*this, joint_real, k);
            auto mg = coordinate_marginal(*this, joint_gen, k);
            for (std::size_t a = 0; a < features[k].alphabet; ++a) {
                if (std::abs(mr[a] - features[k].p_real[a]) > 1e-9 ||
                    std::abs(mg[a] - features[k].p_gen[a]) > 1e-9) {
                    throw std::invalid_argument("feature '" + features[k].name +
                                                "' rows disagree with the explicit joint marginals");
                }
            }
        }
    }
}

JointPMF scenario_joint(const GanScenario& s) {
    s.validate();
    std::vector<Variable> vars{{"y", 2}};
    for (const auto& f : s.features) vars.push_back({f.name, f.alphabet});
    auto gen = class_conditional(s, false);
    auto real = class_conditional(s, true);
    std::vector<double> table;
    table.reserve(2 * gen.size());
    for (double v : gen) table.push_back(0.5 * v);   // y = 0
    for (double v : real) table.push_back(0.5 * v);  // y = 1
    return JointPMF(std::move(vars), std::move(table));
}

GanScenario graft_real(const GanScenario& s, std::size_t k) {
    check_index(s, k, "graft_real");
    GanScenario out = s;
    const std::size_t idx = k - 1;
    out.features[idx].p_gen = s.features[idx].p_real;
    if (s.dependence == Dependence::ExplicitJoint) {
        // gen'(f) = p_real(f_k) * P_gen(f_rest | f_k); empty slices fall back to P_gen(f_rest).
        std::size_t inner = 1;
        for (std::size_t i = idx + 1; i < s.features.size(); ++i) inner *= s.features[i].alphabet;
        const std::size_t a = s.features[idx].alphabet;
        const auto gen_k = coordinate_marginal(s, s.joint_gen, idx);
        std::vector<double> rest(s.joint_gen.size() / a, 0.0);
        for (std::size_t flat = 0; flat < s.joint_gen.size(); ++flat) {
            const std::size_t outer = flat / (inner * a);
            rest[outer * inner + flat % inner] += s.joint_gen[flat];
        }
        for (std::size_t flat = 0; flat < s.joint_gen.size(); ++flat) {
            const std::size_t v = (flat / inner) % a;
            const std::size_t r = (flat / (inner * a)) * inner + flat % inner;
            const double cond = gen_k[v] > 0.0 ? s.joint_gen[flat] / gen_k[v] : rest[r];
            out.joint_gen[flat] = s.features[idx].p_real[v] * cond;
        }
        const double sum = std::accumulate(out.joint_gen.begin(), out.joint_gen.end(), 0.0);
        for (double& v : out.joint_gen) v /= sum;
        for (std::size_t i = 0; i < s.features.size(); ++i) {
            out.features[i].p_gen = coordinate_marginal(out, out.joint_gen, i);
        }
    }
    return out;
}

double label_entropy_given_prefix(const GanScenario& s, std::size_t upto) {
    if (upto > s.feature_count()) throw std::invalid_argument("prefix longer than feature list");
    return conditional_entropy(scenario_joint(s), {0}, features_between(1, upto));
}

ConfusionResult confusion_check(const GanScenario& s, std::size_t upto) {
    const double h = label_entropy_given_prefix(s, upto);
    return {std::abs(h - 1.0) <= kIdentityTolerance, h};
}

Motivation discriminator_motivation(const GanScenario& s, std::size_t k) {
    check_index(s, k, "discriminator_motivation");
    const auto joint = scenario_joint(s);
    require_confusion(joint, k - 1, "discriminator_motivation");
    Motivation m;
    m.exact = conditional_mutual_information(joint, {0}, {k}, features_between(1, k - 1));
    m.lower_bound = one_minus(conditional_entropy(joint, {0}, {k}));
    const double via_prefix = one_minus(conditional_entropy(joint, {0}, features_between(1, k)));
    if (std::abs(m.exact - via_prefix) > kIdentityTolerance) {
        throw IdentityViolation("I(y; f_k | f_1..f_{k-1}) != 1 - H(y | f_1..f_k) at a confusion state");
    }
    if (m.exact < m.lower_bound - kIdentityTolerance) {
        throw IdentityViolation("exact motivation fell below 1 - H(y | f_k)");
    }
    return m;
}

bool competition_free_check(const GanScenario& s, std::size_t k) {
    check_index(s, k, "competition_free_check");
    if (k - 1 > 20) throw std::invalid_argument("competition_free_check: too many prior features to enumerate");
    const auto joint = scenario_joint(s);
    require_confusion(joint, k - 1, "competition_free_check");
    const double reference = one_minus(conditional_entropy(joint, {0}, {k}));

    const std::size_t prior = k - 1;
    for (std::size_t mask = 1; mask < (std::size_t{1} << prior); ++mask) {
        // keep y, the prior features not in `mask`, and f_k
        std::vector<std::size_t> keep{0};
        for (std::size_t i = 1; i <= prior; ++i) {
            if (!(mask & (std::size_t{1} << (i - 1)))) keep.push_back(i);
        }
        const std::size_t remaining_prior = keep.size() - 1;
        keep.push_back(k);
        const auto reduced = marginalize(joint, VarSelector(keep));
        const double h_prior = conditional_entropy(reduced, {0}, VarSelector::range(1, 1 + remaining_prior));
        if (std::abs(h_prior - 1.0) > kIdentityTolerance) continue;  // not confusion-preserving
        const double bound = one_minus(conditional_entropy(reduced, {0}, {remaining_prior + 1}));
        if (std::abs(bound - reference) > kIdentityTolerance) return false;
    }
    return true;
}

LeadMotivation lead_motivation(const GanScenario& s, std::size_t k, std::size_t l) {
    const auto joint = scenario_joint(s);
    require_lead(s, joint, k, l, "lead_motivation");
    LeadMotivation m;
    m.conditional = conditional_mutual_information(joint, {0}, {k + l}, features_between(1, k + l - 1));
    const double before = conditional_entropy(joint, {0}, features_between(k, k + l - 1));
    const double after = conditional_entropy(joint, {0}, features_between(k, k + l));
    m.lead_form = before - after;
    if (std::abs(m.conditional - m.lead_form) > kIdentityTolerance) {
        std::ostringstream msg;
        msg << "lead_motivation: I(y; f_{k+l} | f_1..f_{k+l-1}) = " << m.conditional
            << " but H(y|f_k..f_{k+l-1}) - H(y|f_k..f_{k+l}) = " << m.lead_form
            << "; prior features are not independent of the lead block";
        throw IdentityViolation(msg.str());
    }
    return m;
}

GeneratorIncentive generator_incentive(const GanScenario& s, std::size_t k, std::size_t l) {
    const auto joint = scenario_joint(s);
    require_lead(s, joint, k, l, "generator_incentive");
    const auto d_known = features_between(1, k + l - 1);
    const double before = conditional_entropy(joint, {0}, d_known);
    const double after = conditional_entropy(scenario_joint(graft_real(s, k)), {0}, d_known);
    GeneratorIncentive g;
    g.incentive = after - before;
    g.bound = mutual_information(joint, {0}, features_between(k, k + l - 1));
    if (!(g.incentive < g.bound + kIdentityTolerance)) {
        std::ostringstream msg;
        msg << "generator_incentive: incentive " << g.incentive << " exceeds I(y; f_k..f_{k+l-1}) = " << g.bound;
        throw IdentityViolation(msg.str());
    }
    return g;
}

double value_at_optimal_d(const GanScenario& s, std::size_t d_features) {
    if (d_features > s.feature_count()) throw std::invalid_argument("value_at_optimal_d: too many features");
    if (d_features == 0) return 2.0 * std::numbers::ln2;
    const auto joint = marginalize(scenario_joint(s), VarSelector::range(0, d_features + 1));
    const auto table = joint.table();
    const std::size_t half = table.size() / 2;
    double v = 0.0;
    for (std::size_t f = 0; f < half; ++f) {
        const double p_gen = 2.0 * table[f];
        const double p_real = 2.0 * table[half + f];
        const double total = p_gen + p_real;
        if (total <= 0.0) continue;
        if (p_real > 0.0) v -= p_real * std::log(p_real / total);
        if (p_gen > 0.0) v -= p_gen * std::log(p_gen / total);
    }
    return v;
}

// ---- balancing simulation ------------------------------------------------

const char* actor_name(Actor a) { return a == Actor::Discriminator ? "D" : "G"; }

BalancePolicy BalancePolicy::parse(const std::string& text) {
    if (text == "strict-alternation") return {PolicyKind::StrictAlternation, 1};
    if (text == "g-catchup" || text == "g-catchup-until-confusion") return {PolicyKind::GCatchup, 1};
    const std::string prefix = "d-leads-by-";
    if (text.rfind(prefix, 0) == 0) {
        const auto rest = text.substr(prefix.size());
        std::size_t used = 0;
        unsigned long lead = 0;
        try {
            lead = std::stoul(rest, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != rest.size() || lead == 0) {
            throw std::invalid_argument("bad lead in policy '" + text + "'");
        }
        return {PolicyKind::DLeadsBy, lead};
    }
    throw std::invalid_argument("unknown balancing policy '" + text + "'");
}

std::string BalancePolicy::name() const {
    switch (kind) {
        case PolicyKind::StrictAlternation: return "strict-alternation";
        case PolicyKind::GCatchup: return "g-catchup-until-confusion";
        case PolicyKind::DLeadsBy: return "d-leads-by-" + std::to_string(lead);
    }
    return "?";
}

namespace {

class Simulator {
public:
    explicit Simulator(GanScenario s) { trace_.final_state = std::move(s); }

    bool d_can_step() const { return state().learned_by_d < state().feature_count(); }
    bool g_can_step() const { return state().learned_by_g < state().learned_by_d; }
    bool confused() const { return confusion_check(state(), state().learned_by_d).confused; }

    void d_step() {
        auto& s = trace_.final_state;
        const std::size_t j = s.learned_by_d + 1;
        const auto joint = scenario_joint(s);
        TraceStep step;
        step.actor = Actor::Discriminator;
        step.feature = j;
        step.motivation_bits = conditional_mutual_information(joint, {0}, {j}, features_between(1, j - 1));
        GanScenario caught_up = s;
        for (std::size_t i = 1; i < j; ++i) caught_up = graft_real(caught_up, i);
        step.confused_motivation_bits = conditional_mutual_information(
            scenario_joint(caught_up), {0}, {j}, features_between(1, j - 1));
        s.learned_by_d = j;
        push(step);
    }

    void g_step() {
        auto& s = trace_.final_state;
        const std::size_t j = s.learned_by_g + 1;
        const auto d_known = features_between(1, s.learned_by_d);
        const double before = conditional_entropy(scenario_joint(s), {0}, d_known);
        s = graft_real(s, j);
        s.learned_by_g = j;
        const double after = conditional_entropy(scenario_joint(s), {0}, d_known);
        TraceStep step;
        step.actor = Actor::Generator;
        step.feature = j;
        step.motivation_bits = after - before;
        push(step);
    }

    const GanScenario& state() const { return trace_.final_state; }
    BalanceTrace take() && { return std::move(trace_); }
    BalanceTrace& trace() { return trace_; }

private:
    void push(TraceStep step) {
        step.step = trace_.steps.size() + 1;
        step.value_nats = value_at_optimal_d(state(), state().learned_by_d);
        trace_.steps.push_back(step);
    }

    BalanceTrace trace_;
};

void run_policy(Simulator& sim, const BalancePolicy& policy) {
    switch (policy.kind) {
        case PolicyKind::StrictAlternation:
            if (!sim.d_can_step()) throw PreconditionError("strict-alternation: no features left for D");
            while (sim.d_can_step()) {
                sim.d_step();
                if (sim.g_can_step()) sim.g_step();
            }
            break;
        case PolicyKind::DLeadsBy: {
            const auto& s = sim.state();
            const std::size_t current = s.learned_by_d - s.learned_by_g;
            const std::size_t needed = policy.lead > current ? policy.lead - current : 0;
            if (s.learned_by_d + needed > s.feature_count()) {
                throw PreconditionError("d-leads-by: not enough features for a lead of " +
                                        std::to_string(policy.lead));
            }
            while (sim.state().learned_by_d - sim.state().learned_by_g < policy.lead) sim.d_step();
            break;
        }
        case PolicyKind::GCatchup:
            while (!sim.confused() && sim.g_can_step()) sim.g_step();
            break;
    }
}

}  // namespace

BalanceTrace simulate_balancing(const GanScenario& s, const std::vector<BalancePolicy>& policies) {
    s.validate();
    Simulator sim(s);
    sim.trace().initial_value_nats = value_at_optimal_d(s, s.learned_by_d);
    for (const auto& p : policies) run_policy(sim, p);
    return std::move(sim).take();
}

BalanceTrace simulate_balancing(const GanScenario& s, const BalancePolicy& policy) {
    return simulate_balancing(s, std::vector<BalancePolicy>{policy});
}

void write_trace_csv(std::ostream& out, const BalanceTrace& trace) {
    char buf[160];
    out << "step,actor,feature,motivation_bits,V_nats\n";
    std::snprintf(buf, sizeof buf, "0,init,0,0.000000000000,%.12f\n", trace.initial_value_nats);
    out << buf;
    for (const auto& st : trace.steps) {
        std::snprintf(buf, sizeof buf, "%zu,%s,%zu,%.12f,%.12f\n", st.step, actor_name(st.actor), st.feature,
                      st.motivation_bits, st.value_nats);
        out << buf;
    }
}

// ---- scenario text format ------------------------------------------------

namespace {

std::vector<double> parse_row(const std::string& text, const std::string& what) {
    std::vector<double> row;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            row.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + item + "' in " + what);
        }
    }
    return row;
}

std::string format_row(const std::vector<double>& row) {
    std::string out;
    char buf[40];
    for (std::size_t i = 0; i < row.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", row[i]);
        out += buf;
    }
    return out;
}

}  // namespace

GanScenario read_scenario(std::istream& in) {
    GanScenario s;
    std::string line;
    std::size_t lineno = 0;
    bool d_done = false, g_done = false;
    struct JointLine {
        bool real;
        std::vector<std::size_t> tuple;
        double prob;
    };
    std::vector<JointLine> joints;
    std::vector<bool> has_rows;

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string directive;
        if (!(ls >> directive)) continue;
        auto fail = [&](const std::string& msg) {
            throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": " + msg);
        };
        if (directive == "dependence") {
            std::string mode;
            ls >> mode;
            if (mode == "independent") s.dependence = Dependence::Independent;
            else if (mode == "explicit") s.dependence = Dependence::ExplicitJoint;
            else fail("unknown dependence '" + mode + "'");
        } else if (directive == "feature") {
            FeatureSpec f;
            std::string token;
            if (!(ls >> f.name >> f.alphabet)) fail("feature needs a name and alphabet size");
            std::string learned = "-";
            bool rows = false;
            while (ls >> token) {
                if (token.rfind("real=", 0) == 0) {
                    f.p_real = parse_row(token.substr(5), f.name);
                    rows = true;
                } else if (token.rfind("gen=", 0) == 0) {
                    f.p_gen = parse_row(token.substr(4), f.name);
                } else if (token.rfind("learned=", 0) == 0) {
                    learned = token.substr(8);
                } else {
                    fail("unknown feature field '" + token + "'");
                }
            }
            const bool by_d = learned.find('D') != std::string::npos;
            const bool by_g = learned.find('G') != std::string::npos;
            if (learned != "-" && learned != "D" && learned != "DG" && learned != "GD") {
                fail("learned flag must be D, DG or -");
            }
            // learned flags must form prefixes: D's features first, G's a prefix of D's
            if (by_d && d_done) fail("D-learned features must come first");
            if (by_g && g_done) fail("G-learned features must form a prefix");
            if (!by_d) d_done = true;
            if (!by_g) g_done = true;
            if (by_d) ++s.learned_by_d;
            if (by_g) ++s.learned_by_g;
            has_rows.push_back(rows);
            s.features.push_back(std::move(f));
        } else if (directive == "joint") {
            std::string side, tuple;
            double prob = 0.0;
            if (!(ls >> side >> tuple >> prob)) fail("joint needs side, tuple, probability");
            if (side != "real" && side != "gen") fail("joint side must be real or gen");
            JointLine jl{side == "real", {}, prob};
            for (double v : parse_row(tuple, "joint tuple")) jl.tuple.push_back(static_cast<std::size_t>(v));
            joints.push_back(std::move(jl));
        } else {
            fail("unknown directive '" + directive + "'");
        }
    }

    if (s.dependence == Dependence::ExplicitJoint) {
        const std::size_t cells = cell_count(s);
        s.joint_real.assign(cells, 0.0);
        s.joint_gen.assign(cells, 0.0);
        for (const auto& jl : joints) {
            if (jl.tuple.size() != s.features.size()) throw std::invalid_argument("joint tuple arity mismatch");
            std::size_t flat = 0;
            for (std::size_t i = 0; i < jl.tuple.size(); ++i) {
                if (jl.tuple[i] >= s.features[i].alphabet) throw std::invalid_argument("joint tuple out of range");
                flat = flat * s.features[i].alphabet + jl.tuple[i];
            }
            (jl.real ? s.joint_real : s.joint_gen)[flat] = jl.prob;
        }
        for (std::size_t k = 0; k < s.features.size(); ++k) {
            if (!has_rows[k]) {
                s.features[k].p_real = coordinate_marginal(s, s.joint_real, k);
                s.features[k].p_gen = coordinate_marginal(s, s.joint_gen, k);
            }
        }
    } else if (!joints.empty()) {
        throw std::invalid_argument("joint lines require 'dependence explicit'");
    }
    s.validate();
    return s;
}

void write_scenario(std::ostream& out, const GanScenario& s) {
    out << "dependence " << (s.dependence == Dependence::ExplicitJoint ? "explicit" : "independent") << '\n';
    for (std::size_t i = 0; i < s.features.size(); ++i) {
        const auto& f = s.features[i];
        std::string learned = i < s.learned_by_g ? "DG" : (i < s.learned_by_d ? "D" : "-");
        out << "feature " << f.name << ' ' << f.alphabet << " real=" << format_row(f.p_real)
            << " gen=" << format_row(f.p_gen) << " learned=" << learned << '\n';
    }
    if (s.dependence == Dependence::ExplicitJoint) {
        for (int side = 0; side < 2; ++side) {
            const auto& joint = side == 0 ? s.joint_real : s.joint_gen;
            for (std::size_t flat = 0; flat < joint.size(); ++flat) {
                if (joint[flat] == 0.0) continue;
                std::vector<double> tuple(s.features.size());
                std::size_t rem = flat;
                for (std::size_t i = s.features.size(); i-- > 0;) {
                    tuple[i] = static_cast<double>(rem % s.features[i].alphabet);
                    rem /= s.features[i].alphabet;
                }
                std::string t;
                for (std::size_t i = 0; i < tuple.size(); ++i) {
                    t += (i ? "," : "") + std::to_string(static_cast<std::size_t>(tuple[i]));
                }
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", joint[flat]);
                out << "joint " << (side == 0 ? "real " : "gen ") << t << ' ' << buf << '\n';
            }
        }
    }
}

}  // namespace featcomp::gan
