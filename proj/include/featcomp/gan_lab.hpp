#pragma once
// Exact discrete model of discriminator/generator feature incentives.
//
// Features are finite random variables with one distribution under real data
// and one under the generator. The class label y (1 = real) is balanced, and
// the scenario joint is P(y, f_1..f_n) = 0.5 * P(f | y). Feature indices in
// this API are 1-based to match the usual f_1..f_n numbering.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "featcomp/joint_pmf.hpp"

namespace featcomp::gan {

/// Identity-check tolerance for every quantity in bits or nats.
inline constexpr double kIdentityTolerance = 1e-9;

/// A required analytic precondition (confusion, confusion break) does not hold.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An identity that must hold under the preconditions came out false.
class IdentityViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FeatureSpec {
    std::string name;
    std::size_t alphabet = 0;
    std::vector<double> p_real;
    std::vector<double> p_gen;
};

enum class Dependence { Independent, ExplicitJoint };

struct GanScenario {
    std::vector<FeatureSpec> features;
    std::size_t learned_by_d = 0;  ///< k + l - 1
    std::size_t learned_by_g = 0;  ///< k - 1
    Dependence dependence = Dependence::Independent;
    /// Full joints over (f_1..f_n) per class; only read for ExplicitJoint.
    std::vector<double> joint_real;
    std::vector<double> joint_gen;

    /// Throws std::invalid_argument on malformed pmfs, alphabets or counts.
    void validate() const;
    std::size_t feature_count() const noexcept { return features.size(); }
};

/// Joint over (y, f_1, ..., f_n); variable 0 is y.
JointPMF scenario_joint(const GanScenario& s);

/// Copy of `s` where G has learned feature `k`: its generator conditional becomes the real one.
GanScenario graft_real(const GanScenario& s, std::size_t k);

/// H(y | f_1..f_upto) in bits (upto = 0 gives H(y) = 1).
double label_entropy_given_prefix(const GanScenario& s, std::size_t upto);

struct ConfusionResult {
    bool confused = false;
    double entropy_bits = 1.0;
};

/// Confused iff H(y | f_1..f_upto) = 1 bit within tolerance.
ConfusionResult confusion_check(const GanScenario& s, std::size_t upto);

struct Motivation {
    double exact = 0.0;        ///< I(y; f_k | f_1..f_{k-1})
    double lower_bound = 0.0;  ///< 1 - H(y | f_k)
};

/// D's incentive to learn f_k while confused on f_1..f_{k-1}.
/// Throws PreconditionError when confusion is broken (use lead_motivation instead).
Motivation discriminator_motivation(const GanScenario& s, std::size_t k);

/// True iff 1 - H(y | f_k) is unchanged when any subset of f_1..f_{k-1} that keeps
/// the discriminator confused is dropped from the scenario.
bool competition_free_check(const GanScenario& s, std::size_t k);

struct LeadMotivation {
    double conditional = 0.0;  ///< I(y; f_{k+l} | f_1..f_{k+l-1})
    double lead_form = 0.0;    ///< H(y | f_k..f_{k+l-1}) - H(y | f_k..f_{k+l})
};

/// D's incentive for f_{k+l} after leading G by l features f_k..f_{k+l-1}.
/// Requires confusion on 1..k-1 and H(y | f_k..f_{k+l-1}) < 1; throws
/// IdentityViolation if the two evaluation paths disagree.
LeadMotivation lead_motivation(const GanScenario& s, std::size_t k, std::size_t l);

struct GeneratorIncentive {
    double incentive = 0.0;  ///< H_{f_k}(y | f_1..f_{k+l-1}) - H(y | f_1..f_{k+l-1})
    double bound = 0.0;      ///< I(y; f_k..f_{k+l-1})
};

/// G's gain from matching f_k while D knows f_1..f_{k+l-1}.
/// Throws IdentityViolation if incentive exceeds the bound.
GeneratorIncentive generator_incentive(const GanScenario& s, std::size_t k, std::size_t l);

/// Value of the minimax game at the optimal discriminator over f_1..f_d, as
/// D's total binary cross-entropy in nats: log 4 at confusion, smaller otherwise.
double value_at_optimal_d(const GanScenario& s, std::size_t d_features);

// ---- balancing simulation ------------------------------------------------

enum class Actor { Discriminator, Generator };

struct TraceStep {
    std::size_t step = 0;
    Actor actor = Actor::Discriminator;
    std::size_t feature = 0;  ///< 1-based index of the feature acquired
    double motivation_bits = 0.0;
    /// For D steps: what the motivation would be if D were confused beforehand.
    double confused_motivation_bits = 0.0;
    double value_nats = 0.0;  ///< V(D,G) after the step
};

struct BalanceTrace {
    double initial_value_nats = 0.0;
    std::vector<TraceStep> steps;
    /// Scenario state after the last step (learned counts and grafted G features).
    GanScenario final_state;
};

enum class PolicyKind { StrictAlternation, DLeadsBy, GCatchup };

struct BalancePolicy {
    PolicyKind kind = PolicyKind::StrictAlternation;
    std::size_t lead = 1;  ///< only for DLeadsBy

    static BalancePolicy parse(const std::string& text);
    std::string name() const;
};

/// One actor acquires one feature per step according to `policy`.
/// Throws PreconditionError when the policy cannot take its first step.
BalanceTrace simulate_balancing(const GanScenario& s, const BalancePolicy& policy);

/// Runs the policies back to back, each starting from the previous final state.
BalanceTrace simulate_balancing(const GanScenario& s, const std::vector<BalancePolicy>& policies);

/// `step,actor,feature,motivation_bits,V_nats`; step 0 is the initial state.
void write_trace_csv(std::ostream& out, const BalanceTrace& trace);

/// Text scenario format, one directive per line:
///   dependence independent|explicit
///   feature <name> <alphabet> real=<p,...> gen=<p,...> learned=<D|DG|->
///   joint real|gen <i,j,...> <prob>        (explicit dependence only)
GanScenario read_scenario(std::istream& in);
void write_scenario(std::ostream& out, const GanScenario& s);

const char* actor_name(Actor a);

}  // namespace featcomp::gan
