#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shelby/model.hpp"
#include "shelby/params.hpp"
#include "shelby/strategy.hpp"

namespace shelby {

/// Absolute gain below which a deviation does not count as improving.
Rational nash_tolerance();

struct BestResponse {
    Strategy strategy;
    Rational utility;  // expected utility of the best response
    Rational gain;     // utility minus the incumbent strategy's utility
};

/// Exact unilateral best response. Equation-additivity across pairs makes the
/// search a product of per-peer action choices and three storage modes, so no
/// heuristics are involved. Ties prefer the incumbent choice.
BestResponse best_response(int i, const Profile& profile, const ProtocolParams& params);

struct NashReport {
    std::vector<Rational> gains;  // per-SP best-response gain
    bool is_nash = false;
    std::optional<int> witness_sp;        // a deviator, when not Nash
    std::optional<Strategy> witness;      // its improving deviation
    Rational tolerance;
};

NashReport verify_nash(const Profile& profile, const ProtocolParams& params);
NashReport verify_nash(const Profile& profile, const ProtocolParams& params,
                       const Rational& tolerance);

struct ClassStrategy {
    StorageMode mode;
    PairAction action;  // applied uniformly toward every peer

    bool operator==(const ClassStrategy&) const = default;
};

struct UniquenessReport {
    int n = 0;
    std::size_t profiles_checked = 0;
    std::vector<std::vector<ClassStrategy>> equilibria;
    std::optional<std::string> expected;  // "honest" / "dishonest" when the theorems apply
    bool matches_expected = true;

    bool equilibria_equal_honest() const;
    bool equilibria_equal_dishonest() const;
};

/// Enumerates every symmetric-policy profile (each SP picks one storage mode
/// and one pair action used toward all peers) over n_small SPs and keeps the
/// profiles that survive an exact unilateral best-response check over the
/// full, unrestricted deviation space. n_small above 6 is rejected.
UniquenessReport verify_uniqueness(const ProtocolParams& params, int n_small);

struct CoalitionSpec {
    std::vector<int> members;
    bool commitment = false;
    bool extension_mode = false;
    bool exploratory = false;  // permit |J| >= N/2, outside the theorems' hypotheses
};

struct DeviationReport {
    std::vector<int> members;
    Rational baseline_joint;
    Rational best_joint;
    Rational gain;  // best_joint - baseline_joint
    std::vector<Strategy> best_deviation;     // per member, same order as members
    std::vector<Rational> member_gains;       // of the best joint deviation
    Rational bound;           // |J|^2 c_a p_s, the coalition-resistance bound
    Rational bound_adjusted;  // |J|^2 (c_a + eps r_a) p_s, noise-recovery included
    bool bound_satisfied = false;           // gain <= bound (relative tolerance 1e-9)
    bool bound_adjusted_satisfied = false;
    bool exhaustive = true;   // false when the all-gain search fell back to hill climbing
    bool all_members_gain = false;  // some deviation strictly improves every member
    bool exploratory = false;
};

/// Best joint deviation of the coalition against an otherwise-honest
/// population. Members that skip an audit hold nothing to show an inspector;
/// with commitment power (base mode only) a co-member fabricates the proof on
/// demand. Without commitment power a deviation is searched only over actions
/// that are individually rational at each ex-post decision point.
DeviationReport coalition_best_deviation(const CoalitionSpec& spec,
                                         const ProtocolParams& params);

struct CoalitionResult {
    std::vector<int> members;
    Rational gain;
    bool all_members_gain = false;
    bool passes = false;  // the l-strong condition: some member does not strictly gain
};

struct StrongEquilibriumReport {
    bool hypotheses_satisfied = false;  // none of conditions (i)-(iii) violated
    std::string hypotheses_note;
    std::vector<CoalitionResult> coalitions;
    std::vector<std::pair<int, bool>> by_size;  // (coalition size, all passed)
    bool all_pass = false;
};

/// Runs coalition_best_deviation for every coalition of size <= max_coalition
/// and checks the l-strong condition on each. Requires max_coalition < N/2
/// and N <= 9 (exhaustive subset enumeration).
StrongEquilibriumReport verify_strong_equilibrium(const ProtocolParams& params,
                                                  int max_coalition, bool commitment,
                                                  bool extension_mode);

}  // namespace shelby
