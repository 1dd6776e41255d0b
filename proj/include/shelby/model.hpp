#pragma once

#include <string>
#include <vector>

#include "shelby/params.hpp"
#include "shelby/rational.hpp"
#include "shelby/strategy.hpp"

namespace shelby {

enum class ConditionStatus : std::uint8_t { Satisfied, Violated, Undefined };

struct ConditionCheck {
    std::string name;
    Rational lhs;
    Rational rhs;
    bool strict = false;  // lhs > rhs required instead of lhs >= rhs
    ConditionStatus status = ConditionStatus::Undefined;
    std::string note;
};

struct ConditionReport {
    std::vector<ConditionCheck> checks;

    const ConditionCheck& by_name(const std::string& name) const;
    bool all_satisfied() const;

    /// Theorem-3 hypotheses are (i)-(iii). An undefined condition (epsilon or
    /// p_a zero) neither satisfies nor violates them.
    bool theorem3_satisfied() const;
    bool theorem3_violated() const;
};

/// Evaluates, in exact rational arithmetic:
///   (i)   sigma_a >= ((1-p_a)/p_a) r_a + (1/(eps p_a)) c_a
///   (ii)  r_a >= (1/(1-eps)) c_a
///   (iii) r_s >= c_s
///   prop2_threshold:        sigma_a > ((1-p_a)/p_a) r_a          (strict)
///   obs1_storage_dominates: p_s k c_read > c_s                   (strict)
/// (i) is undefined when eps = 0 or p_a = 0; prop2 when p_a = 0.
ConditionReport check_conditions(const ProtocolParams& params);

/// Per-epoch utility decomposition. The convention for failed inspections is
/// that the entry's r_a reward is forfeited in addition to the sigma_a slash,
/// which is what makes the per-pair payoff (1-p_a) r_a - p_a sigma_a for a
/// false 1 on an absent auditee.
template <typename T>
struct UtilityBreakdownT {
    T storage_reward{};
    T audit_reward{};
    T storage_cost{};
    T audit_cost{};
    T reconstruction_cost{};
    T inspection_slash{};
    T storage_slash{};

    T total() const {
        return storage_reward + audit_reward - storage_cost - audit_cost -
               reconstruction_cost - inspection_slash - storage_slash;
    }
};
using UtilityBreakdown = UtilityBreakdownT<double>;
using ExactUtilityBreakdown = UtilityBreakdownT<Rational>;

/// Expected audit-role utility of one (auditor, auditee) pair for a single
/// audit instance, following the appendix payoff algebra: the auditor keeps
/// whatever response arrived (retention is free), so a blind 1 is caught only
/// when the response happened to arrive invalid or missing.
///   auditee_stores=true : honest (1-eps) r_a - c_a; blind 1 keeps r_a unless
///                         the eps-noise branch is inspected.
///   auditee_stores=false: honest -c_a; blind 1 faces (1-p_a) r_a - p_a sigma_a.
/// An auditee that answers via reconstruction counts as storing here.
Rational expected_pair_utility(PairAction action, const ProtocolParams& params,
                               bool auditee_stores);

/// Probability that auditor action toward an auditee produces a 1-entry.
Rational report_one_probability(PairAction action, const ProtocolParams& params,
                                bool auditee_answers);

/// P[sum of independent Bernoulli(one_probs) > count/2], the strict-majority
/// pass probability of one audit instance.
Rational majority_pass_probability(const std::vector<Rational>& one_probs);

/// True when SP j's responses carry real proofs: it stores, or it reconstructs
/// and at least k other SPs store.
bool answers_audits(const Profile& profile, const ProtocolParams& params, int j);

/// Expected sigma_s slashes from score-triggered extra on-chain audits, given
/// the per-instance pass probability. Scores take the value m/p_s with
/// m ~ Binomial(p_s, pass_prob); each of round((1-s^2) C_max) extra audits
/// fails with probability eps (storing, when the on-chain noise switch is on)
/// or 1 (not storing).
Rational expected_storage_slash(const Rational& pass_prob, bool stores,
                                const ProtocolParams& params);

/// Full expected-utility decomposition of SP i under the profile, per epoch.
/// Audit-role terms scale with p_s; at p_s = 1 this is the normalized game of
/// the analysis. Throws std::out_of_range for a bad index.
ExactUtilityBreakdown expected_utility(int i, const Profile& profile,
                                       const ProtocolParams& params);

}  // namespace shelby
