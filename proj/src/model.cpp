#include "shelby/model.hpp"

#include <stdexcept>

namespace shelby {

const ConditionCheck& ConditionReport::by_name(const std::string& name) const {
    for (const auto& check : checks)
        if (check.name == name) return check;
    throw std::out_of_range("no condition named " + name);
}

bool ConditionReport::all_satisfied() const {
    for (const auto& check : checks)
        if (check.status != ConditionStatus::Satisfied) return false;
    return true;
}

bool ConditionReport::theorem3_satisfied() const {
    for (const auto* name : {"i", "ii", "iii"})
        if (by_name(name).status != ConditionStatus::Satisfied) return false;
    return true;
}

bool ConditionReport::theorem3_violated() const {
    for (const auto* name : {"i", "ii", "iii"})
        if (by_name(name).status == ConditionStatus::Violated) return true;
    return false;
}

ConditionReport check_conditions(const ProtocolParams& p) {
    validate(p);
    ConditionReport report;

    auto add = [&](std::string name, Rational lhs, Rational rhs, bool strict) {
        bool ok = strict ? lhs > rhs : lhs >= rhs;
        report.checks.push_back({std::move(name), std::move(lhs), std::move(rhs), strict,
                                 ok ? ConditionStatus::Satisfied : ConditionStatus::Violated,
                                 ""});
    };
    auto add_undefined = [&](std::string name, bool strict, std::string note) {
        report.checks.push_back({std::move(name), Rational(0), Rational(0), strict,
                                 ConditionStatus::Undefined, std::move(note)});
    };

    if (p.epsilon == 0 || p.p_a == 0) {
        add_undefined("i", false,
                      p.epsilon == 0 ? "undefined (requires epsilon > 0)"
                                     : "undefined (requires p_a > 0)");
    } else {
        add("i", p.sigma_a,
            (1 - p.p_a) / p.p_a * p.r_a + Rational(1) / (p.epsilon * p.p_a) * p.c_a, false);
    }

    add("ii", p.r_a, Rational(1) / (1 - p.epsilon) * p.c_a, false);
    add("iii", p.r_s, p.c_s, false);

    if (p.p_a == 0)
        add_undefined("prop2_threshold", true, "undefined (requires p_a > 0)");
    else
        add("prop2_threshold", p.sigma_a, (1 - p.p_a) / p.p_a * p.r_a, true);

    add("obs1_storage_dominates", Rational(p.p_s) * p.k * p.c_read, p.c_s, true);
    return report;
}

Rational report_one_probability(PairAction action, const ProtocolParams& p,
                                bool auditee_answers) {
    switch (effective(action).report) {
        case ReportRule::AlwaysOne:
            return Rational(1);
        case ReportRule::AlwaysZero:
            return Rational(0);
        case ReportRule::Truthful:
            return auditee_answers ? 1 - p.epsilon : Rational(0);
    }
    return Rational(0);
}

Rational expected_pair_utility(PairAction action, const ProtocolParams& p,
                               bool auditee_stores) {
    validate(p);
    const PairAction act = effective(action);
    const Rational audit_cost = act.audit ? p.c_a : Rational(0);

    if (act.report == ReportRule::AlwaysZero) return -audit_cost;

    if (act.report == ReportRule::Truthful) {
        // 1-entries are exactly the examined valid proofs, so they always
        // survive inspection.
        const Rational one_prob = auditee_stores ? 1 - p.epsilon : Rational(0);
        return one_prob * p.r_a - audit_cost;
    }

    // AlwaysOne: every instance is a 1-entry. The entry is defensible iff the
    // response arrived valid; an inspected indefensible entry forfeits r_a and
    // slashes sigma_a.
    const Rational unbacked = auditee_stores ? p.epsilon : Rational(1);
    const Rational caught = p.p_a * unbacked;
    return (1 - caught) * p.r_a - caught * p.sigma_a - audit_cost;
}

Rational majority_pass_probability(const std::vector<Rational>& one_probs) {
    // Poisson-binomial tail by dynamic programming over vote counts.
    std::vector<Rational> dist{Rational(1)};
    for (const auto& q : one_probs) {
        std::vector<Rational> next(dist.size() + 1, Rational(0));
        for (std::size_t m = 0; m < dist.size(); ++m) {
            if (dist[m] == 0) continue;
            next[m] += dist[m] * (1 - q);
            next[m + 1] += dist[m] * q;
        }
        dist = std::move(next);
    }
    Rational pass(0);
    for (std::size_t m = 0; m < dist.size(); ++m)
        if (2 * m > one_probs.size()) pass += dist[m];
    return pass;
}

bool answers_audits(const Profile& profile, const ProtocolParams& params, int j) {
    const auto& s = profile[static_cast<std::size_t>(j)];
    if (s.mode == StorageMode::Store) return true;
    if (s.mode != StorageMode::Reconstruct) return false;
    int storing = 0;
    for (std::size_t m = 0; m < profile.size(); ++m)
        if (static_cast<int>(m) != j && profile[m].store()) ++storing;
    return storing >= params.k;
}

Rational expected_storage_slash(const Rational& pass_prob, bool stores,
                                const ProtocolParams& p) {
    const Rational fail_prob =
        stores ? (p.epsilon_on_chain ? p.epsilon : Rational(0)) : Rational(1);
    if (fail_prob == 0 || p.c_max == 0 || p.sigma_s == 0) return Rational(0);

    // m passing instances out of p_s, binomially distributed.
    Rational expected_checks(0);
    std::vector<Rational> pmf(static_cast<std::size_t>(p.p_s) + 1);
    BigInt binom = 1;
    for (int m = 0; m <= p.p_s; ++m) {
        pmf[static_cast<std::size_t>(m)] = Rational(binom);
        binom = binom * (p.p_s - m) / (m + 1);
    }
    for (int m = 0; m <= p.p_s; ++m) {
        Rational prob = pmf[static_cast<std::size_t>(m)];
        for (int t = 0; t < m; ++t) prob *= pass_prob;
        for (int t = m; t < p.p_s; ++t) prob *= 1 - pass_prob;
        const Rational score = Rational(m, p.p_s);
        const BigInt checks = round_half_up((1 - score * score) * p.c_max);
        expected_checks += prob * Rational(checks);
    }
    return expected_checks * fail_prob * p.sigma_s;
}

ExactUtilityBreakdown expected_utility(int i, const Profile& profile,
                                       const ProtocolParams& p) {
    validate(p);
    const int n = p.n;
    if (static_cast<int>(profile.size()) != n)
        throw std::invalid_argument("profile size does not match n");
    if (i < 0 || i >= n) throw std::out_of_range("SP index out of range");

    const auto& mine = profile[static_cast<std::size_t>(i)];
    const bool i_answers = answers_audits(profile, p, i);

    ExactUtilityBreakdown u;

    // Storage role: peers vote on each of my p_s instances.
    std::vector<Rational> one_probs;
    one_probs.reserve(static_cast<std::size_t>(n) - 1);
    for (int a = 0; a < n; ++a) {
        if (a == i) continue;
        one_probs.push_back(
            report_one_probability(profile[static_cast<std::size_t>(a)].toward(i), p, i_answers));
    }
    const Rational pass = majority_pass_probability(one_probs);
    u.storage_reward = pass * p.r_s * p.chunks;
    if (mine.store()) u.storage_cost = p.c_s * p.chunks;
    if (mine.mode == StorageMode::Reconstruct && i_answers)
        u.reconstruction_cost = Rational(p.p_s) * p.k * p.c_read;
    u.storage_slash = expected_storage_slash(pass, mine.store(), p);

    // Audit role: p_s instances per auditee, independent and identical.
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const PairAction act = effective(mine.toward(j));
        const bool j_answers = answers_audits(profile, p, j);
        if (act.audit) u.audit_cost += Rational(p.p_s) * p.c_a;

        if (act.report == ReportRule::Truthful) {
            u.audit_reward += Rational(p.p_s) * p.r_a *
                              (j_answers ? 1 - p.epsilon : Rational(0));
        } else if (act.report == ReportRule::AlwaysOne) {
            const Rational unbacked = j_answers ? p.epsilon : Rational(1);
            const Rational caught = p.p_a * unbacked;
            u.audit_reward += Rational(p.p_s) * p.r_a * (1 - caught);
            u.inspection_slash += Rational(p.p_s) * p.sigma_a * caught;
        }
    }
    return u;
}

}  // namespace shelby
