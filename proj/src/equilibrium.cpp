#include "shelby/equilibrium.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "shelby/rng.hpp"

namespace shelby {

Rational nash_tolerance() {
    return Rational(1, 1000000000000LL);  // 1e-12 absolute, in reward units
}

namespace {

// Pair actions with distinct behavior: (audit=false, Truthful) coerces to
// (audit=false, AlwaysZero) and is omitted.
const std::vector<PairAction>& distinct_pair_actions() {
    static const std::vector<PairAction> actions = {
        {true, ReportRule::Truthful},    {true, ReportRule::AlwaysOne},
        {true, ReportRule::AlwaysZero},  {false, ReportRule::AlwaysOne},
        {false, ReportRule::AlwaysZero},
    };
    return actions;
}

const std::vector<StorageMode>& storage_modes() {
    static const std::vector<StorageMode> modes = {StorageMode::Store, StorageMode::None,
                                                   StorageMode::Reconstruct};
    return modes;
}

/// Shared per-call caches. Vote probabilities only ever take the values
/// 0, 1 and 1-eps, so majority results memoize on the three counts.
struct EvalContext {
    const ProtocolParams& p;
    std::map<std::tuple<int, int, int>, Rational> majority_cache;
    std::map<std::pair<Rational, bool>, Rational> slash_cache;

    explicit EvalContext(const ProtocolParams& params) : p(params) {}

    Rational majority(int zeros, int ones, int noisy) {
        const auto key = std::make_tuple(zeros, ones, noisy);
        auto it = majority_cache.find(key);
        if (it != majority_cache.end()) return it->second;
        std::vector<Rational> probs;
        probs.reserve(static_cast<std::size_t>(zeros + ones + noisy));
        for (int t = 0; t < zeros; ++t) probs.push_back(Rational(0));
        for (int t = 0; t < ones; ++t) probs.push_back(Rational(1));
        for (int t = 0; t < noisy; ++t) probs.push_back(1 - p.epsilon);
        Rational result = majority_pass_probability(probs);
        majority_cache.emplace(key, result);
        return result;
    }

    Rational majority_of(const std::vector<Rational>& probs) {
        int zeros = 0, ones = 0, noisy = 0;
        const Rational truthful = 1 - p.epsilon;
        for (const auto& q : probs) {
            if (q == 0)
                ++zeros;
            else if (q == 1)
                ++ones;
            else if (q == truthful)
                ++noisy;
            else
                return majority_pass_probability(probs);  // uncacheable shape
        }
        return majority(zeros, ones, noisy);
    }

    Rational storage_slash(const Rational& pass, bool stores) {
        const auto key = std::make_pair(pass, stores);
        auto it = slash_cache.find(key);
        if (it != slash_cache.end()) return it->second;
        Rational result = expected_storage_slash(pass, stores, p);
        slash_cache.emplace(key, result);
        return result;
    }

    /// Storage-role value for one SP given its mode, whether it answers, and
    /// the vote probabilities of its N-1 auditors.
    Rational storage_value(StorageMode mode, bool answering,
                           const std::vector<Rational>& vote_probs) {
        const Rational pass = majority_of(vote_probs);
        Rational value = pass * p.r_s * p.chunks;
        if (mode == StorageMode::Store) value -= p.c_s * p.chunks;
        if (mode == StorageMode::Reconstruct && answering)
            value -= Rational(p.p_s) * p.k * p.c_read;
        value -= storage_slash(pass, mode == StorageMode::Store);
        return value;
    }
};

bool answers_for_mode(StorageMode mode, int storing_others, int k) {
    if (mode == StorageMode::Store) return true;
    if (mode == StorageMode::Reconstruct) return storing_others >= k;
    return false;
}

/// Total expected utility of profile[i], through the shared caches.
Rational profile_value(EvalContext& ctx, int i, const Profile& profile) {
    const ProtocolParams& p = ctx.p;
    const int n = p.n;
    const bool i_answers = answers_audits(profile, p, i);
    const auto& mine = profile[static_cast<std::size_t>(i)];

    std::vector<Rational> votes;
    votes.reserve(static_cast<std::size_t>(n) - 1);
    for (int a = 0; a < n; ++a)
        if (a != i)
            votes.push_back(report_one_probability(
                profile[static_cast<std::size_t>(a)].toward(i), p, i_answers));

    Rational total = ctx.storage_value(mine.mode, i_answers, votes);
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const bool j_answers = answers_audits(profile, p, j);
        total += Rational(p.p_s) * expected_pair_utility(mine.toward(j), p, j_answers);
    }
    return total;
}

BestResponse best_response_impl(EvalContext& ctx, int i, const Profile& profile) {
    const ProtocolParams& p = ctx.p;
    const int n = p.n;
    const auto& incumbent = profile[static_cast<std::size_t>(i)];

    int storing_others = 0;
    for (int a = 0; a < n; ++a)
        if (a != i && profile[static_cast<std::size_t>(a)].store()) ++storing_others;

    Rational best_total;
    StorageMode best_mode = incumbent.mode;
    std::vector<PairAction> best_actions;
    bool have_best = false;

    for (StorageMode mode : storage_modes()) {
        const bool i_answers = answers_for_mode(mode, storing_others, p.k);

        std::vector<Rational> votes;
        votes.reserve(static_cast<std::size_t>(n) - 1);
        for (int a = 0; a < n; ++a)
            if (a != i)
                votes.push_back(report_one_probability(
                    profile[static_cast<std::size_t>(a)].toward(i), p, i_answers));
        Rational total = ctx.storage_value(mode, i_answers, votes);

        std::vector<PairAction> actions(static_cast<std::size_t>(n),
                                        PairAction{false, ReportRule::AlwaysZero});
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto& peer = profile[static_cast<std::size_t>(j)];
            int peer_sources = 0;
            if (peer.mode == StorageMode::Reconstruct) {
                for (int a = 0; a < n; ++a)
                    if (a != j && a != i && profile[static_cast<std::size_t>(a)].store())
                        ++peer_sources;
                if (mode == StorageMode::Store) ++peer_sources;
            }
            const bool j_answers = peer.store() || (peer.mode == StorageMode::Reconstruct &&
                                                    peer_sources >= p.k);

            Rational best_pair;
            PairAction best_act{};
            bool have_pair = false;
            for (const PairAction& act : distinct_pair_actions()) {
                const Rational value = expected_pair_utility(act, p, j_answers);
                if (!have_pair || value > best_pair) {
                    best_pair = value;
                    best_act = act;
                    have_pair = true;
                } else if (value == best_pair && effective(incumbent.toward(j)) == act) {
                    best_act = act;  // prefer the incumbent action on ties
                }
            }
            total += Rational(p.p_s) * best_pair;
            actions[static_cast<std::size_t>(j)] = best_act;
        }

        if (!have_best || total > best_total ||
            (total == best_total && mode == incumbent.mode)) {
            best_total = total;
            best_mode = mode;
            best_actions = std::move(actions);
            have_best = true;
        }
    }

    BestResponse response;
    response.strategy.mode = best_mode;
    response.strategy.audit.assign(static_cast<std::size_t>(n), false);
    response.strategy.report.assign(static_cast<std::size_t>(n), ReportRule::AlwaysZero);
    for (int j = 0; j < n; ++j)
        if (j != i) response.strategy.set_toward(j, best_actions[static_cast<std::size_t>(j)]);
    response.utility = best_total;
    response.gain = best_total - profile_value(ctx, i, profile);
    return response;
}

}  // namespace

BestResponse best_response(int i, const Profile& profile, const ProtocolParams& params) {
    validate(params);
    if (static_cast<int>(profile.size()) != params.n)
        throw std::invalid_argument("profile size does not match n");
    if (i < 0 || i >= params.n) throw std::out_of_range("SP index out of range");
    EvalContext ctx(params);
    return best_response_impl(ctx, i, profile);
}

NashReport verify_nash(const Profile& profile, const ProtocolParams& params) {
    return verify_nash(profile, params, nash_tolerance());
}

NashReport verify_nash(const Profile& profile, const ProtocolParams& params,
                       const Rational& tolerance) {
    validate(params);
    if (static_cast<int>(profile.size()) != params.n)
        throw std::invalid_argument("profile size does not match n");

    EvalContext ctx(params);
    NashReport report;
    report.tolerance = tolerance;
    report.is_nash = true;
    for (int i = 0; i < params.n; ++i) {
        BestResponse response = best_response_impl(ctx, i, profile);
        report.gains.push_back(response.gain);
        if (response.gain > tolerance && report.is_nash) {
            report.is_nash = false;
            report.witness_sp = i;
            report.witness = std::move(response.strategy);
        }
    }
    return report;
}

bool UniquenessReport::equilibria_equal_honest() const {
    if (equilibria.size() != 1) return false;
    for (const auto& entry : equilibria.front())
        if (entry.mode != StorageMode::Store ||
            entry.action != PairAction{true, ReportRule::Truthful})
            return false;
    return true;
}

bool UniquenessReport::equilibria_equal_dishonest() const {
    if (equilibria.size() != 1) return false;
    for (const auto& entry : equilibria.front())
        if (entry.mode != StorageMode::None ||
            entry.action != PairAction{false, ReportRule::AlwaysOne})
            return false;
    return true;
}

UniquenessReport verify_uniqueness(const ProtocolParams& base_params, int n_small) {
    if (n_small > 6)
        throw std::invalid_argument("uniqueness enumeration rejects n_small > 6");
    if (n_small < 3) throw std::invalid_argument("n_small must be at least 3");

    ProtocolParams params = base_params;
    params.n = n_small;
    validate(params);

    const auto& actions = distinct_pair_actions();
    const auto& modes = storage_modes();
    const int options = static_cast<int>(modes.size() * actions.size());

    EvalContext ctx(params);
    UniquenessReport report;
    report.n = n_small;

    std::set<std::vector<int>> seen;
    std::vector<int> choice(static_cast<std::size_t>(n_small), 0);
    const Rational tolerance = nash_tolerance();

    while (true) {
        Profile profile;
        profile.reserve(static_cast<std::size_t>(n_small));
        for (int sp = 0; sp < n_small; ++sp) {
            const int c = choice[static_cast<std::size_t>(sp)];
            profile.push_back(uniform_strategy(
                n_small, modes[static_cast<std::size_t>(c) / actions.size()],
                actions[static_cast<std::size_t>(c) % actions.size()]));
        }

        // Canonical form: infeasible reconstruction behaves exactly like None.
        std::vector<int> key(static_cast<std::size_t>(n_small));
        for (int sp = 0; sp < n_small; ++sp) {
            auto& s = profile[static_cast<std::size_t>(sp)];
            if (s.mode == StorageMode::Reconstruct && !answers_audits(profile, params, sp))
                s.mode = StorageMode::None;
            const int c = choice[static_cast<std::size_t>(sp)];
            key[static_cast<std::size_t>(sp)] =
                static_cast<int>(s.mode) * static_cast<int>(actions.size()) +
                c % static_cast<int>(actions.size());
        }

        if (seen.insert(key).second) {
            ++report.profiles_checked;
            bool nash = true;
            for (int i = 0; i < n_small && nash; ++i)
                if (best_response_impl(ctx, i, profile).gain > tolerance) nash = false;
            if (nash) {
                std::vector<ClassStrategy> entry;
                entry.reserve(static_cast<std::size_t>(n_small));
                for (int sp = 0; sp < n_small; ++sp) {
                    const auto& s = profile[static_cast<std::size_t>(sp)];
                    entry.push_back({s.mode, s.toward(sp == 0 ? 1 : 0)});
                }
                report.equilibria.push_back(std::move(entry));
            }
        }

        int pos = 0;
        for (; pos < n_small; ++pos) {
            if (++choice[static_cast<std::size_t>(pos)] < options) break;
            choice[static_cast<std::size_t>(pos)] = 0;
        }
        if (pos == n_small) break;
    }

    if (params.p_a == 0) {
        report.expected = "dishonest";
        report.matches_expected = report.equilibria_equal_dishonest();
    } else if (check_conditions(params).theorem3_satisfied()) {
        report.expected = "honest";
        report.matches_expected = report.equilibria_equal_honest();
    }
    return report;
}

// ---------------------------------------------------------------------------
// Coalition analysis.
//
// The coalition game scores skipped audits the way the protocol mechanics do:
// an auditor that never examined a response holds nothing to present at
// inspection time, so its blind 1-entries are caught whenever inspected,
// unless a committed co-conspirator fabricates the proof on demand (base mode
// only; a response commitment fixed at report time forecloses fabrication).
// ---------------------------------------------------------------------------

namespace {

Rational coalition_pair_value(PairAction action, const ProtocolParams& p, bool auditee_answers,
                              bool furnishable) {
    const PairAction act = effective(action);
    const Rational audit_cost = act.audit ? p.c_a : Rational(0);
    if (act.report == ReportRule::AlwaysZero) return -audit_cost;
    if (act.report == ReportRule::Truthful) {
        const Rational one_prob = auditee_answers ? 1 - p.epsilon : Rational(0);
        return one_prob * p.r_a - audit_cost;
    }
    // AlwaysOne. Retention requires having audited.
    const Rational backed =
        act.audit && auditee_answers ? 1 - p.epsilon : Rational(0);
    if (furnishable) return p.r_a - audit_cost;
    const Rational caught = p.p_a * (1 - backed);
    return (1 - caught) * p.r_a - caught * p.sigma_a - audit_cost;
}

/// Ex-post self-enforcement: performing an agreed audit must not lose to
/// quietly skipping it while keeping the agreed report.
bool self_enforcing(PairAction action, const ProtocolParams& p, bool auditee_answers) {
    const PairAction act = effective(action);
    if (!act.audit) return true;
    const PairAction skipped = effective(PairAction{false, act.report});
    return coalition_pair_value(act, p, auditee_answers, false) >=
           coalition_pair_value(skipped, p, auditee_answers, false);
}

struct CoalitionCandidate {
    std::vector<StorageMode> modes;                 // per member
    std::vector<std::vector<PairAction>> intra;     // [auditor][auditee], member order
    std::vector<PairAction> outsider;               // per member, toward all outsiders
};

struct CoalitionContext {
    const ProtocolParams& p;
    const CoalitionSpec& spec;
    EvalContext eval;
    int n;
    int j_size;
    int outsiders;
    bool furnish;  // commitment power usable: base mode only

    CoalitionContext(const ProtocolParams& params, const CoalitionSpec& s)
        : p(params),
          spec(s),
          eval(params),
          n(params.n),
          j_size(static_cast<int>(s.members.size())),
          outsiders(params.n - static_cast<int>(s.members.size())),
          furnish(s.commitment && !s.extension_mode) {}

    bool member_answers(const CoalitionCandidate& c, int mi) const {
        int storing_others = outsiders;  // outsiders are honest and store
        for (int other = 0; other < j_size; ++other)
            if (other != mi && c.modes[static_cast<std::size_t>(other)] == StorageMode::Store)
                ++storing_others;
        return answers_for_mode(c.modes[static_cast<std::size_t>(mi)], storing_others, p.k);
    }

    /// Votes on member mi's audit instances: outsiders report truthfully,
    /// co-members per the candidate's intra actions.
    Rational storage_term(const CoalitionCandidate& c, int mi) {
        const bool ans = member_answers(c, mi);
        std::vector<Rational> votes;
        votes.reserve(static_cast<std::size_t>(n) - 1);
        const Rational truthful = ans ? 1 - p.epsilon : Rational(0);
        for (int t = 0; t < outsiders; ++t) votes.push_back(truthful);
        for (int other = 0; other < j_size; ++other) {
            if (other == mi) continue;
            votes.push_back(report_one_probability(
                c.intra[static_cast<std::size_t>(other)][static_cast<std::size_t>(mi)], p, ans));
        }
        return eval.storage_value(c.modes[static_cast<std::size_t>(mi)], ans, votes);
    }

    Rational member_value(const CoalitionCandidate& c, int mi) {
        Rational total = storage_term(c, mi);
        for (int other = 0; other < j_size; ++other) {
            if (other == mi) continue;
            total += Rational(p.p_s) *
                     coalition_pair_value(
                         c.intra[static_cast<std::size_t>(mi)][static_cast<std::size_t>(other)],
                         p, member_answers(c, other), furnish);
        }
        total += Rational(p.p_s) * outsiders *
                 coalition_pair_value(c.outsider[static_cast<std::size_t>(mi)], p, true, false);
        return total;
    }

    /// Actions admissible in a joint deviation: everything under commitment,
    /// only ex-post self-enforcing actions without it.
    std::vector<PairAction> admissible(bool auditee_answers) const {
        std::vector<PairAction> result;
        for (const PairAction& act : distinct_pair_actions()) {
            if (!spec.commitment && !self_enforcing(act, p, auditee_answers)) continue;
            result.push_back(act);
        }
        return result;
    }
};

CoalitionCandidate honest_candidate(int j_size) {
    CoalitionCandidate c;
    c.modes.assign(static_cast<std::size_t>(j_size), StorageMode::Store);
    c.intra.assign(static_cast<std::size_t>(j_size),
                   std::vector<PairAction>(static_cast<std::size_t>(j_size),
                                           PairAction{true, ReportRule::Truthful}));
    c.outsider.assign(static_cast<std::size_t>(j_size),
                      PairAction{true, ReportRule::Truthful});
    return c;
}

/// Iterates mixed-radix counters; returns false when the space is exhausted.
bool advance(std::vector<int>& digits, int radix) {
    for (auto& d : digits) {
        if (++d < radix) return true;
        d = 0;
    }
    return false;
}

}  // namespace

DeviationReport coalition_best_deviation(const CoalitionSpec& spec,
                                         const ProtocolParams& params) {
    validate(params);
    std::vector<int> members = spec.members;
    std::sort(members.begin(), members.end());
    if (members.empty()) throw std::invalid_argument("coalition must have at least one member");
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
        throw std::invalid_argument("coalition members must be distinct");
    if (members.front() < 0 || members.back() >= params.n)
        throw std::invalid_argument("coalition member index out of range");
    if (2 * static_cast<int>(members.size()) >= params.n && !spec.exploratory)
        throw std::invalid_argument(
            "coalition of size >= N/2 violates the theorem hypotheses "
            "(set exploratory to analyze it anyway)");

    CoalitionSpec sorted_spec = spec;
    sorted_spec.members = members;
    CoalitionContext ctx(params, sorted_spec);
    const int j = ctx.j_size;
    const Rational tolerance = nash_tolerance();

    DeviationReport report;
    report.members = members;
    report.exploratory = spec.exploratory;
    report.bound = Rational(j) * j * params.c_a * params.p_s;
    report.bound_adjusted =
        Rational(j) * j * (params.c_a + params.epsilon * params.r_a) * params.p_s;

    const CoalitionCandidate baseline = honest_candidate(j);
    std::vector<Rational> baseline_values;
    baseline_values.reserve(static_cast<std::size_t>(j));
    for (int mi = 0; mi < j; ++mi) baseline_values.push_back(ctx.member_value(baseline, mi));
    for (const auto& v : baseline_values) report.baseline_joint += v;

    // Best joint-sum deviation. Given a storage-mode vector, the joint sum
    // decomposes per auditee: actions toward member mi touch only mi's score
    // and the actors' own pair payoffs, so each auditee block optimizes
    // independently; outsider-facing actions decompose per pair.
    const int mode_count = static_cast<int>(storage_modes().size());
    CoalitionCandidate best;
    Rational best_joint;
    bool have_best = false;

    std::vector<int> mode_digits(static_cast<std::size_t>(j), 0);
    do {
        CoalitionCandidate cand = honest_candidate(j);
        for (int mi = 0; mi < j; ++mi)
            cand.modes[static_cast<std::size_t>(mi)] =
                storage_modes()[static_cast<std::size_t>(mode_digits[static_cast<std::size_t>(mi)])];

        const auto outsider_choices = ctx.admissible(true);
        Rational outsider_best;
        PairAction outsider_act{};
        bool have_outsider = false;
        for (const PairAction& act : outsider_choices) {
            const Rational value = coalition_pair_value(act, params, true, false);
            if (!have_outsider || value > outsider_best) {
                outsider_best = value;
                outsider_act = act;
                have_outsider = true;
            }
        }
        for (int mi = 0; mi < j; ++mi) cand.outsider[static_cast<std::size_t>(mi)] = outsider_act;

        Rational joint = Rational(params.p_s) * ctx.outsiders * outsider_best * j;

        for (int auditee = 0; auditee < j; ++auditee) {
            const bool auditee_ans = ctx.member_answers(cand, auditee);
            const auto choices = ctx.admissible(auditee_ans);
            const int radix = static_cast<int>(choices.size());
            std::vector<int> combo(static_cast<std::size_t>(j - 1), 0);
            Rational block_best;
            std::vector<int> block_best_combo;
            bool have_block = false;
            do {
                int slot = 0;
                Rational block;
                for (int actor = 0; actor < j; ++actor) {
                    if (actor == auditee) continue;
                    const PairAction act =
                        choices[static_cast<std::size_t>(combo[static_cast<std::size_t>(slot)])];
                    cand.intra[static_cast<std::size_t>(actor)]
                              [static_cast<std::size_t>(auditee)] = act;
                    block += Rational(params.p_s) *
                             coalition_pair_value(act, params, auditee_ans, ctx.furnish);
                    ++slot;
                }
                block += ctx.storage_term(cand, auditee);
                if (!have_block || block > block_best) {
                    block_best = block;
                    block_best_combo = combo;
                    have_block = true;
                }
            } while (advance(combo, radix));

            int slot = 0;
            for (int actor = 0; actor < j; ++actor) {
                if (actor == auditee) continue;
                cand.intra[static_cast<std::size_t>(actor)][static_cast<std::size_t>(auditee)] =
                    choices[static_cast<std::size_t>(
                        block_best_combo[static_cast<std::size_t>(slot)])];
                ++slot;
            }
            joint += block_best;
        }

        if (!have_best || joint > best_joint) {
            best_joint = joint;
            best = cand;
            have_best = true;
        }
    } while (advance(mode_digits, mode_count));

    report.best_joint = best_joint;
    report.gain = best_joint - report.baseline_joint;
    report.bound_satisfied = report.gain <= report.bound + report.bound * Rational(1, 1000000000);
    report.bound_adjusted_satisfied =
        report.gain <= report.bound_adjusted + report.bound_adjusted * Rational(1, 1000000000);

    report.best_deviation.reserve(static_cast<std::size_t>(j));
    for (int mi = 0; mi < j; ++mi) {
        Strategy s = honest_strategy(params.n);
        s.mode = best.modes[static_cast<std::size_t>(mi)];
        for (int peer = 0; peer < params.n; ++peer) {
            const auto it = std::find(members.begin(), members.end(), peer);
            if (peer == members[static_cast<std::size_t>(mi)]) continue;
            if (it != members.end()) {
                const int other = static_cast<int>(it - members.begin());
                s.set_toward(peer, best.intra[static_cast<std::size_t>(mi)]
                                             [static_cast<std::size_t>(other)]);
            } else {
                s.set_toward(peer, best.outsider[static_cast<std::size_t>(mi)]);
            }
        }
        report.best_deviation.push_back(std::move(s));
        report.member_gains.push_back(ctx.member_value(best, mi) -
                                      baseline_values[static_cast<std::size_t>(mi)]);
    }

    // l-strong check: does any admissible deviation strictly improve every
    // member? First the best-sum deviation itself, then a sound per-member
    // upper bound, then exhaustive (or hill-climbing) search only if needed.
    report.all_members_gain =
        std::all_of(report.member_gains.begin(), report.member_gains.end(),
                    [&](const Rational& g) { return g > tolerance; });

    if (!report.all_members_gain) {
        bool need_search = false;
        for (int mi = 0; mi < j && !need_search; ++mi) {
            // Upper bound: best storage value over modes with every co-vote
            // at probability 1, plus per-pair maxima.
            Rational ub;
            bool have_ub = false;
            for (StorageMode mode : storage_modes()) {
                CoalitionCandidate relaxed = honest_candidate(j);
                relaxed.modes.assign(static_cast<std::size_t>(j), StorageMode::Store);
                relaxed.modes[static_cast<std::size_t>(mi)] = mode;
                for (int other = 0; other < j; ++other)
                    if (other != mi)
                        relaxed.intra[static_cast<std::size_t>(other)]
                                     [static_cast<std::size_t>(mi)] =
                            PairAction{false, ReportRule::AlwaysOne};
                const Rational sv = ctx.storage_term(relaxed, mi);
                if (!have_ub || sv > ub) {
                    ub = sv;
                    have_ub = true;
                }
            }
            Rational pair_ub;
            bool have_pair_ub = false;
            for (const PairAction& act : ctx.admissible(true)) {
                for (bool ans : {true, false}) {
                    const Rational v = coalition_pair_value(act, params, ans, ctx.furnish);
                    if (!have_pair_ub || v > pair_ub) {
                        pair_ub = v;
                        have_pair_ub = true;
                    }
                }
            }
            Rational outsider_ub;
            bool have_out_ub = false;
            for (const PairAction& act : ctx.admissible(true)) {
                const Rational v = coalition_pair_value(act, params, true, false);
                if (!have_out_ub || v > outsider_ub) {
                    outsider_ub = v;
                    have_out_ub = true;
                }
            }
            ub += Rational(params.p_s) * (j - 1) * pair_ub;
            ub += Rational(params.p_s) * ctx.outsiders * outsider_ub;
            if (ub - baseline_values[static_cast<std::size_t>(mi)] > tolerance)
                need_search = true;
        }

        if (need_search) {
            // A member's outsider-facing actions touch nobody else's payoff,
            // so every member takes its own argmax there; the joint search
            // runs over modes^J x intra-actions^(J(J-1)).
            PairAction outsider_best_act{false, ReportRule::AlwaysZero};
            {
                Rational best_v;
                bool first = true;
                for (const PairAction& act : ctx.admissible(true)) {
                    const Rational v = coalition_pair_value(act, params, true, false);
                    if (first || v > best_v) {
                        best_v = v;
                        outsider_best_act = act;
                        first = false;
                    }
                }
            }
            const double space =
                std::pow(3.0, j) * std::pow(5.0, static_cast<double>(j) * (j - 1));
            if (space <= static_cast<double>(1 << 20)) {
                // Exhaustive: any candidate whose minimum member gain clears
                // the tolerance settles the question.
                std::vector<int> modes_d(static_cast<std::size_t>(j), 0);
                bool found = false;
                do {
                    CoalitionCandidate cand = honest_candidate(j);
                    cand.outsider.assign(static_cast<std::size_t>(j), outsider_best_act);
                    for (int mi = 0; mi < j; ++mi)
                        cand.modes[static_cast<std::size_t>(mi)] = storage_modes()
                            [static_cast<std::size_t>(modes_d[static_cast<std::size_t>(mi)])];
                    const auto& acts = distinct_pair_actions();
                    std::vector<int> pair_d(static_cast<std::size_t>(j * (j - 1)), 0);
                    do {
                        int slot = 0;
                        bool admissible_combo = true;
                        for (int a = 0; a < j && admissible_combo; ++a)
                            for (int b = 0; b < j && admissible_combo; ++b) {
                                if (a == b) continue;
                                const PairAction act =
                                    acts[static_cast<std::size_t>(
                                        pair_d[static_cast<std::size_t>(slot++)])];
                                cand.intra[static_cast<std::size_t>(a)]
                                          [static_cast<std::size_t>(b)] = act;
                                if (!spec.commitment &&
                                    !self_enforcing(act, params,
                                                    ctx.member_answers(cand, b)))
                                    admissible_combo = false;
                            }
                        if (!admissible_combo) continue;
                        bool all_gain = true;
                        for (int mi = 0; mi < j && all_gain; ++mi)
                            if (ctx.member_value(cand, mi) -
                                    baseline_values[static_cast<std::size_t>(mi)] <=
                                tolerance)
                                all_gain = false;
                        if (all_gain) {
                            found = true;
                            break;
                        }
                    } while (advance(pair_d, static_cast<int>(acts.size())));
                    if (found) break;
                } while (advance(modes_d, mode_count));
                report.all_members_gain = found;
            } else {
                // Coordinate-ascent hill climbing on the minimum member gain,
                // 64 seeded restarts.
                report.exhaustive = false;
                CounterRng rng(params.seed, static_cast<std::uint64_t>(j),
                               CounterRng::Phase::Generic);
                const auto& acts = distinct_pair_actions();
                auto min_gain = [&](const CoalitionCandidate& cand) {
                    Rational m;
                    bool first = true;
                    for (int mi = 0; mi < j; ++mi) {
                        const Rational g = ctx.member_value(cand, mi) -
                                           baseline_values[static_cast<std::size_t>(mi)];
                        if (first || g < m) {
                            m = g;
                            first = false;
                        }
                    }
                    return m;
                };
                bool found = false;
                for (int restart = 0; restart < 64 && !found; ++restart) {
                    CoalitionCandidate cand = honest_candidate(j);
                    cand.outsider.assign(static_cast<std::size_t>(j), outsider_best_act);
                    for (auto& mode : cand.modes)
                        mode = storage_modes()[rng.uniform_below(3)];
                    for (int a = 0; a < j; ++a)
                        for (int b = 0; b < j; ++b)
                            if (a != b)
                                cand.intra[static_cast<std::size_t>(a)]
                                          [static_cast<std::size_t>(b)] =
                                    acts[rng.uniform_below(acts.size())];
                    Rational current = min_gain(cand);
                    bool improved = true;
                    while (improved && !found) {
                        improved = false;
                        for (int a = 0; a < j; ++a) {
                            for (int b = 0; b < j; ++b) {
                                if (a == b) continue;
                                const PairAction saved =
                                    cand.intra[static_cast<std::size_t>(a)]
                                              [static_cast<std::size_t>(b)];
                                for (const PairAction& act : acts) {
                                    if (!spec.commitment &&
                                        !self_enforcing(act, params,
                                                        ctx.member_answers(cand, b)))
                                        continue;
                                    cand.intra[static_cast<std::size_t>(a)]
                                              [static_cast<std::size_t>(b)] = act;
                                    const Rational g = min_gain(cand);
                                    if (g > current) {
                                        current = g;
                                        improved = true;
                                    } else {
                                        cand.intra[static_cast<std::size_t>(a)]
                                                  [static_cast<std::size_t>(b)] = saved;
                                    }
                                }
                            }
                            for (StorageMode mode : storage_modes()) {
                                const StorageMode saved = cand.modes[static_cast<std::size_t>(a)];
                                cand.modes[static_cast<std::size_t>(a)] = mode;
                                const Rational g = min_gain(cand);
                                if (g > current) {
                                    current = g;
                                    improved = true;
                                } else {
                                    cand.modes[static_cast<std::size_t>(a)] = saved;
                                }
                            }
                        }
                        if (current > tolerance) found = true;
                    }
                }
                report.all_members_gain = found;
            }
        }
    }
    return report;
}

StrongEquilibriumReport verify_strong_equilibrium(const ProtocolParams& params,
                                                  int max_coalition, bool commitment,
                                                  bool extension_mode) {
    validate(params);
    if (2 * max_coalition >= params.n)
        throw std::invalid_argument("max_coalition must be below N/2");
    if (params.n > 9)
        throw std::invalid_argument("exhaustive coalition enumeration requires N <= 9");
    if (max_coalition < 1) throw std::invalid_argument("max_coalition must be at least 1");

    StrongEquilibriumReport report;
    const ConditionReport conditions = check_conditions(params);
    report.hypotheses_satisfied = !conditions.theorem3_violated();
    if (!report.hypotheses_satisfied) {
        report.hypotheses_note =
            "conditions (i)-(iii) are violated; coalition results are not pass/fail";
        return report;
    }
    for (const auto* name : {"i", "ii", "iii"})
        if (conditions.by_name(name).status == ConditionStatus::Undefined) {
            if (!report.hypotheses_note.empty()) report.hypotheses_note += "; ";
            report.hypotheses_note +=
                std::string("condition (") + name + ") " + conditions.by_name(name).note;
        }

    report.all_pass = true;
    for (int size = 1; size <= max_coalition; ++size) {
        bool size_pass = true;
        std::vector<int> members(static_cast<std::size_t>(size));
        for (int t = 0; t < size; ++t) members[static_cast<std::size_t>(t)] = t;
        while (true) {
            CoalitionSpec spec;
            spec.members = members;
            spec.commitment = commitment;
            spec.extension_mode = extension_mode;
            DeviationReport deviation = coalition_best_deviation(spec, params);
            const bool passes = !deviation.all_members_gain;
            size_pass = size_pass && passes;
            report.coalitions.push_back(
                {members, deviation.gain, deviation.all_members_gain, passes});

            // next combination
            int pos = size - 1;
            while (pos >= 0 &&
                   members[static_cast<std::size_t>(pos)] == params.n - size + pos)
                --pos;
            if (pos < 0) break;
            ++members[static_cast<std::size_t>(pos)];
            for (int t = pos + 1; t < size; ++t)
                members[static_cast<std::size_t>(t)] =
                    members[static_cast<std::size_t>(t - 1)] + 1;
        }
        report.by_size.emplace_back(size, size_pass);
        report.all_pass = report.all_pass && size_pass;
    }
    return report;
}

}  // namespace shelby
