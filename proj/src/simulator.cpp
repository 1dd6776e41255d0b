#include "shelby/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shelby {

namespace {

void append_u32(Bytes& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_u64(Bytes& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

Bytes serialize_response(int auditee, int instance, const InclusionProof& proof) {
    Bytes out;
    append_u32(out, static_cast<std::uint32_t>(auditee));
    append_u32(out, static_cast<std::uint32_t>(instance));
    append_u64(out, proof.leaf_index);
    out.insert(out.end(), proof.leaf_digest.bytes.begin(), proof.leaf_digest.bytes.end());
    for (const auto& node : proof.sibling_path) {
        out.push_back(node.side == Side::Left ? 0 : 1);
        out.insert(out.end(), node.digest.bytes.begin(), node.digest.bytes.end());
    }
    return out;
}

}  // namespace

AuditAssignment assign_audits(const ProtocolParams& params, std::uint64_t epoch_id) {
    validate(params);
    CounterRng rng(params.seed, epoch_id, CounterRng::Phase::Assign);
    AuditAssignment assignment;
    assignment.epoch_id = epoch_id;
    assignment.entries.reserve(static_cast<std::size_t>(params.n) * params.p_s);
    for (int auditee = 0; auditee < params.n; ++auditee)
        for (int instance = 0; instance < params.p_s; ++instance) {
            const int chunk =
                static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(params.chunks)));
            assignment.entries.push_back({auditee, chunk, instance});
        }
    return assignment;
}

Simulation::Simulation(ProtocolParams params, Profile strategies, SimOptions options)
    : params_(std::move(params)),
      strategies_(std::move(strategies)),
      options_(std::move(options)),
      tree_(HashFunction{params_.hash}) {
    validate(params_);
    if (static_cast<int>(strategies_.size()) != params_.n)
        throw std::invalid_argument("profile size does not match n");
    if (options_.collusion) {
        auto& members = options_.collusion->members;
        std::sort(members.begin(), members.end());
        for (int m : members)
            if (m < 0 || m >= params_.n)
                throw std::invalid_argument("collusion member index out of range");
    }

    chunk_data_.resize(static_cast<std::size_t>(params_.n));
    storage_commitments_.reserve(static_cast<std::size_t>(params_.n));
    for (int sp = 0; sp < params_.n; ++sp) {
        auto& chunks = chunk_data_[static_cast<std::size_t>(sp)];
        chunks.reserve(static_cast<std::size_t>(params_.chunks));
        for (int c = 0; c < params_.chunks; ++c) {
            CounterRng rng(params_.seed,
                           (static_cast<std::uint64_t>(sp) << 24) | static_cast<std::uint64_t>(c),
                           CounterRng::Phase::ChunkData);
            Bytes data(static_cast<std::size_t>(params_.chunk_size));
            for (auto& byte : data) byte = static_cast<std::uint8_t>(rng.next_u64() & 0xff);
            chunks.push_back(std::move(data));
        }
        storage_commitments_.push_back(tree_.build_commitment(chunks));
    }
}

bool Simulation::audited(int auditor, int auditee) const {
    return strategies_[static_cast<std::size_t>(auditor)].audit[static_cast<std::size_t>(auditee)];
}

bool Simulation::answers(int auditee) const {
    return answers_audits(strategies_, params_, auditee);
}

bool Simulation::colluders(int a, int b) const {
    if (!options_.collusion || !options_.collusion->commitment || a == b) return false;
    const auto& members = options_.collusion->members;
    return std::binary_search(members.begin(), members.end(), a) &&
           std::binary_search(members.begin(), members.end(), b);
}

std::vector<std::vector<ResponseRecord>> Simulation::collect_responses(
    const AuditAssignment& assignment) const {
    const int n = params_.n;
    CounterRng rng(params_.seed, assignment.epoch_id, CounterRng::Phase::Responses);
    const CoinThreshold noise = CoinThreshold::from(params_.epsilon);

    std::vector<std::vector<ResponseRecord>> responses(
        static_cast<std::size_t>(n),
        std::vector<ResponseRecord>(assignment.entries.size()));

    for (std::size_t e = 0; e < assignment.entries.size(); ++e) {
        const auto& entry = assignment.entries[e];
        if (!answers(entry.auditee)) continue;  // missing everywhere
        const InclusionProof proof = tree_.open_inclusion(
            chunk_data_[static_cast<std::size_t>(entry.auditee)],
            static_cast<std::size_t>(entry.chunk_index));
        for (int auditor = 0; auditor < n; ++auditor) {
            if (auditor == entry.auditee) continue;
            auto& record = responses[static_cast<std::size_t>(auditor)][e];
            record.proof = proof;
            if (params_.epsilon > 0 && noise.flip(rng)) {
                // Garbled in transit: corrupt the proof so real verification fails.
                record.proof.leaf_digest.bytes[0] ^= 0xff;
                record.status = ResponseStatus::InvalidProof;
            } else {
                record.status = ResponseStatus::ValidProof;
            }
        }
    }
    return responses;
}

ReportMatrix Simulation::submit_reports(
    const AuditAssignment& assignment,
    const std::vector<std::vector<ResponseRecord>>& responses) const {
    const int n = params_.n;
    ReportMatrix matrix;
    matrix.submitted.assign(static_cast<std::size_t>(n), true);
    matrix.reports.assign(static_cast<std::size_t>(n),
                          std::vector<std::vector<std::uint8_t>>(static_cast<std::size_t>(n)));

    for (int auditor = 0; auditor < n; ++auditor) {
        for (int auditee = 0; auditee < n; ++auditee) {
            if (auditor == auditee) continue;
            matrix.reports[static_cast<std::size_t>(auditor)][static_cast<std::size_t>(auditee)]
                .assign(static_cast<std::size_t>(params_.p_s), 0);
        }
    }

    for (std::size_t e = 0; e < assignment.entries.size(); ++e) {
        const auto& entry = assignment.entries[e];
        for (int auditor = 0; auditor < n; ++auditor) {
            if (auditor == entry.auditee) continue;
            const PairAction act =
                effective(strategies_[static_cast<std::size_t>(auditor)].toward(entry.auditee));
            std::uint8_t value = 0;
            switch (act.report) {
                case ReportRule::AlwaysOne:
                    value = 1;
                    break;
                case ReportRule::AlwaysZero:
                    value = 0;
                    break;
                case ReportRule::Truthful:
                    value = (audited(auditor, entry.auditee) &&
                             responses[static_cast<std::size_t>(auditor)][e].status ==
                                 ResponseStatus::ValidProof)
                                ? 1
                                : 0;
                    break;
            }
            matrix.reports[static_cast<std::size_t>(auditor)]
                          [static_cast<std::size_t>(entry.auditee)]
                          [static_cast<std::size_t>(entry.instance)] = value;
        }
    }
    return matrix;
}

std::vector<Rational> Simulation::aggregate_scores(const AuditAssignment& assignment,
                                                   const ReportMatrix& reports) const {
    const int n = params_.n;
    std::vector<int> passes(static_cast<std::size_t>(n), 0);
    for (const auto& entry : assignment.entries) {
        int votes = 0;
        for (int auditor = 0; auditor < n; ++auditor) {
            if (auditor == entry.auditee || !reports.submitted[static_cast<std::size_t>(auditor)])
                continue;
            votes += reports.reports[static_cast<std::size_t>(auditor)]
                                    [static_cast<std::size_t>(entry.auditee)]
                                    [static_cast<std::size_t>(entry.instance)];
        }
        if (2 * votes > n - 1) ++passes[static_cast<std::size_t>(entry.auditee)];
    }
    std::vector<Rational> scores;
    scores.reserve(static_cast<std::size_t>(n));
    for (int sp = 0; sp < n; ++sp)
        scores.push_back(Rational(passes[static_cast<std::size_t>(sp)], params_.p_s));
    return scores;
}

void Simulation::run_inspections(EpochLedger& ledger) const {
    if (options_.extension_mode && ledger.response_commitments.empty())
        throw std::logic_error(
            "extension mode requires response commitments submitted at report time");

    const int n = params_.n;
    CounterRng rng(params_.seed, ledger.assignment.epoch_id, CounterRng::Phase::Inspect);
    const CoinThreshold inspect = CoinThreshold::from(params_.p_a);

    // Per auditor: the retained valid responses in commitment order, for
    // extension-mode openings.
    std::vector<std::vector<std::size_t>> retained(static_cast<std::size_t>(n));
    std::vector<std::vector<Bytes>> retained_bytes(static_cast<std::size_t>(n));
    if (options_.extension_mode) {
        for (int a = 0; a < n; ++a)
            for (std::size_t e = 0; e < ledger.assignment.entries.size(); ++e) {
                const auto& entry = ledger.assignment.entries[e];
                if (entry.auditee == a || !audited(a, entry.auditee)) continue;
                const auto& record = ledger.responses[static_cast<std::size_t>(a)][e];
                if (record.status != ResponseStatus::ValidProof) continue;
                retained[static_cast<std::size_t>(a)].push_back(e);
                retained_bytes[static_cast<std::size_t>(a)].push_back(
                    serialize_response(entry.auditee, entry.instance, record.proof));
            }
    }

    if (ledger.slashes.empty()) ledger.slashes.assign(static_cast<std::size_t>(n), SlashTotals{});

    for (int auditor = 0; auditor < n; ++auditor) {
        for (std::size_t e = 0; e < ledger.assignment.entries.size(); ++e) {
            const auto& entry = ledger.assignment.entries[e];
            if (entry.auditee == auditor) continue;
            const auto& row = ledger.reports.reports[static_cast<std::size_t>(auditor)]
                                                    [static_cast<std::size_t>(entry.auditee)];
            if (row[static_cast<std::size_t>(entry.instance)] != 1) continue;
            if (params_.p_a <= 0 || !inspect.flip(rng)) continue;

            const auto& record = ledger.responses[static_cast<std::size_t>(auditor)][e];
            bool base_ok = audited(auditor, entry.auditee) &&
                           record.status == ResponseStatus::ValidProof &&
                           tree_.verify_inclusion(
                               storage_commitments_[static_cast<std::size_t>(entry.auditee)].root,
                               record.proof,
                               chunk_data_[static_cast<std::size_t>(entry.auditee)]
                                          [static_cast<std::size_t>(entry.chunk_index)]);
            bool furnished = false;
            bool passed;
            if (options_.extension_mode) {
                // The opening must match the commitment fixed at report time;
                // a proof fabricated now cannot.
                bool opening_ok = false;
                if (base_ok) {
                    const auto& list = retained[static_cast<std::size_t>(auditor)];
                    const auto it = std::find(list.begin(), list.end(), e);
                    if (it != list.end()) {
                        const std::size_t pos =
                            static_cast<std::size_t>(it - list.begin());
                        const auto& bytes = retained_bytes[static_cast<std::size_t>(auditor)];
                        const InclusionProof opening = tree_.open_inclusion(bytes, pos);
                        opening_ok = tree_.verify_inclusion(
                            ledger.response_commitments[static_cast<std::size_t>(auditor)].root,
                            opening, bytes[pos]);
                    }
                }
                passed = base_ok && opening_ok;
            } else {
                furnished = !base_ok && colluders(auditor, entry.auditee);
                passed = base_ok || furnished;
            }

            if (!passed) {
                auto& slash = ledger.slashes[static_cast<std::size_t>(auditor)];
                slash.inspection += params_.sigma_a_d();
                slash.inspection_events += 1;
            }
            ledger.inspections.push_back(
                {auditor, entry.auditee, entry.instance, passed, furnished});
        }
    }
}

void Simulation::run_extra_audits(EpochLedger& ledger) const {
    const int n = params_.n;
    CounterRng rng(params_.seed, ledger.assignment.epoch_id, CounterRng::Phase::ExtraAudits);
    const CoinThreshold noise = CoinThreshold::from(params_.epsilon);

    if (ledger.slashes.empty()) ledger.slashes.assign(static_cast<std::size_t>(n), SlashTotals{});
    ledger.extra_audits.assign(static_cast<std::size_t>(n), {});

    for (int sp = 0; sp < n; ++sp) {
        const Rational& score = ledger.scores[static_cast<std::size_t>(sp)];
        if (score >= 1) continue;
        const BigInt count = round_half_up((1 - score * score) * params_.c_max);
        const bool stores = strategies_[static_cast<std::size_t>(sp)].store();
        for (BigInt t = 0; t < count; ++t) {
            const int chunk =
                static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(params_.chunks)));
            bool passed = false;
            if (stores) {
                const bool garbled =
                    params_.epsilon_on_chain && params_.epsilon > 0 && noise.flip(rng);
                passed = !garbled;
            }
            if (!passed) {
                auto& slash = ledger.slashes[static_cast<std::size_t>(sp)];
                slash.storage += params_.sigma_s_d();
                slash.storage_events += 1;
            }
            ledger.extra_audits[static_cast<std::size_t>(sp)].push_back({chunk, passed});
        }
    }
}

void Simulation::settle_epoch(EpochLedger& ledger) const {
    const int n = params_.n;
    std::vector<long> ones(static_cast<std::size_t>(n), 0);
    for (int auditor = 0; auditor < n; ++auditor)
        for (int auditee = 0; auditee < n; ++auditee) {
            if (auditor == auditee || !ledger.reports.submitted[static_cast<std::size_t>(auditor)])
                continue;
            for (auto v : ledger.reports.reports[static_cast<std::size_t>(auditor)]
                                                [static_cast<std::size_t>(auditee)])
                ones[static_cast<std::size_t>(auditor)] += v;
        }

    std::vector<long> forfeited(static_cast<std::size_t>(n), 0);
    for (const auto& outcome : ledger.inspections)
        if (!outcome.passed) ++forfeited[static_cast<std::size_t>(outcome.auditor)];

    ledger.utilities.assign(static_cast<std::size_t>(n), UtilityBreakdown{});
    for (int sp = 0; sp < n; ++sp) {
        const auto& strategy = strategies_[static_cast<std::size_t>(sp)];
        auto& u = ledger.utilities[static_cast<std::size_t>(sp)];

        u.storage_reward = to_double(ledger.scores[static_cast<std::size_t>(sp)]) *
                           params_.r_s_d() * params_.chunks;
        if (strategy.store()) u.storage_cost = params_.c_s_d() * params_.chunks;
        if (strategy.mode == StorageMode::Reconstruct && answers(sp))
            u.reconstruction_cost = params_.p_s * params_.k * params_.c_read_d();

        int audited_peers = 0;
        for (int peer = 0; peer < n; ++peer)
            if (peer != sp && strategy.audit[static_cast<std::size_t>(peer)]) ++audited_peers;
        u.audit_cost = params_.c_a_d() * params_.p_s * audited_peers;

        // A failed inspection forfeits that entry's reward on top of sigma_a.
        u.audit_reward = params_.r_a_d() * static_cast<double>(ones[static_cast<std::size_t>(sp)] -
                                                               forfeited[static_cast<std::size_t>(sp)]);
        u.inspection_slash = ledger.slashes[static_cast<std::size_t>(sp)].inspection;
        u.storage_slash = ledger.slashes[static_cast<std::size_t>(sp)].storage;
    }
}

EpochLedger Simulation::run_epoch(std::uint64_t epoch_id) const {
    EpochLedger ledger;
    ledger.assignment = assign_audits(params_, epoch_id);
    ledger.responses = collect_responses(ledger.assignment);
    ledger.reports = submit_reports(ledger.assignment, ledger.responses);

    if (options_.extension_mode) {
        // Response commitments are fixed when reports go on-chain.
        ledger.response_commitments.reserve(static_cast<std::size_t>(params_.n));
        for (int a = 0; a < params_.n; ++a) {
            std::vector<Bytes> held;
            for (std::size_t e = 0; e < ledger.assignment.entries.size(); ++e) {
                const auto& entry = ledger.assignment.entries[e];
                if (entry.auditee == a || !audited(a, entry.auditee)) continue;
                const auto& record = ledger.responses[static_cast<std::size_t>(a)][e];
                if (record.status != ResponseStatus::ValidProof) continue;
                held.push_back(serialize_response(entry.auditee, entry.instance, record.proof));
            }
            ledger.response_commitments.push_back(tree_.commit_responses(held));
        }
    }

    ledger.scores = aggregate_scores(ledger.assignment, ledger.reports);
    ledger.slashes.assign(static_cast<std::size_t>(params_.n), SlashTotals{});
    run_inspections(ledger);
    run_extra_audits(ledger);
    settle_epoch(ledger);
    return ledger;
}

SimulationSummary Simulation::run(int epochs, std::uint64_t first_epoch) const {
    if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
    const int n = params_.n;

    SimulationSummary summary;
    summary.epochs = epochs;
    summary.utility.assign(static_cast<std::size_t>(n), MeanVar{});
    summary.mean_breakdown.assign(static_cast<std::size_t>(n), UtilityBreakdown{});
    summary.inspection_slash_events.assign(static_cast<std::size_t>(n), 0);
    summary.storage_slash_events.assign(static_cast<std::size_t>(n), 0);
    summary.mean_score.assign(static_cast<std::size_t>(n), 0.0);
    summary.score_trajectory.reserve(static_cast<std::size_t>(epochs));

    std::vector<double> m2(static_cast<std::size_t>(n), 0.0);
    for (int e = 0; e < epochs; ++e) {
        const EpochLedger ledger = run_epoch(first_epoch + static_cast<std::uint64_t>(e));
        double epoch_score_sum = 0;
        for (int sp = 0; sp < n; ++sp) {
            const std::size_t s = static_cast<std::size_t>(sp);
            const double total = ledger.utilities[s].total();
            const double delta = total - summary.utility[s].mean;
            summary.utility[s].mean += delta / (e + 1);
            m2[s] += delta * (total - summary.utility[s].mean);

            auto& mb = summary.mean_breakdown[s];
            const auto& ub = ledger.utilities[s];
            const double w = 1.0 / (e + 1);
            mb.storage_reward += (ub.storage_reward - mb.storage_reward) * w;
            mb.audit_reward += (ub.audit_reward - mb.audit_reward) * w;
            mb.storage_cost += (ub.storage_cost - mb.storage_cost) * w;
            mb.audit_cost += (ub.audit_cost - mb.audit_cost) * w;
            mb.reconstruction_cost += (ub.reconstruction_cost - mb.reconstruction_cost) * w;
            mb.inspection_slash += (ub.inspection_slash - mb.inspection_slash) * w;
            mb.storage_slash += (ub.storage_slash - mb.storage_slash) * w;

            summary.inspection_slash_events[s] += ledger.slashes[s].inspection_events;
            summary.storage_slash_events[s] += ledger.slashes[s].storage_events;
            const double score = to_double(ledger.scores[s]);
            summary.mean_score[s] += (score - summary.mean_score[s]) * w;
            epoch_score_sum += score;
        }
        summary.score_trajectory.push_back(epoch_score_sum / n);
    }
    for (int sp = 0; sp < n; ++sp) {
        const std::size_t s = static_cast<std::size_t>(sp);
        summary.utility[s].variance = epochs > 1 ? m2[s] / (epochs - 1) : 0.0;
    }
    return summary;
}

double SimulationSummary::mean_pair_audit_utility(int sp, int n, int p_s) const {
    const auto& mb = mean_breakdown[static_cast<std::size_t>(sp)];
    return (mb.audit_reward - mb.audit_cost - mb.inspection_slash) /
           (static_cast<double>(n - 1) * p_s);
}

SimulationSummary run_simulation(const ProtocolParams& params, const Profile& strategies,
                                 int epochs, SimOptions options) {
    return Simulation(params, strategies, std::move(options)).run(epochs);
}

}  // namespace shelby
