#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shelby/merkle.hpp"
#include "shelby/model.hpp"
#include "shelby/params.hpp"
#include "shelby/rng.hpp"
#include "shelby/strategy.hpp"

namespace shelby {

struct AuditEntry {
    int auditee = 0;
    int chunk_index = 0;
    int instance = 0;  // 0..p_s-1 within the auditee's epoch
};

/// Deterministic function of (seed, epoch_id); exactly p_s entries per
/// auditee, ordered by (auditee, instance).
struct AuditAssignment {
    std::uint64_t epoch_id = 0;
    std::vector<AuditEntry> entries;
};

AuditAssignment assign_audits(const ProtocolParams& params, std::uint64_t epoch_id);

enum class ResponseStatus : std::uint8_t { ValidProof, InvalidProof, Missing };

struct ResponseRecord {
    ResponseStatus status = ResponseStatus::Missing;
    InclusionProof proof;  // corrupted when status == InvalidProof, absent when Missing
};

/// reports[auditor][auditee] is a binary vector over that auditee's p_s
/// instances; a non-submitted report row counts as all zeros.
struct ReportMatrix {
    std::vector<std::vector<std::vector<std::uint8_t>>> reports;
    std::vector<bool> submitted;
};

struct InspectionOutcome {
    int auditor = 0;
    int auditee = 0;
    int instance = 0;
    bool passed = false;
    bool furnished = false;  // passed only because a committed co-conspirator produced the proof
};

struct ExtraAuditOutcome {
    int chunk_index = 0;
    bool passed = false;
};

struct SlashTotals {
    double inspection = 0;
    double storage = 0;
    long inspection_events = 0;
    long storage_events = 0;
};

struct EpochLedger {
    AuditAssignment assignment;
    std::vector<std::vector<ResponseRecord>> responses;  // [auditor][entry index]
    ReportMatrix reports;
    std::vector<Rational> scores;  // exact share of passing instances
    std::vector<InspectionOutcome> inspections;
    std::vector<std::vector<ExtraAuditOutcome>> extra_audits;  // per SP
    std::vector<SlashTotals> slashes;
    std::vector<UtilityBreakdown> utilities;
    std::vector<VectorCommitment> response_commitments;  // extension mode only
};

/// A coalition acting inside the simulation: members with commitment power
/// fabricate inclusion proofs on demand when a co-member's report entry is
/// inspected. The fabricated proof satisfies a base-mode inspection but can
/// never match a response commitment fixed at report time.
struct SimCollusion {
    std::vector<int> members;
    bool commitment = false;
};

struct SimOptions {
    bool extension_mode = false;  // reports carry response commitments, inspections check openings
    std::optional<SimCollusion> collusion;
};

struct MeanVar {
    double mean = 0;
    double variance = 0;  // sample variance
};

struct SimulationSummary {
    int epochs = 0;
    std::vector<MeanVar> utility;                   // per SP, of the epoch total
    std::vector<UtilityBreakdown> mean_breakdown;   // per SP, componentwise means
    std::vector<long> inspection_slash_events;      // per SP
    std::vector<long> storage_slash_events;         // per SP
    std::vector<double> mean_score;                 // per SP
    std::vector<double> score_trajectory;           // per epoch, mean over SPs

    /// Mean audit-role utility per (peer, instance) pair for one SP.
    double mean_pair_audit_utility(int sp, int n, int p_s) const;
};

/// Executes the epoch state machine: assignment, proof exchange with noise,
/// reports, strict-majority scoring, audit-the-auditor inspections,
/// score-triggered extra on-chain audits, settlement.
///
/// Retention rule: an auditor holds a response for later inspection only if it
/// actually performed that audit. Skipped audits leave nothing to present, so
/// blind 1-entries survive inspection only through coalition fabrication.
class Simulation {
  public:
    Simulation(ProtocolParams params, Profile strategies, SimOptions options = {});

    EpochLedger run_epoch(std::uint64_t epoch_id) const;
    SimulationSummary run(int epochs, std::uint64_t first_epoch = 0) const;

    const std::vector<VectorCommitment>& storage_commitments() const {
        return storage_commitments_;
    }
    const ProtocolParams& params() const { return params_; }

    // Individual phases, exposed for tests; run_epoch chains them.
    std::vector<std::vector<ResponseRecord>> collect_responses(
        const AuditAssignment& assignment) const;
    ReportMatrix submit_reports(const AuditAssignment& assignment,
                                const std::vector<std::vector<ResponseRecord>>& responses) const;
    std::vector<Rational> aggregate_scores(const AuditAssignment& assignment,
                                           const ReportMatrix& reports) const;
    void run_inspections(EpochLedger& ledger) const;
    void run_extra_audits(EpochLedger& ledger) const;
    void settle_epoch(EpochLedger& ledger) const;

  private:
    bool audited(int auditor, int auditee) const;
    bool answers(int auditee) const;
    bool colluders(int a, int b) const;

    ProtocolParams params_;
    Profile strategies_;
    SimOptions options_;
    MerkleTree tree_;
    std::vector<std::vector<Bytes>> chunk_data_;  // [sp][chunk]
    std::vector<VectorCommitment> storage_commitments_;
};

/// Seeded, reproducible aggregation over consecutive epoch ids.
SimulationSummary run_simulation(const ProtocolParams& params, const Profile& strategies,
                                 int epochs, SimOptions options = {});

}  // namespace shelby
