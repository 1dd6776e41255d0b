#pragma once

#include <vector>

namespace shelby {

/// How an auditor turns what it saw into a report entry.
enum class ReportRule : std::uint8_t {
    AlwaysOne,   // report 1 unconditionally
    AlwaysZero,  // report 0 unconditionally
    Truthful,    // report 1 iff a valid proof was examined (needs audit = true)
};

/// One auditor's stance toward one auditee: whether to actually perform the
/// audit, and which report rule to follow. (audit=false, Truthful) is not
/// actionable — an unexamined proof cannot be reported on truthfully — and is
/// coerced to AlwaysZero wherever reports are produced.
struct PairAction {
    bool audit = false;
    ReportRule report = ReportRule::AlwaysZero;

    bool operator==(const PairAction&) const = default;
};

/// Reporting 0 blind and reporting truthfully-without-auditing coincide.
PairAction effective(PairAction action);

/// The canonical six pair actions (audit in {0,1} x three report rules).
const std::vector<PairAction>& all_pair_actions();

/// How an SP covers its assigned data.
enum class StorageMode : std::uint8_t {
    Store,        // keep the chunks, pay c_s per chunk per epoch
    None,         // drop them; audit responses go missing
    Reconstruct,  // drop them but answer audits by reading k peers' chunks
};

/// One SP's full strategy: a storage decision plus an independent
/// (audit, report) stance toward every peer. Vectors are indexed by peer id;
/// the self entry is ignored.
struct Strategy {
    StorageMode mode = StorageMode::None;
    std::vector<bool> audit;
    std::vector<ReportRule> report;

    bool store() const { return mode == StorageMode::Store; }

    PairAction toward(int peer) const {
        return PairAction{audit[static_cast<std::size_t>(peer)],
                          report[static_cast<std::size_t>(peer)]};
    }
    void set_toward(int peer, PairAction action) {
        audit[static_cast<std::size_t>(peer)] = action.audit;
        report[static_cast<std::size_t>(peer)] = action.report;
    }

    bool operator==(const Strategy&) const = default;
};

/// Store everything, audit everyone, report 1 exactly on valid proofs.
Strategy honest_strategy(int n);

/// Store nothing, audit no one, report 1 for everyone.
Strategy fully_dishonest_strategy(int n);

/// Same storage mode and pair action toward every peer (the symmetric-policy
/// strategy class used by the uniqueness enumeration).
Strategy uniform_strategy(int n, StorageMode mode, PairAction action);

using Profile = std::vector<Strategy>;

Profile honest_profile(int n);
Profile dishonest_profile(int n);

}  // namespace shelby
