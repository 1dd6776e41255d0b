#include "shelby/strategy.hpp"

#include <stdexcept>

namespace shelby {

PairAction effective(PairAction action) {
    if (!action.audit && action.report == ReportRule::Truthful)
        return PairAction{false, ReportRule::AlwaysZero};
    return action;
}

const std::vector<PairAction>& all_pair_actions() {
    static const std::vector<PairAction> actions = {
        {true, ReportRule::Truthful},   {true, ReportRule::AlwaysOne},
        {true, ReportRule::AlwaysZero}, {false, ReportRule::AlwaysOne},
        {false, ReportRule::AlwaysZero}, {false, ReportRule::Truthful},
    };
    return actions;
}

namespace {
Strategy filled(int n, StorageMode mode, PairAction action) {
    if (n < 3) throw std::invalid_argument("strategy constructors require n >= 3");
    Strategy s;
    s.mode = mode;
    s.audit.assign(static_cast<std::size_t>(n), action.audit);
    s.report.assign(static_cast<std::size_t>(n), action.report);
    return s;
}
}  // namespace

Strategy honest_strategy(int n) {
    return filled(n, StorageMode::Store, {true, ReportRule::Truthful});
}

Strategy fully_dishonest_strategy(int n) {
    return filled(n, StorageMode::None, {false, ReportRule::AlwaysOne});
}

Strategy uniform_strategy(int n, StorageMode mode, PairAction action) {
    return filled(n, mode, action);
}

Profile honest_profile(int n) {
    return Profile(static_cast<std::size_t>(n), honest_strategy(n));
}

Profile dishonest_profile(int n) {
    return Profile(static_cast<std::size_t>(n), fully_dishonest_strategy(n));
}

}  // namespace shelby
