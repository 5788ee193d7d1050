#pragma once

#include <cstdint>
#include <vector>

#include "integra/market.hpp"

namespace integra {

struct DeferredAcceptanceResult {
    Matching matching;
    std::uint64_t total_proposals = 0;
    /// Indexed by society man flat index; 0 for men outside the population.
    /// On a balanced population each entry equals the population-restricted
    /// rank of that man's wife.
    std::vector<std::uint32_t> proposals_per_man;
};

/** Man-optimal stable matching of the population via man-proposing deferred
 * acceptance, one proposal at a time. Preferences are restricted to the
 * population by skipping outside entries in each man's society-wide list;
 * nothing is copied. The lowest-indexed currently-free man proposes next,
 * which fixes the proposal sequence; the resulting matching is the unique
 * MOSM regardless of that order.
 */
DeferredAcceptanceResult man_optimal_stable_matching(const ExtendedMarket& market,
                                                     const Population& population);

/// The man-optimal stable scheme: MOSM on every nonempty population.
MatchingScheme stable_scheme(const ExtendedMarket& market);

} // namespace integra
