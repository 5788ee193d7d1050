#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "integra/market.hpp"

namespace integra {

/** First blocking pair of the matching in the scan order (man ascending,
 * then woman ascending by flat index), or empty iff the matching is stable.
 * A self-matched agent prefers any partner to staying alone, so a mutually
 * unmatched man and woman always block.
 */
std::optional<std::pair<AgentId, AgentId>> find_blocking_pair(const ExtendedMarket& market,
                                                              const Matching& matching);

struct ParetoResult {
    bool optimal = false;
    /// A dominating matching when not optimal (the first found in enumeration order).
    std::optional<Matching> witness;
    explicit operator bool() const { return optimal; }
};

/// Brute-force Pareto check over all matchings of the population.
ParetoResult is_pareto_optimal(const ExtendedMarket& market, const Matching& matching,
                               std::size_t oracle_bound = 16);

/// Pareto optimality of every entry of the scheme.
ParetoResult is_pareto_scheme(const ExtendedMarket& market, const MatchingScheme& scheme,
                              std::size_t oracle_bound = 16);

/// An agent that does worse in `merged` than in `part`.
struct HurtAgentWitness {
    AgentId agent;
    Population part;
    Population merged;
};

struct MonotonicityResult {
    bool monotonic = false;
    /// Every hurt agent for the WIM check (ascending by id); only the first
    /// violation found for the IM check.
    std::vector<HurtAgentWitness> witnesses;
    explicit operator bool() const { return monotonic; }
};

/** Weak integration monotonicity: every agent weakly prefers its society
 * partner to its own-community partner.
 */
MonotonicityResult is_wim(const ExtendedMarket& market, const MatchingScheme& scheme);

/** Integration monotonicity: for every ordered pair of disjoint populations
 * (P, P') and every agent of P, the agent weakly prefers the P-union-P'
 * partner to the P partner. The pair count grows as 3^kappa, hence the bound.
 */
MonotonicityResult is_im(const ExtendedMarket& market, const MatchingScheme& scheme,
                         std::uint32_t kappa_bound = 12);

/// One witness kind per verifier; every payload re-checks against its instance.
using Witness = std::variant<std::pair<AgentId, AgentId>, Matching, HurtAgentWitness>;

/** The society split by how integration changed each agent's partner:
 * `same` keep their community partner, `better` prefer the society partner,
 * `worse` prefer the community partner.
 */
struct HurtPartition {
    std::vector<AgentId> same;
    std::vector<AgentId> better;
    std::vector<AgentId> worse;

    std::size_t society_size() const { return same.size() + better.size() + worse.size(); }
    double fraction_worse() const {
        return society_size() == 0 ? 0.0 : static_cast<double>(worse.size()) / society_size();
    }
};

/** Partition from the per-community matchings (index = community) and the
 * society matching. Every agent must be matched in both; balanced
 * communities guarantee that for stable entries.
 */
HurtPartition hurt_partition(const ExtendedMarket& market,
                             const std::vector<Matching>& community_matchings,
                             const Matching& society_matching);

/// Partition of a full scheme, read from its singleton and society entries.
HurtPartition hurt_partition(const ExtendedMarket& market, const MatchingScheme& scheme);

/// |worse| <= (total agents) / 2 — holds for every stable scheme.
bool half_society_bound_holds(const ExtendedMarket& market, const HurtPartition& partition);

/** For every agent hurt by integration, its community partner is better off:
 * the blocking-pair argument behind the half-society bound. Requires the
 * matchings the partition was computed from.
 */
bool partner_rescue_holds(const ExtendedMarket& market,
                          const std::vector<Matching>& community_matchings,
                          const HurtPartition& partition);

} // namespace integra
