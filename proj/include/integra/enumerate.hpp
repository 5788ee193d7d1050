#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "integra/market.hpp"

namespace integra {

constexpr std::size_t kDefaultOracleBound = 16; // total agents

/** All stable matchings of the population, by enumerating every maximal
 * matching and keeping those without a blocking pair. Intended as an
 * independent oracle for the deferred-acceptance path; only feasible on
 * desk-scale populations.
 */
std::vector<Matching> enumerate_stable_matchings(const ExtendedMarket& market,
                                                 const Population& population,
                                                 std::size_t oracle_bound = kDefaultOracleBound);

/** All Pareto-optimal matchings of the population: maximal matchings not
 * dominated by any other matching, dominance quantified over every agent of
 * both sides. (A non-maximal matching is always dominated by an extension,
 * so maximal candidates decide dominance.)
 */
std::vector<Matching> enumerate_pareto_matchings(const ExtendedMarket& market,
                                                 const Population& population,
                                                 std::size_t oracle_bound = kDefaultOracleBound);

/** Visits every maximal matching of the population (all agents of the smaller
 * side matched). Visit order is deterministic.
 */
void for_each_maximal_matching(const ExtendedMarket& market, const Population& population,
                               const std::function<void(const Matching&)>& visit,
                               std::size_t oracle_bound = kDefaultOracleBound);

/// True iff `candidate` weakly improves every agent of the population over
/// `over` and strictly improves at least one.
bool dominates(const ExtendedMarket& market, const Matching& candidate, const Matching& over);

/** A matching scheme that is Pareto optimal on every population and weakly
 * integration monotonic: each single community starts from the pairing of
 * equal local indices, each larger population from the union of its
 * communities' entries, and every entry is then improved until no dominating
 * matching remains. Among the dominating matchings of a step, the
 * lexicographically smallest pair encoding is applied, which makes the
 * scheme deterministic.
 *
 * Requires balanced communities and a society within the oracle bound.
 */
MatchingScheme build_wim_pareto_scheme(const ExtendedMarket& market,
                                       std::size_t oracle_bound = kDefaultOracleBound);

/** Every stable scheme of the market: the cartesian product of the stable
 * sets of all populations. Sizes explode quickly; use on paper-scale
 * instances only.
 */
std::vector<MatchingScheme> enumerate_stable_schemes(const ExtendedMarket& market,
                                                     std::size_t oracle_bound = kDefaultOracleBound);

/// Same construction over per-population Pareto-optimal sets.
std::vector<MatchingScheme> enumerate_pareto_schemes(const ExtendedMarket& market,
                                                     std::size_t oracle_bound = kDefaultOracleBound);

} // namespace integra
