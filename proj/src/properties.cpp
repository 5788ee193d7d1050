#include "integra/properties.hpp"

#include <algorithm>

#include "integra/enumerate.hpp"

namespace integra {

std::optional<std::pair<AgentId, AgentId>> find_blocking_pair(const ExtendedMarket& market,
                                                              const Matching& matching) {
    const Population& population = matching.population();
    const PreferenceProfile& prefs = market.preferences();
    for (std::uint32_t m = 0; m < market.side_count(Side::Man); ++m) {
        if (!market.in_population(Side::Man, m, population)) continue;
        const auto wife = matching.partner_flat(Side::Man, m);
        for (std::uint32_t w = 0; w < market.side_count(Side::Woman); ++w) {
            if (!market.in_population(Side::Woman, w, population)) continue;
            if (wife && *wife == w) continue;
            if (!prefers_strictly(market, Side::Man, m, w, wife)) continue;
            const auto husband = matching.partner_flat(Side::Woman, w);
            if (prefers_strictly(market, Side::Woman, w, m, husband))
                return std::make_pair(market.agent(Side::Man, m), market.agent(Side::Woman, w));
        }
    }
    return std::nullopt;
}

ParetoResult is_pareto_optimal(const ExtendedMarket& market, const Matching& matching,
                               std::size_t oracle_bound) {
    ParetoResult result{true, std::nullopt};
    for_each_maximal_matching(
        market, matching.population(),
        [&](const Matching& candidate) {
            if (result.optimal && dominates(market, candidate, matching)) {
                result.optimal = false;
                result.witness = candidate;
            }
        },
        oracle_bound);
    return result;
}

ParetoResult is_pareto_scheme(const ExtendedMarket& market, const MatchingScheme& scheme,
                              std::size_t oracle_bound) {
    for (const Population& p : scheme.populations()) {
        ParetoResult r = is_pareto_optimal(market, scheme.at(p), oracle_bound);
        if (!r.optimal) return r;
    }
    return ParetoResult{true, std::nullopt};
}

MonotonicityResult is_wim(const ExtendedMarket& market, const MatchingScheme& scheme) {
    MonotonicityResult result{true, {}};
    const Population society = market.society();
    const Matching& merged = scheme.at(society);
    for (std::uint32_t c = 0; c < market.kappa(); ++c) {
        const Population home = Population::single(market.kappa(), c);
        const Matching& segregated = scheme.at(home);
        for (const Side side : {Side::Man, Side::Woman}) {
            const std::uint32_t begin = market.community_offset(side, c);
            const std::uint32_t count = side == Side::Man ? market.communities()[c].men_count
                                                          : market.communities()[c].women_count;
            for (std::uint32_t a = begin; a < begin + count; ++a) {
                const auto before = segregated.partner_flat(side, a);
                const auto after = merged.partner_flat(side, a);
                if (!prefers_weakly(market, side, a, after, before)) {
                    result.monotonic = false;
                    result.witnesses.push_back(
                        HurtAgentWitness{market.agent(side, a), home, society});
                }
            }
        }
    }
    std::sort(result.witnesses.begin(), result.witnesses.end(),
              [](const HurtAgentWitness& x, const HurtAgentWitness& y) {
                  return x.agent < y.agent;
              });
    return result;
}

MonotonicityResult is_im(const ExtendedMarket& market, const MatchingScheme& scheme,
                         std::uint32_t kappa_bound) {
    const std::uint32_t kappa = market.kappa();
    if (kappa > kappa_bound)
        throw SizeLimitError("is_im: kappa " + std::to_string(kappa) + " exceeds bound " +
                             std::to_string(kappa_bound));
    const std::uint64_t full = (kappa == 64) ? ~0ull : (1ull << kappa) - 1;
    for (std::uint64_t p = 1; p <= full; ++p) {
        for (std::uint64_t q = 1; q <= full; ++q) {
            if ((p & q) != 0) continue;
            const Population part(kappa, p);
            const Population merged(kappa, p | q);
            const Matching& before = scheme.at(part);
            const Matching& after = scheme.at(merged);
            for (const Side side : {Side::Man, Side::Woman}) {
                for (std::uint32_t a = 0; a < market.side_count(side); ++a) {
                    if (!market.in_population(side, a, part)) continue;
                    if (!prefers_weakly(market, side, a, after.partner_flat(side, a),
                                        before.partner_flat(side, a)))
                        return MonotonicityResult{
                            false, {HurtAgentWitness{market.agent(side, a), part, merged}}};
                }
            }
        }
    }
    return MonotonicityResult{true, {}};
}

HurtPartition hurt_partition(const ExtendedMarket& market,
                             const std::vector<Matching>& community_matchings,
                             const Matching& society_matching) {
    if (community_matchings.size() != market.kappa())
        throw InvalidArgument("hurt partition: need one matching per community");
    HurtPartition out;
    for (const Side side : {Side::Man, Side::Woman}) {
        for (std::uint32_t a = 0; a < market.side_count(side); ++a) {
            const std::uint32_t c = market.community_of(side, a);
            const auto before = community_matchings[c].partner_flat(side, a);
            const auto after = society_matching.partner_flat(side, a);
            if (!before || !after)
                throw UnmatchedAgentError("hurt partition: " + to_string(market.agent(side, a)) +
                                          " is unmatched");
            const AgentId id = market.agent(side, a);
            if (*before == *after)
                out.same.push_back(id);
            else if (prefers_strictly(market, side, a, after, before))
                out.better.push_back(id);
            else
                out.worse.push_back(id);
        }
    }
    return out;
}

HurtPartition hurt_partition(const ExtendedMarket& market, const MatchingScheme& scheme) {
    std::vector<Matching> community;
    community.reserve(market.kappa());
    for (std::uint32_t c = 0; c < market.kappa(); ++c)
        community.push_back(scheme.at(Population::single(market.kappa(), c)));
    return hurt_partition(market, community, scheme.at(market.society()));
}

bool half_society_bound_holds(const ExtendedMarket& market, const HurtPartition& partition) {
    return 2 * partition.worse.size() <= market.total_agents();
}

bool partner_rescue_holds(const ExtendedMarket& market,
                          const std::vector<Matching>& community_matchings,
                          const HurtPartition& partition) {
    std::vector<char> better_flag[2];
    better_flag[0].assign(market.side_count(Side::Man), 0);
    better_flag[1].assign(market.side_count(Side::Woman), 0);
    for (const AgentId& id : partition.better)
        better_flag[static_cast<int>(id.side)][market.flat(id)] = 1;
    for (const AgentId& id : partition.worse) {
        const std::uint32_t flat = market.flat(id);
        const auto partner =
            community_matchings[id.community].partner_flat(id.side, flat);
        if (!partner) return false;
        if (!better_flag[static_cast<int>(opposite(id.side))][*partner]) return false;
    }
    return true;
}

} // namespace integra
