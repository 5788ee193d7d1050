#include "integra/enumerate.hpp"

#include <algorithm>

#include "integra/properties.hpp"

namespace integra {

namespace {

void check_bound(const ExtendedMarket& market, const Population& population, std::size_t bound,
                 const char* who) {
    const std::uint32_t agents = market.agent_count(population);
    if (agents > bound)
        throw SizeLimitError(std::string(who) + ": population has " + std::to_string(agents) +
                             " agents, oracle bound is " + std::to_string(bound));
}

std::vector<std::uint32_t> members(const ExtendedMarket& market, Side side,
                                   const Population& population) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t a = 0; a < market.side_count(side); ++a)
        if (market.in_population(side, a, population)) out.push_back(a);
    return out;
}

} // namespace

void for_each_maximal_matching(const ExtendedMarket& market, const Population& population,
                               const std::function<void(const Matching&)>& visit,
                               std::size_t oracle_bound) {
    check_bound(market, population, oracle_bound, "maximal matchings");
    const auto men = members(market, Side::Man, population);
    const auto women = members(market, Side::Woman, population);
    // Assign a partner to every agent of the smaller side, backtracking over
    // the larger side; each leaf is one maximal matching, visited once.
    const bool men_small = men.size() <= women.size();
    const auto& small = men_small ? men : women;
    const auto& large = men_small ? women : men;

    std::vector<std::int32_t> wife_of(market.side_count(Side::Man), -1);
    std::vector<std::int32_t> husband_of(market.side_count(Side::Woman), -1);
    std::vector<char> used(large.size(), 0);

    const std::function<void(std::size_t)> place = [&](std::size_t i) {
        if (i == small.size()) {
            visit(Matching::from_partner_arrays(market, population, wife_of, husband_of));
            return;
        }
        for (std::size_t j = 0; j < large.size(); ++j) {
            if (used[j]) continue;
            used[j] = 1;
            const std::uint32_t m = men_small ? small[i] : large[j];
            const std::uint32_t w = men_small ? large[j] : small[i];
            wife_of[m] = static_cast<std::int32_t>(w);
            husband_of[w] = static_cast<std::int32_t>(m);
            place(i + 1);
            wife_of[m] = -1;
            husband_of[w] = -1;
            used[j] = 0;
        }
    };
    place(0);
}

bool dominates(const ExtendedMarket& market, const Matching& candidate, const Matching& over) {
    bool strict = false;
    for (const Side side : {Side::Man, Side::Woman}) {
        for (std::uint32_t a = 0; a < market.side_count(side); ++a) {
            if (!market.in_population(side, a, over.population())) continue;
            const auto now = candidate.partner_flat(side, a);
            const auto before = over.partner_flat(side, a);
            if (!prefers_weakly(market, side, a, now, before)) return false;
            if (prefers_strictly(market, side, a, now, before)) strict = true;
        }
    }
    return strict;
}

std::vector<Matching> enumerate_stable_matchings(const ExtendedMarket& market,
                                                 const Population& population,
                                                 std::size_t oracle_bound) {
    std::vector<Matching> out;
    for_each_maximal_matching(
        market, population,
        [&](const Matching& m) {
            if (!find_blocking_pair(market, m)) out.push_back(m);
        },
        oracle_bound);
    return out;
}

std::vector<Matching> enumerate_pareto_matchings(const ExtendedMarket& market,
                                                 const Population& population,
                                                 std::size_t oracle_bound) {
    std::vector<Matching> all;
    for_each_maximal_matching(
        market, population, [&](const Matching& m) { all.push_back(m); }, oracle_bound);
    std::vector<Matching> out;
    for (const Matching& m : all) {
        bool dominated = false;
        for (const Matching& other : all) {
            if (dominates(market, other, m)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(m);
    }
    return out;
}

namespace {

/// Repeatedly applies the lexicographically smallest dominating matching.
Matching improve_to_pareto(const ExtendedMarket& market, Matching current,
                           const std::vector<Matching>& candidates) {
    for (;;) {
        const Matching* best = nullptr;
        for (const Matching& cand : candidates) {
            if (!dominates(market, cand, current)) continue;
            if (best == nullptr || Matching::lex_less(cand, *best)) best = &cand;
        }
        if (best == nullptr) return current;
        current = *best;
    }
}

} // namespace

MatchingScheme build_wim_pareto_scheme(const ExtendedMarket& market, std::size_t oracle_bound) {
    const std::uint32_t kappa = market.kappa();
    for (const auto& c : market.communities())
        if (c.men_count != c.women_count)
            throw InvalidArgument("wim-pareto scheme: communities must be balanced");
    check_bound(market, market.society(), oracle_bound, "wim-pareto scheme");

    std::vector<Matching> entries;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << kappa); ++mask) {
        const Population population(kappa, mask);
        std::vector<std::int32_t> wife_of(market.side_count(Side::Man), -1);
        std::vector<std::int32_t> husband_of(market.side_count(Side::Woman), -1);
        if (population.community_count() == 1) {
            // Marry equal local indices within the community.
            const std::uint32_t c = population.communities().front();
            for (std::uint32_t i = 0; i < market.communities()[c].men_count; ++i) {
                const std::uint32_t m = market.community_offset(Side::Man, c) + i;
                const std::uint32_t w = market.community_offset(Side::Woman, c) + i;
                wife_of[m] = static_cast<std::int32_t>(w);
                husband_of[w] = static_cast<std::int32_t>(m);
            }
        } else {
            // Union of the already-built single-community entries.
            for (const std::uint32_t c : population.communities()) {
                const Matching& base = entries[(1ull << c) - 1];
                for (const auto& [m, w] : base.pairs()) {
                    wife_of[m] = static_cast<std::int32_t>(w);
                    husband_of[w] = static_cast<std::int32_t>(m);
                }
            }
        }
        Matching start =
            Matching::from_partner_arrays(market, population, std::move(wife_of),
                                          std::move(husband_of));
        std::vector<Matching> candidates;
        for_each_maximal_matching(
            market, population, [&](const Matching& m) { candidates.push_back(m); }, oracle_bound);
        entries.push_back(improve_to_pareto(market, std::move(start), candidates));
    }
    return MatchingScheme(market, std::move(entries));
}

namespace {

std::vector<MatchingScheme> schemes_from_sets(const ExtendedMarket& market,
                                              const std::vector<std::vector<Matching>>& sets) {
    std::vector<MatchingScheme> out;
    std::vector<Matching> chosen;
    const std::function<void(std::size_t)> build = [&](std::size_t i) {
        if (i == sets.size()) {
            out.emplace_back(market, chosen);
            return;
        }
        for (const Matching& m : sets[i]) {
            chosen.push_back(m);
            build(i + 1);
            chosen.pop_back();
        }
    };
    build(0);
    return out;
}

} // namespace

std::vector<MatchingScheme> enumerate_stable_schemes(const ExtendedMarket& market,
                                                     std::size_t oracle_bound) {
    const std::uint32_t kappa = market.kappa();
    std::vector<std::vector<Matching>> sets;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << kappa); ++mask)
        sets.push_back(enumerate_stable_matchings(market, Population(kappa, mask), oracle_bound));
    return schemes_from_sets(market, sets);
}

std::vector<MatchingScheme> enumerate_pareto_schemes(const ExtendedMarket& market,
                                                     std::size_t oracle_bound) {
    const std::uint32_t kappa = market.kappa();
    std::vector<std::vector<Matching>> sets;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << kappa); ++mask)
        sets.push_back(enumerate_pareto_matchings(market, Population(kappa, mask), oracle_bound));
    return schemes_from_sets(market, sets);
}

} // namespace integra
