#include "integra/deferred_acceptance.hpp"

#include <functional>
#include <queue>

namespace integra {

DeferredAcceptanceResult man_optimal_stable_matching(const ExtendedMarket& market,
                                                     const Population& population) {
    if (population.kappa() != market.kappa())
        throw InvalidArgument("deferred acceptance: population kappa mismatch");
    const std::uint32_t total_men = market.side_count(Side::Man);
    const std::uint32_t total_women = market.side_count(Side::Woman);
    const PreferenceProfile& prefs = market.preferences();

    std::vector<char> man_in(total_men, 0), woman_in(total_women, 0);
    for (std::uint32_t m = 0; m < total_men; ++m)
        man_in[m] = market.in_population(Side::Man, m, population);
    for (std::uint32_t w = 0; w < total_women; ++w)
        woman_in[w] = market.in_population(Side::Woman, w, population);

    std::vector<std::int32_t> wife_of(total_men, -1), husband_of(total_women, -1);
    std::vector<std::uint32_t> cursor(total_men, 0);
    std::vector<std::uint32_t> proposals(total_men, 0);
    std::uint64_t total_proposals = 0;

    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> free_men;
    for (std::uint32_t m = 0; m < total_men; ++m)
        if (man_in[m]) free_men.push(m);

    while (!free_men.empty()) {
        const std::uint32_t m = free_men.top();
        free_men.pop();
        const auto list = prefs.list(Side::Man, m);
        // Skip women outside the population; the cursor never moves backwards,
        // so a man proposes to each population woman at most once.
        while (cursor[m] < list.size() && !woman_in[list[cursor[m]]]) ++cursor[m];
        if (cursor[m] >= list.size()) continue; // exhausted: stays self-matched
        const std::uint32_t w = list[cursor[m]];
        ++cursor[m];
        ++proposals[m];
        ++total_proposals;
        const std::int32_t current = husband_of[w];
        if (current == -1) {
            husband_of[w] = static_cast<std::int32_t>(m);
            wife_of[m] = static_cast<std::int32_t>(w);
        } else if (prefs.prefers(Side::Woman, w, m, static_cast<std::uint32_t>(current))) {
            husband_of[w] = static_cast<std::int32_t>(m);
            wife_of[m] = static_cast<std::int32_t>(w);
            wife_of[current] = -1;
            free_men.push(static_cast<std::uint32_t>(current));
        } else {
            free_men.push(m);
        }
    }

    Matching matching = Matching::from_partner_arrays(market, population, std::move(wife_of),
                                                      std::move(husband_of));
    return DeferredAcceptanceResult{std::move(matching), total_proposals, std::move(proposals)};
}

MatchingScheme stable_scheme(const ExtendedMarket& market) {
    const std::uint32_t kappa = market.kappa();
    if (kappa > 20) throw SizeLimitError("stable scheme: too many communities");
    std::vector<Matching> entries;
    entries.reserve((std::size_t{1} << kappa) - 1);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << kappa); ++mask)
        entries.push_back(
            man_optimal_stable_matching(market, Population(kappa, mask)).matching);
    return MatchingScheme(market, std::move(entries));
}

} // namespace integra
