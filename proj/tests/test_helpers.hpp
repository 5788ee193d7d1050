#pragma once

#include <vector>

#include "integra/market.hpp"
#include "integra/random_markets.hpp"

namespace integra::test {

/// Market built from explicit per-agent lists given as AgentId sequences.
inline ExtendedMarket make_market(std::vector<Community> communities,
                                  std::vector<std::vector<AgentId>> men_lists,
                                  std::vector<std::vector<AgentId>> women_lists) {
    std::vector<std::uint32_t> men_offset{0}, women_offset{0};
    for (const auto& c : communities) {
        men_offset.push_back(men_offset.back() + c.men_count);
        women_offset.push_back(women_offset.back() + c.women_count);
    }
    const auto flatten = [](const std::vector<std::uint32_t>& offsets,
                            const std::vector<std::vector<AgentId>>& lists) {
        std::vector<std::vector<std::uint32_t>> out(lists.size());
        for (std::size_t a = 0; a < lists.size(); ++a)
            for (const AgentId& id : lists[a]) out[a].push_back(offsets[id.community] + id.local);
        return out;
    };
    auto men = flatten(women_offset, men_lists);
    auto women = flatten(men_offset, women_lists);
    return ExtendedMarket(std::move(communities),
                          PreferenceProfile(std::move(men), std::move(women)));
}

/// A market where man i and woman i of each community mutually rank each
/// other first (identity is the unique stable matching everywhere).
inline ExtendedMarket mutual_first_market(std::uint32_t n, std::uint32_t kappa) {
    const std::uint32_t side = n * kappa;
    std::vector<std::vector<std::uint32_t>> men(side), women(side);
    for (std::uint32_t a = 0; a < side; ++a) {
        for (std::uint32_t k = 0; k < side; ++k) {
            men[a].push_back((a + k) % side);
            women[a].push_back((a + k) % side);
        }
    }
    return ExtendedMarket(std::vector<Community>(kappa, Community{n, n}),
                          PreferenceProfile(std::move(men), std::move(women)));
}

/// FNV-1a over the serialized preference lists; pins generator identity.
inline std::uint64_t market_digest(const ExtendedMarket& market) {
    std::uint64_t h = 1469598103934665603ull;
    const auto eat = [&h](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            h ^= (v >> (8 * i)) & 0xFF;
            h *= 1099511628211ull;
        }
    };
    for (const Side side : {Side::Man, Side::Woman})
        for (std::uint32_t a = 0; a < market.side_count(side); ++a)
            for (const auto p : market.preferences().list(side, a)) eat(p);
    return h;
}

} // namespace integra::test
