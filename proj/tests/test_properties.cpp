#include "doctest.h"

#include "integra/deferred_acceptance.hpp"
#include "integra/enumerate.hpp"
#include "integra/golden_instances.hpp"
#include "integra/properties.hpp"
#include "integra/random_markets.hpp"
#include "test_helpers.hpp"

using namespace integra;

namespace {

ExtendedMarket prop1_market() {
    return test::make_market(
        {Community{1, 1}, Community{1, 1}},
        {{woman(0, 0), woman(1, 0)}, {woman(0, 0), woman(1, 0)}},
        {{man(1, 0), man(0, 0)}, {man(1, 0), man(0, 0)}});
}

ExtendedMarket pretty_ugly_market() {
    return test::make_market(
        {Community{1, 1}, Community{1, 1}},
        {{woman(1, 0), woman(0, 0)}, {woman(1, 0), woman(0, 0)}},
        {{man(0, 0), man(1, 0)}, {man(0, 0), man(1, 0)}});
}

} // namespace

TEST_CASE("blocking pair: within-community marriages of the desirability split") {
    const ExtendedMarket market = pretty_ugly_market();
    const MatchingScheme scheme = within_community_scheme(market);
    const auto blocking = find_blocking_pair(market, scheme.at(market.society()));
    REQUIRE(blocking.has_value());
    CHECK(blocking->first == man(0, 0));   // the desired man
    CHECK(blocking->second == woman(1, 0)); // the desired woman
}

TEST_CASE("blocking pair: MOSM output has none") {
    for (const std::uint64_t seed : {3ull, 4ull, 5ull}) {
        const ExtendedMarket market = generate_uniform(MarketSpec{6, 2, std::nullopt, seed});
        const auto result = man_optimal_stable_matching(market, market.society());
        CHECK(!find_blocking_pair(market, result.matching).has_value());
    }
}

TEST_CASE("blocking pair: mutual first choices matched away block first") {
    const ExtendedMarket market = test::mutual_first_market(2, 1);
    const Matching last_choices(
        market, Population::all(1),
        std::vector<std::pair<AgentId, AgentId>>{{man(0, 0), woman(0, 1)},
                                                 {man(0, 1), woman(0, 0)}});
    const auto blocking = find_blocking_pair(market, last_choices);
    REQUIRE(blocking.has_value());
    CHECK(blocking->first == man(0, 0));
    CHECK(blocking->second == woman(0, 0));
}

TEST_CASE("pareto check: the desirability-split within-community matching is optimal") {
    const ExtendedMarket market = pretty_ugly_market();
    const MatchingScheme scheme = within_community_scheme(market);
    CHECK(is_pareto_optimal(market, scheme.at(market.society())).optimal);
}

TEST_CASE("pareto check: a mutually improving swap is found and returned") {
    // Both men and both women strictly gain by swapping partners.
    const ExtendedMarket market = test::make_market(
        {Community{2, 2}},
        {{woman(0, 1), woman(0, 0)}, {woman(0, 0), woman(0, 1)}},
        {{man(0, 1), man(0, 0)}, {man(0, 0), man(0, 1)}});
    const Matching everyone_second(
        market, Population::all(1),
        std::vector<std::pair<AgentId, AgentId>>{{man(0, 0), woman(0, 0)},
                                                 {man(0, 1), woman(0, 1)}});
    const ParetoResult result = is_pareto_optimal(market, everyone_second);
    CHECK(!result.optimal);
    REQUIRE(result.witness.has_value());
    CHECK(result.witness->partner(market, man(0, 0)) == woman(0, 1));
    CHECK(dominates(market, *result.witness, everyone_second));
}

TEST_CASE("wim: the prop1 MOSM scheme hurts exactly the A man and B woman") {
    const ExtendedMarket market = prop1_market();
    const MatchingScheme scheme = stable_scheme(market);
    const MonotonicityResult result = is_wim(market, scheme);
    CHECK(!result.monotonic);
    REQUIRE(result.witnesses.size() == 2);
    CHECK(result.witnesses[0].agent == man(0, 0));
    CHECK(result.witnesses[1].agent == woman(1, 0));
    CHECK(result.witnesses[0].part == Population::single(2, 0));
    CHECK(result.witnesses[0].merged == market.society());
}

TEST_CASE("wim: single-community schemes are trivially monotonic") {
    const ExtendedMarket market = generate_uniform(MarketSpec{4, 1, std::nullopt, 21});
    CHECK(is_wim(market, stable_scheme(market)).monotonic);
}

TEST_CASE("im equals wim on two-community societies") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const ExtendedMarket market = generate_uniform(MarketSpec{2, 2, std::nullopt, seed});
        const MatchingScheme scheme = stable_scheme(market);
        CHECK(is_im(market, scheme).monotonic == is_wim(market, scheme).monotonic);
    }
}

TEST_CASE("im: a partner-constant scheme is monotonic") {
    // Mutual-first markets: the MOSM of every population is the identity
    // restricted to it, so nobody's partner ever changes.
    const ExtendedMarket market = test::mutual_first_market(2, 3);
    const MatchingScheme scheme = stable_scheme(market);
    CHECK(is_im(market, scheme).monotonic);
    CHECK(is_wim(market, scheme).monotonic);
}

TEST_CASE("im implies wim for every scheme tried") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const ExtendedMarket market = generate_uniform(MarketSpec{1, 3, std::nullopt, seed});
        const MatchingScheme scheme = stable_scheme(market);
        if (is_im(market, scheme).monotonic) CHECK(is_wim(market, scheme).monotonic);
    }
}

TEST_CASE("im witness re-verifies against the scheme") {
    const ExtendedMarket market = prop1_market();
    const MatchingScheme scheme = stable_scheme(market);
    const MonotonicityResult result = is_im(market, scheme);
    CHECK(!result.monotonic);
    REQUIRE(result.witnesses.size() == 1);
    const HurtAgentWitness& w = result.witnesses[0];
    const auto before = scheme.at(w.part).partner(market, w.agent);
    const auto after = scheme.at(w.merged).partner(market, w.agent);
    REQUIRE(before.has_value());
    REQUIRE(after.has_value());
    CHECK(absolute_rank(market, w.agent, *before) < absolute_rank(market, w.agent, *after));
}

TEST_CASE("hurt partition: prop1 attains the half-society bound exactly") {
    const ExtendedMarket market = prop1_market();
    const MatchingScheme scheme = stable_scheme(market);
    const HurtPartition partition = hurt_partition(market, scheme);
    CHECK(partition.same.empty());
    // Agents appear men first, then women, ascending by flat index.
    CHECK(partition.better == std::vector<AgentId>{man(1, 0), woman(0, 0)});
    CHECK(partition.worse == std::vector<AgentId>{man(0, 0), woman(1, 0)});
    CHECK(partition.fraction_worse() == doctest::Approx(0.5));
    CHECK(half_society_bound_holds(market, partition));

    std::vector<Matching> community;
    for (std::uint32_t c = 0; c < 2; ++c)
        community.push_back(scheme.at(Population::single(2, c)));
    CHECK(partner_rescue_holds(market, community, partition));
}

TEST_CASE("hurt partition: everyone keeps their partner in mutual-first markets") {
    const ExtendedMarket market = test::mutual_first_market(3, 2);
    const HurtPartition partition = hurt_partition(market, stable_scheme(market));
    CHECK(partition.worse.empty());
    CHECK(partition.better.empty());
    CHECK(partition.same.size() == market.total_agents());
}

TEST_CASE("hurt partition errors on unmatched agents") {
    const ExtendedMarket market = prop1_market();
    std::vector<Matching> community{Matching(market, Population::single(2, 0)),
                                    Matching(market, Population::single(2, 1))};
    const auto society = man_optimal_stable_matching(market, market.society()).matching;
    CHECK_THROWS_AS(hurt_partition(market, community, society), UnmatchedAgentError);
}

TEST_CASE("half-society bound and partner rescue on random stable schemes") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(seed % 3);
        const std::uint32_t kappa = 2 + static_cast<std::uint32_t>(seed % 2);
        const ExtendedMarket market = generate_uniform(MarketSpec{n, kappa, std::nullopt, seed});
        std::vector<Matching> community;
        for (std::uint32_t c = 0; c < kappa; ++c)
            community.push_back(
                man_optimal_stable_matching(market, Population::single(kappa, c)).matching);
        const auto society = man_optimal_stable_matching(market, market.society()).matching;
        const HurtPartition partition = hurt_partition(market, community, society);
        CHECK(half_society_bound_holds(market, partition));
        CHECK(partner_rescue_holds(market, community, partition));
        CHECK(partition.society_size() == market.total_agents());
    }
}
