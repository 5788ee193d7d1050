#include "doctest.h"

#include "integra/deferred_acceptance.hpp"
#include "integra/enumerate.hpp"
#include "integra/golden_instances.hpp"
#include "integra/properties.hpp"
#include "integra/random_markets.hpp"
#include "test_helpers.hpp"

using namespace integra;

TEST_CASE("prop1 society has exactly one stable matching") {
    const ExtendedMarket market = test::make_market(
        {Community{1, 1}, Community{1, 1}},
        {{woman(0, 0), woman(1, 0)}, {woman(0, 0), woman(1, 0)}},
        {{man(1, 0), man(0, 0)}, {man(1, 0), man(0, 0)}});
    const auto stable = enumerate_stable_matchings(market, Population::all(2));
    REQUIRE(stable.size() == 1);
    CHECK(stable[0].partner(market, man(0, 0)) == woman(1, 0));
    CHECK(stable[0].partner(market, man(1, 0)) == woman(0, 0));
}

TEST_CASE("mutual-first-choice market has exactly the identity stable matching") {
    const ExtendedMarket market = test::mutual_first_market(3, 1);
    const auto stable = enumerate_stable_matchings(market, Population::all(1));
    REQUIRE(stable.size() == 1);
    for (std::uint32_t m = 0; m < 3; ++m) CHECK(stable[0].partner_flat(Side::Man, m) == m);

    const auto pareto = enumerate_pareto_matchings(market, Population::all(1));
    bool identity_found = false;
    for (const auto& matching : pareto)
        if (matching == stable[0]) identity_found = true;
    CHECK(identity_found);
}

TEST_CASE("opposed 2x2 tastes produce both stable matchings") {
    // Men: w0 > w1 / w1 > w0. Women: m1 > m0 / m0 > m1.
    const ExtendedMarket market = test::make_market(
        {Community{2, 2}},
        {{woman(0, 0), woman(0, 1)}, {woman(0, 1), woman(0, 0)}},
        {{man(0, 1), man(0, 0)}, {man(0, 0), man(0, 1)}});
    const auto stable = enumerate_stable_matchings(market, Population::all(1));
    CHECK(stable.size() == 2);
    // Man-optimal member: every man at his first choice.
    const auto mosm = man_optimal_stable_matching(market, Population::all(1)).matching;
    CHECK(mosm.partner(market, man(0, 0)) == woman(0, 0));
    CHECK(mosm.partner(market, man(0, 1)) == woman(0, 1));
}

TEST_CASE("oracle bound rejects oversized populations") {
    const ExtendedMarket market = generate_uniform(MarketSpec{9, 1, std::nullopt, 1});
    CHECK_THROWS_AS(enumerate_stable_matchings(market, Population::all(1)), SizeLimitError);
    CHECK_THROWS_AS(enumerate_pareto_matchings(market, Population::all(1), 10), SizeLimitError);
    CHECK_NOTHROW(enumerate_stable_matchings(market, Population::all(1), 18));
}

TEST_CASE("deferred acceptance agrees with the brute-force oracle and is man-optimal") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(seed % 4);
        const std::uint32_t kappa = 1 + static_cast<std::uint32_t>(seed % 2);
        const ExtendedMarket market = generate_uniform(MarketSpec{n, kappa, std::nullopt, seed});
        const Population society = market.society();
        const auto stable = enumerate_stable_matchings(market, society);
        const auto mosm = man_optimal_stable_matching(market, society).matching;

        bool found = false;
        for (const auto& s : stable) {
            if (s == mosm) found = true;
            // Man-optimality: every man weakly prefers his MOSM partner.
            for (std::uint32_t m = 0; m < market.side_count(Side::Man); ++m)
                CHECK(prefers_weakly(market, Side::Man, m, mosm.partner_flat(Side::Man, m),
                                     s.partner_flat(Side::Man, m)));
        }
        CHECK(found);
        // Stability implies Pareto optimality.
        for (const auto& s : stable) CHECK(is_pareto_optimal(market, s).optimal);
    }
}

TEST_CASE("wim-pareto scheme: prop1 keeps the within-community marriages") {
    const ExtendedMarket market = test::make_market(
        {Community{1, 1}, Community{1, 1}},
        {{woman(0, 0), woman(1, 0)}, {woman(0, 0), woman(1, 0)}},
        {{man(1, 0), man(0, 0)}, {man(1, 0), man(0, 0)}});
    const MatchingScheme scheme = build_wim_pareto_scheme(market);
    const Matching& society = scheme.at(Population::all(2));
    CHECK(society.partner(market, man(0, 0)) == woman(0, 0));
    CHECK(society.partner(market, man(1, 0)) == woman(1, 0));
    CHECK(is_wim(market, scheme).monotonic);
    CHECK(is_pareto_scheme(market, scheme).optimal);
}

TEST_CASE("wim-pareto scheme: single community is just a Pareto-optimal matching") {
    const ExtendedMarket market = generate_uniform(MarketSpec{3, 1, std::nullopt, 77});
    const MatchingScheme scheme = build_wim_pareto_scheme(market);
    CHECK(is_wim(market, scheme).monotonic); // trivially: society == the community
    CHECK(is_pareto_optimal(market, scheme.at(Population::all(1))).optimal);
}

TEST_CASE("wim-pareto scheme passes both properties on random small markets") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::uint32_t kappa = 1 + static_cast<std::uint32_t>(seed % 3);
        const std::uint32_t n = 1 + static_cast<std::uint32_t>((seed / 3) % 2);
        const ExtendedMarket market = generate_uniform(MarketSpec{n, kappa, std::nullopt, seed});
        const MatchingScheme scheme = build_wim_pareto_scheme(market);
        CHECK(is_wim(market, scheme).monotonic);
        CHECK(is_pareto_scheme(market, scheme).optimal);
    }
}

TEST_CASE("wim-pareto scheme rejects unbalanced communities") {
    const ExtendedMarket market = test::make_market(
        {Community{2, 1}},
        {{woman(0, 0)}, {woman(0, 0)}},
        {{man(0, 0), man(0, 1)}});
    CHECK_THROWS_AS(build_wim_pareto_scheme(market), InvalidArgument);
}
