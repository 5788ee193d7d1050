#include "doctest.h"

#include <sstream>

#include "integra/fixture_io.hpp"
#include "integra/random_markets.hpp"
#include "test_helpers.hpp"

using namespace integra;

TEST_CASE("market files: write then read gives the same market") {
    for (const std::uint64_t seed : {11ull, 12ull, 13ull, 14ull}) {
        const ExtendedMarket market = generate_uniform(MarketSpec{3, 2, std::nullopt, seed});
        std::stringstream buffer;
        write_market(buffer, market);
        const ExtendedMarket back = read_market(buffer);
        CHECK(test::market_digest(back) == test::market_digest(market));
        CHECK(back.kappa() == market.kappa());
    }
}

TEST_CASE("market files: comments, blank lines, and shorthand counts") {
    std::istringstream in(
        "# a two-community market\n"
        "\n"
        "2 1 1,1\n"
        "0 m 0 : 0.0 1.0\n"
        "1 m 0 : 0.0 1.0\n"
        "0 w 0 : 1.0 0.0\n"
        "1 w 0 : 1.0 0.0\n");
    const ExtendedMarket market = read_market(in);
    CHECK(market.kappa() == 2);
    CHECK(market.communities()[0].men_count == 1);
    CHECK(market.communities()[0].women_count == 1);
    CHECK(market.preferences().list(Side::Man, 0)[0] == 0);
}

TEST_CASE("market files: parse errors are loud") {
    const auto reject = [](const char* text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(read_market(in), ParseError);
    };
    reject("");                                           // empty
    reject("1 1\n0 m 0 : 0.0\n");                         // missing woman line
    reject("1 1\n0 m 0 : 0.0\n0 w 0 : 0.0\n0 w 0 : 0.0\n"); // duplicate line
    reject("1 1\n0 m 0 : 0.1\n0 w 0 : 0.0\n");            // partner out of range
    reject("1 1\n0 m 0 0.0\n0 w 0 : 0.0\n");              // missing colon
    reject("1 1\n0 m 0 : 0.0 0.0\n0 w 0 : 0.0\n");        // not a permutation
    reject("2 1,1\n");                                    // header count shortfall
    reject("1 1,x\n");                                    // malformed count
}
