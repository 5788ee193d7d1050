#include "integra/golden_instances.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "integra/deferred_acceptance.hpp"
#include "integra/fixture_io.hpp"
#include "integra/properties.hpp"

#ifndef INTEGRA_DEFAULT_FIXTURE_DIR
#define INTEGRA_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace integra {

namespace {

std::string fixture_dir() {
    if (const char* env = std::getenv("INTEGRA_FIXTURE_DIR")) return env;
    return INTEGRA_DEFAULT_FIXTURE_DIR;
}

std::vector<Expectation> expectations_for(const std::string& name) {
    using Pair = std::pair<AgentId, AgentId>;
    std::vector<Expectation> out;
    if (name == "prop1_2x2") {
        out.push_back({"community-A man lists the A woman first",
                       PrefOrderEquals{man(0, 0), {woman(0, 0), woman(1, 0)}}});
        out.push_back({"MOSM of the merged society swaps both couples",
                       MosmEquals{0b11, {Pair{man(0, 0), woman(1, 0)}, Pair{man(1, 0), woman(0, 0)}}}});
        out.push_back({"MOSM of community A marries within",
                       MosmEquals{0b01, {Pair{man(0, 0), woman(0, 0)}}}});
        out.push_back({"MOSM of community B marries within",
                       MosmEquals{0b10, {Pair{man(1, 0), woman(1, 0)}}}});
        out.push_back({"merging hurts exactly the A man and the B woman",
                       MosmWimWitnesses{{man(0, 0), woman(1, 0)}}});
    } else if (name == "prop2_3x3") {
        out.push_back({"community-D woman ranks A, B, D men in that order",
                       PrefOrderEquals{woman(2, 0), {man(0, 0), man(1, 0), man(2, 0)}}});
        out.push_back({"merging A and B gives everyone in it their in-pair favourite",
                       MosmEquals{0b011, {Pair{man(0, 0), woman(1, 0)}, Pair{man(1, 0), woman(0, 0)}}}});
    } else if (name == "pretty_ugly_2x2") {
        out.push_back({"within-community marriages are IM and Pareto optimal but blocked "
                       "by the two desirable agents",
                       WithinCommunitySchemeIs{true, true, Pair{man(0, 0), woman(1, 0)}}});
        out.push_back({"under the MOSM scheme, merging hurts exactly the two undesired agents",
                       MosmWimWitnesses{{woman(0, 0), man(1, 0)}}});
    } else if (name == "scheme_example_2x2") {
        out.push_back({"the printed scheme is the MOSM scheme: within-community singles",
                       MosmEquals{0b01, {Pair{man(0, 0), woman(0, 0)}}}});
        out.push_back({"the printed scheme swaps couples in the merged society",
                       MosmEquals{0b11, {Pair{man(0, 0), woman(1, 0)}, Pair{man(1, 0), woman(0, 0)}}}});
    } else {
        throw InvalidArgument("unknown fixture '" + name + "'");
    }
    return out;
}

std::string render_pair(const std::pair<AgentId, AgentId>& p) {
    return "(" + to_string(p.first) + ", " + to_string(p.second) + ")";
}

} // namespace

std::vector<std::string> fixture_names() {
    return {"prop1_2x2", "prop2_3x3", "pretty_ugly_2x2", "scheme_example_2x2"};
}

Fixture load_fixture(const std::string& name) {
    auto expectations = expectations_for(name); // validates the name first
    ExtendedMarket market = read_market_file(fixture_dir() + "/" + name + ".market");
    return Fixture{name, std::move(market), std::move(expectations)};
}

MatchingScheme within_community_scheme(const ExtendedMarket& market) {
    for (const auto& c : market.communities())
        if (c.men_count != c.women_count)
            throw InvalidArgument("within-community scheme: communities must be balanced");
    const std::uint32_t kappa = market.kappa();
    std::vector<Matching> entries;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << kappa); ++mask) {
        const Population population(kappa, mask);
        std::vector<std::int32_t> wife_of(market.side_count(Side::Man), -1);
        std::vector<std::int32_t> husband_of(market.side_count(Side::Woman), -1);
        for (const std::uint32_t c : population.communities()) {
            for (std::uint32_t i = 0; i < market.communities()[c].men_count; ++i) {
                const std::uint32_t m = market.community_offset(Side::Man, c) + i;
                const std::uint32_t w = market.community_offset(Side::Woman, c) + i;
                wife_of[m] = static_cast<std::int32_t>(w);
                husband_of[w] = static_cast<std::int32_t>(m);
            }
        }
        entries.push_back(Matching::from_partner_arrays(market, population, std::move(wife_of),
                                                        std::move(husband_of)));
    }
    return MatchingScheme(market, std::move(entries));
}

namespace {

struct ExpectationChecker {
    const Fixture& fixture;
    std::vector<std::string>& failures;
    const std::string& description;

    void fail(const std::string& detail) const {
        failures.push_back(fixture.name + ": " + description + " — " + detail);
    }

    void operator()(const MosmEquals& e) const {
        const ExtendedMarket& market = fixture.market;
        const Population population(market.kappa(), e.population_mask);
        const Matching got = man_optimal_stable_matching(market, population).matching;
        Matching want(market, population, e.pairs);
        if (!(got == want)) {
            std::ostringstream os;
            os << "MOSM pairs differ; got";
            for (const auto& [m, w] : got.pairs())
                os << ' ' << to_string(market.agent(Side::Man, m)) << "-"
                   << to_string(market.agent(Side::Woman, w));
            fail(os.str());
        }
    }

    void operator()(const PrefOrderEquals& e) const {
        const ExtendedMarket& market = fixture.market;
        const auto list = market.preferences().list(e.agent.side, market.flat(e.agent));
        std::vector<AgentId> got;
        for (const auto p : list) got.push_back(market.agent(opposite(e.agent.side), p));
        if (got != e.order) fail("preference order of " + to_string(e.agent) + " differs");
    }

    void operator()(const MosmWimWitnesses& e) const {
        const ExtendedMarket& market = fixture.market;
        const MatchingScheme scheme = stable_scheme(market);
        const MonotonicityResult r = is_wim(market, scheme);
        std::vector<AgentId> got;
        for (const auto& w : r.witnesses) got.push_back(w.agent);
        std::vector<AgentId> want = e.hurt;
        std::sort(want.begin(), want.end());
        if (got != want) {
            std::ostringstream os;
            os << "hurt agents differ; got {";
            for (const auto& id : got) os << ' ' << to_string(id);
            os << " }";
            fail(os.str());
        }
    }

    void operator()(const WithinCommunitySchemeIs& e) const {
        const ExtendedMarket& market = fixture.market;
        const MatchingScheme scheme = within_community_scheme(market);
        if (is_im(market, scheme).monotonic != e.im) fail("IM flag differs");
        if (is_pareto_scheme(market, scheme).optimal != e.pareto) fail("Pareto flag differs");
        const auto blocking = find_blocking_pair(market, scheme.at(market.society()));
        if (blocking != e.blocking_pair) {
            fail("blocking pair differs; got " +
                 (blocking ? render_pair(*blocking) : std::string("none")));
        }
    }
};

} // namespace

std::vector<std::string> verify_fixture(const Fixture& fixture) {
    std::vector<std::string> failures;
    for (const Expectation& e : fixture.expectations)
        std::visit(ExpectationChecker{fixture, failures, e.description}, e.check);
    return failures;
}

} // namespace integra
