#pragma once

#include <string>
#include <variant>
#include <vector>

#include "integra/market.hpp"

namespace integra {

// Expectation payloads, one per check kind. Each re-verifies against the
// live implementation when the fixture is checked.

/// MOSM of the population equals exactly these pairs.
struct MosmEquals {
    std::uint64_t population_mask;
    std::vector<std::pair<AgentId, AgentId>> pairs;
};

/// An agent's preference list equals this order.
struct PrefOrderEquals {
    AgentId agent;
    std::vector<AgentId> order;
};

/// The MOSM scheme's WIM check yields exactly these hurt agents (empty = WIM).
struct MosmWimWitnesses {
    std::vector<AgentId> hurt;
};

/// Properties of the scheme that marries within communities everywhere.
struct WithinCommunitySchemeIs {
    bool im;
    bool pareto;
    /// First blocking pair of its society matching, if unstable.
    std::optional<std::pair<AgentId, AgentId>> blocking_pair;
};

using ExpectationCheck =
    std::variant<MosmEquals, PrefOrderEquals, MosmWimWitnesses, WithinCommunitySchemeIs>;

struct Expectation {
    std::string description;
    ExpectationCheck check;
};

struct Fixture {
    std::string name;
    ExtendedMarket market;
    std::vector<Expectation> expectations;
};

/// Names understood by load_fixture, in loading order.
std::vector<std::string> fixture_names();

/** Loads a named instance from the fixture directory (the INTEGRA_FIXTURE_DIR
 * environment variable when set, the shipped fixtures/ directory otherwise)
 * together with its frozen expectations. Throws InvalidArgument on an
 * unknown name.
 */
Fixture load_fixture(const std::string& name);

/// Runs every expectation; returns a description of each failure (empty = all pass).
std::vector<std::string> verify_fixture(const Fixture& fixture);

/** The matching scheme that marries equal local indices within every
 * community of every population. Requires balanced communities.
 */
MatchingScheme within_community_scheme(const ExtendedMarket& market);

} // namespace integra
