#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "integra/error.hpp"

namespace integra {

enum class Side : std::uint8_t { Man = 0, Woman = 1 };

constexpr Side opposite(Side s) { return s == Side::Man ? Side::Woman : Side::Man; }

/** Identifies one person by community index, side, and index within that
 * community's side. Two ids are equal iff all three fields are equal;
 * ordering is lexicographic over (community, side, local).
 */
struct AgentId {
    std::uint32_t community = 0;
    Side side = Side::Man;
    std::uint32_t local = 0;

    friend bool operator==(const AgentId&, const AgentId&) = default;
    friend auto operator<=>(const AgentId&, const AgentId&) = default;
};

AgentId man(std::uint32_t community, std::uint32_t local);
AgentId woman(std::uint32_t community, std::uint32_t local);

/// Renders "m0.1" / "w2.0" (side, community, dot, local index).
std::string to_string(const AgentId& id);

/// A community always contains at least one person of each gender.
struct Community {
    std::uint32_t men_count = 0;
    std::uint32_t women_count = 0;
};

/** A nonempty set of whole communities, represented as a bitmask over the
 * community indices of a society with `kappa` communities (kappa <= 64).
 */
class Population {
public:
    Population(std::uint32_t kappa, std::uint64_t mask);

    static Population all(std::uint32_t kappa);
    static Population single(std::uint32_t kappa, std::uint32_t community);
    static Population of(std::uint32_t kappa, std::initializer_list<std::uint32_t> communities);

    std::uint32_t kappa() const { return kappa_; }
    std::uint64_t mask() const { return mask_; }

    bool contains(std::uint32_t community) const { return (mask_ >> community) & 1u; }
    std::uint32_t community_count() const;

    bool subset_of(const Population& other) const;
    bool disjoint_with(const Population& other) const;
    Population united(const Population& other) const;

    /// Community indices present, ascending.
    std::vector<std::uint32_t> communities() const;

    friend bool operator==(const Population&, const Population&) = default;

private:
    std::uint32_t kappa_;
    std::uint64_t mask_;
};

/** Complete strict preferences of every agent over the whole opposite side
 * of the society. Each list is a permutation of the opposite side's flat
 * indices, most preferred first; the inverse map (partner -> position) is
 * kept alongside so rank queries are O(1).
 */
class PreferenceProfile {
public:
    PreferenceProfile(std::vector<std::vector<std::uint32_t>> men_lists,
                      std::vector<std::vector<std::uint32_t>> women_lists);

    std::uint32_t men() const { return static_cast<std::uint32_t>(order_[0].size()); }
    std::uint32_t women() const { return static_cast<std::uint32_t>(order_[1].size()); }

    /// Preference order of `agent` (flat index on `side`), most preferred first.
    std::span<const std::uint32_t> list(Side side, std::uint32_t agent) const;

    /// 0-based position of `partner` in `agent`'s list.
    std::uint32_t position(Side side, std::uint32_t agent, std::uint32_t partner) const;

    /// True iff `agent` strictly prefers `a` to `b`.
    bool prefers(Side side, std::uint32_t agent, std::uint32_t a, std::uint32_t b) const {
        return position(side, agent, a) < position(side, agent, b);
    }

private:
    // order_[side][agent] = partners in preference order;
    // inverse_[side][agent][partner] = position.
    std::vector<std::vector<std::uint32_t>> order_[2];
    std::vector<std::vector<std::uint32_t>> inverse_[2];
};

/** An extended marriage problem: kappa disjoint communities plus complete
 * strict preferences of every member over the whole opposite side of the
 * society. Immutable after construction; all layout queries are O(1).
 *
 * Agents have two addresses: the structural AgentId and a flat per-side
 * index obtained by concatenating communities in order. Flat indices are
 * what preference lists and matchings store.
 */
class ExtendedMarket {
public:
    ExtendedMarket(std::vector<Community> communities, PreferenceProfile preferences);

    std::uint32_t kappa() const { return static_cast<std::uint32_t>(communities_.size()); }
    const std::vector<Community>& communities() const { return communities_; }
    const PreferenceProfile& preferences() const { return preferences_; }

    std::uint32_t side_count(Side s) const { return s == Side::Man ? total_men_ : total_women_; }
    std::uint32_t total_agents() const { return total_men_ + total_women_; }

    /// Number of `side` agents that live in the communities of `population`.
    std::uint32_t side_count(Side s, const Population& population) const;
    std::uint32_t agent_count(const Population& population) const;

    std::uint32_t flat(const AgentId& id) const;
    AgentId agent(Side side, std::uint32_t flat) const;
    std::uint32_t community_of(Side side, std::uint32_t flat) const;
    bool in_population(Side side, std::uint32_t flat, const Population& population) const;

    Population society() const { return Population::all(kappa()); }

    /// First flat index of `side` agents in `community`.
    std::uint32_t community_offset(Side side, std::uint32_t community) const;

private:
    std::vector<Community> communities_;
    PreferenceProfile preferences_;
    std::vector<std::uint32_t> men_offset_;   // prefix sums, size kappa+1
    std::vector<std::uint32_t> women_offset_;
    std::vector<std::uint32_t> men_community_;   // flat index -> community
    std::vector<std::uint32_t> women_community_;
    std::uint32_t total_men_ = 0;
    std::uint32_t total_women_ = 0;
};

/** A matching on a population: a partial pairing of its men and women.
 * Agents without a partner are self-matched. Construction validates the
 * involution, closure within the population, and opposite-sidedness.
 */
class Matching {
public:
    /// Empty matching (everyone self-matched).
    Matching(const ExtendedMarket& market, Population population);

    Matching(const ExtendedMarket& market, Population population,
             std::span<const std::pair<AgentId, AgentId>> pairs);

    /** Fast path used by the solvers: wife_of[man] / husband_of[woman] hold
     * flat partner indices, -1 for self-matched or outside the population.
     * The two arrays must be mutually consistent.
     */
    static Matching from_partner_arrays(const ExtendedMarket& market, Population population,
                                        std::vector<std::int32_t> wife_of,
                                        std::vector<std::int32_t> husband_of);

    const Population& population() const { return population_; }

    std::optional<std::uint32_t> partner_flat(Side side, std::uint32_t agent) const;
    std::optional<AgentId> partner(const ExtendedMarket& market, const AgentId& id) const;

    /// Matched (man, woman) flat-index pairs, ascending by man.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs() const;

    std::size_t pair_count() const { return pair_count_; }

    /// True iff every population member on both sides is matched.
    bool complete_on(const ExtendedMarket& market) const;

    friend bool operator==(const Matching& a, const Matching& b) {
        return a.population_ == b.population_ && a.wife_of_ == b.wife_of_;
    }

    /// Strict weak order by the sorted pair encoding (deterministic tie-breaks).
    static bool lex_less(const Matching& a, const Matching& b);

private:
    Population population_;
    std::vector<std::int32_t> wife_of_;
    std::vector<std::int32_t> husband_of_;
    std::size_t pair_count_ = 0;
};

/** A matching for every one of the 2^kappa - 1 nonempty populations.
 * Construction checks totality: exactly one entry per population.
 */
class MatchingScheme {
public:
    MatchingScheme(const ExtendedMarket& market, std::vector<Matching> entries);

    const Matching& at(const Population& population) const;
    std::uint32_t kappa() const { return kappa_; }

    /// All nonempty populations, ascending by mask.
    std::vector<Population> populations() const;

private:
    std::uint32_t kappa_;
    std::vector<Matching> by_mask_; // index = mask - 1
};

// --- rank queries -----------------------------------------------------------

/** Rank of `partner` in `of`'s list over the whole society's opposite side:
 * 1 for the most preferred, side_count(opposite) for the least preferred.
 */
std::uint32_t absolute_rank(const ExtendedMarket& market, const AgentId& of, const AgentId& partner);

/** Rank of `partner` counted against the opposite-side members of `of`'s own
 * community: |{p in C_of : p weakly preferred to partner}|. Equals 1 for the
 * community-best partner; returns 0 when `partner` is outside the community
 * and preferred to every community member.
 */
std::uint32_t relative_rank(const ExtendedMarket& market, const AgentId& of, const AgentId& partner);

enum class RankMode : std::uint8_t { Absolute, Relative };

/** Arithmetic mean of the chosen rank of each `side` agent's partner over the
 * matching's population. Throws UnmatchedAgentError if any `side` agent in
 * the population is self-matched.
 */
double average_rank(const ExtendedMarket& market, const Matching& matching, Side side,
                    RankMode mode);

/** True iff `agent` weakly prefers partner `a` to partner `b`, where an empty
 * optional denotes being self-matched. Everyone prefers any partner to being
 * alone.
 */
bool prefers_weakly(const ExtendedMarket& market, Side side, std::uint32_t agent,
                    std::optional<std::uint32_t> a, std::optional<std::uint32_t> b);
bool prefers_strictly(const ExtendedMarket& market, Side side, std::uint32_t agent,
                      std::optional<std::uint32_t> a, std::optional<std::uint32_t> b);

} // namespace integra
