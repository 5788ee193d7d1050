#include "integra/market.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace integra {

AgentId man(std::uint32_t community, std::uint32_t local) {
    return AgentId{community, Side::Man, local};
}

AgentId woman(std::uint32_t community, std::uint32_t local) {
    return AgentId{community, Side::Woman, local};
}

std::string to_string(const AgentId& id) {
    return std::string(id.side == Side::Man ? "m" : "w") + std::to_string(id.community) + "." +
           std::to_string(id.local);
}

// --- Population -------------------------------------------------------------

Population::Population(std::uint32_t kappa, std::uint64_t mask) : kappa_(kappa), mask_(mask) {
    if (kappa == 0 || kappa > 64)
        throw InvalidArgument("population: kappa must be in [1, 64], got " + std::to_string(kappa));
    if (mask == 0) throw InvalidArgument("population: must contain at least one community");
    if (kappa < 64 && (mask >> kappa) != 0)
        throw InvalidArgument("population: mask refers to communities beyond kappa");
}

Population Population::all(std::uint32_t kappa) {
    if (kappa == 0 || kappa > 64) throw InvalidArgument("population: bad kappa");
    return Population(kappa, kappa == 64 ? ~0ull : (1ull << kappa) - 1);
}

Population Population::single(std::uint32_t kappa, std::uint32_t community) {
    if (community >= kappa) throw InvalidArgument("population: community index out of range");
    return Population(kappa, 1ull << community);
}

Population Population::of(std::uint32_t kappa, std::initializer_list<std::uint32_t> communities) {
    std::uint64_t mask = 0;
    for (auto c : communities) {
        if (c >= kappa) throw InvalidArgument("population: community index out of range");
        mask |= 1ull << c;
    }
    return Population(kappa, mask);
}

std::uint32_t Population::community_count() const {
    return static_cast<std::uint32_t>(std::popcount(mask_));
}

bool Population::subset_of(const Population& other) const {
    return (mask_ & ~other.mask_) == 0;
}

bool Population::disjoint_with(const Population& other) const {
    return (mask_ & other.mask_) == 0;
}

Population Population::united(const Population& other) const {
    return Population(kappa_, mask_ | other.mask_);
}

std::vector<std::uint32_t> Population::communities() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 0; c < kappa_; ++c)
        if (contains(c)) out.push_back(c);
    return out;
}

// --- PreferenceProfile ------------------------------------------------------

namespace {

void validate_permutations(const std::vector<std::vector<std::uint32_t>>& lists,
                           std::size_t universe, const char* who) {
    std::vector<char> seen(universe);
    for (const auto& list : lists) {
        if (list.size() != universe)
            throw InvalidArgument(std::string(who) +
                                  ": preference list length does not match the opposite side");
        std::fill(seen.begin(), seen.end(), 0);
        for (auto p : list) {
            if (p >= universe || seen[p])
                throw InvalidArgument(std::string(who) + ": preference list is not a permutation");
            seen[p] = 1;
        }
    }
}

} // namespace

PreferenceProfile::PreferenceProfile(std::vector<std::vector<std::uint32_t>> men_lists,
                                     std::vector<std::vector<std::uint32_t>> women_lists) {
    validate_permutations(men_lists, women_lists.size(), "men");
    validate_permutations(women_lists, men_lists.size(), "women");
    order_[0] = std::move(men_lists);
    order_[1] = std::move(women_lists);
    for (int s = 0; s < 2; ++s) {
        inverse_[s].resize(order_[s].size());
        for (std::size_t a = 0; a < order_[s].size(); ++a) {
            inverse_[s][a].resize(order_[s][a].size());
            for (std::uint32_t pos = 0; pos < order_[s][a].size(); ++pos)
                inverse_[s][a][order_[s][a][pos]] = pos;
        }
    }
}

std::span<const std::uint32_t> PreferenceProfile::list(Side side, std::uint32_t agent) const {
    const auto& rows = order_[static_cast<int>(side)];
    if (agent >= rows.size()) throw InvalidArgument("preferences: unknown agent");
    return rows[agent];
}

std::uint32_t PreferenceProfile::position(Side side, std::uint32_t agent,
                                          std::uint32_t partner) const {
    const auto& rows = inverse_[static_cast<int>(side)];
    if (agent >= rows.size()) throw InvalidArgument("preferences: unknown agent");
    if (partner >= rows[agent].size()) throw InvalidArgument("preferences: unknown partner");
    return rows[agent][partner];
}

// --- ExtendedMarket ---------------------------------------------------------

ExtendedMarket::ExtendedMarket(std::vector<Community> communities, PreferenceProfile preferences)
    : communities_(std::move(communities)), preferences_(std::move(preferences)) {
    if (communities_.empty()) throw InvalidArgument("market: needs at least one community");
    if (communities_.size() > 64) throw InvalidArgument("market: at most 64 communities");
    men_offset_.assign(1, 0);
    women_offset_.assign(1, 0);
    for (std::size_t c = 0; c < communities_.size(); ++c) {
        if (communities_[c].men_count == 0 || communities_[c].women_count == 0)
            throw InvalidArgument("market: community " + std::to_string(c) +
                                  " must contain at least one person of each gender");
        men_offset_.push_back(men_offset_.back() + communities_[c].men_count);
        women_offset_.push_back(women_offset_.back() + communities_[c].women_count);
        for (std::uint32_t i = 0; i < communities_[c].men_count; ++i)
            men_community_.push_back(static_cast<std::uint32_t>(c));
        for (std::uint32_t i = 0; i < communities_[c].women_count; ++i)
            women_community_.push_back(static_cast<std::uint32_t>(c));
    }
    total_men_ = men_offset_.back();
    total_women_ = women_offset_.back();
    if (preferences_.men() != total_men_ || preferences_.women() != total_women_)
        throw InvalidArgument("market: preference profile does not match community sizes");
}

std::uint32_t ExtendedMarket::side_count(Side s, const Population& population) const {
    if (population.kappa() != kappa()) throw InvalidArgument("market: population kappa mismatch");
    std::uint32_t total = 0;
    for (std::uint32_t c = 0; c < kappa(); ++c)
        if (population.contains(c))
            total += s == Side::Man ? communities_[c].men_count : communities_[c].women_count;
    return total;
}

std::uint32_t ExtendedMarket::agent_count(const Population& population) const {
    return side_count(Side::Man, population) + side_count(Side::Woman, population);
}

std::uint32_t ExtendedMarket::flat(const AgentId& id) const {
    if (id.community >= kappa()) throw InvalidArgument("market: unknown community in agent id");
    const auto& offsets = id.side == Side::Man ? men_offset_ : women_offset_;
    const std::uint32_t count = id.side == Side::Man ? communities_[id.community].men_count
                                                     : communities_[id.community].women_count;
    if (id.local >= count) throw InvalidArgument("market: local index out of range for agent id");
    return offsets[id.community] + id.local;
}

AgentId ExtendedMarket::agent(Side side, std::uint32_t flat) const {
    if (flat >= side_count(side)) throw InvalidArgument("market: flat agent index out of range");
    const std::uint32_t c = community_of(side, flat);
    const auto& offsets = side == Side::Man ? men_offset_ : women_offset_;
    return AgentId{c, side, flat - offsets[c]};
}

std::uint32_t ExtendedMarket::community_of(Side side, std::uint32_t flat) const {
    const auto& map = side == Side::Man ? men_community_ : women_community_;
    if (flat >= map.size()) throw InvalidArgument("market: flat agent index out of range");
    return map[flat];
}

bool ExtendedMarket::in_population(Side side, std::uint32_t flat,
                                   const Population& population) const {
    return population.contains(community_of(side, flat));
}

std::uint32_t ExtendedMarket::community_offset(Side side, std::uint32_t community) const {
    if (community >= kappa()) throw InvalidArgument("market: community index out of range");
    return (side == Side::Man ? men_offset_ : women_offset_)[community];
}

// --- Matching ---------------------------------------------------------------

Matching::Matching(const ExtendedMarket& market, Population population)
    : population_(population),
      wife_of_(market.side_count(Side::Man), -1),
      husband_of_(market.side_count(Side::Woman), -1) {
    if (population.kappa() != market.kappa())
        throw InvalidArgument("matching: population kappa mismatch");
}

Matching::Matching(const ExtendedMarket& market, Population population,
                   std::span<const std::pair<AgentId, AgentId>> pairs)
    : Matching(market, population) {
    for (const auto& [a, b] : pairs) {
        const AgentId& m = a.side == Side::Man ? a : b;
        const AgentId& w = a.side == Side::Man ? b : a;
        if (m.side != Side::Man || w.side != Side::Woman)
            throw InvalidArgument("matching: a pair must contain one man and one woman");
        const std::uint32_t mf = market.flat(m);
        const std::uint32_t wf = market.flat(w);
        if (!market.in_population(Side::Man, mf, population_) ||
            !market.in_population(Side::Woman, wf, population_))
            throw InvalidArgument("matching: pair member outside the population");
        if (wife_of_[mf] != -1 || husband_of_[wf] != -1)
            throw InvalidArgument("matching: agent matched twice");
        wife_of_[mf] = static_cast<std::int32_t>(wf);
        husband_of_[wf] = static_cast<std::int32_t>(mf);
        ++pair_count_;
    }
}

Matching Matching::from_partner_arrays(const ExtendedMarket& market, Population population,
                                       std::vector<std::int32_t> wife_of,
                                       std::vector<std::int32_t> husband_of) {
    Matching m(market, population);
    if (wife_of.size() != m.wife_of_.size() || husband_of.size() != m.husband_of_.size())
        throw InvalidArgument("matching: partner array size mismatch");
    std::size_t pairs = 0;
    for (std::uint32_t mf = 0; mf < wife_of.size(); ++mf) {
        const std::int32_t wf = wife_of[mf];
        if (wf == -1) continue;
        if (wf < 0 || static_cast<std::size_t>(wf) >= husband_of.size() ||
            husband_of[wf] != static_cast<std::int32_t>(mf))
            throw InvalidArgument("matching: partner arrays are not an involution");
        if (!market.in_population(Side::Man, mf, population) ||
            !market.in_population(Side::Woman, static_cast<std::uint32_t>(wf), population))
            throw InvalidArgument("matching: matched agent outside the population");
        ++pairs;
    }
    for (std::uint32_t wf = 0; wf < husband_of.size(); ++wf) {
        const std::int32_t mf = husband_of[wf];
        if (mf != -1 && wife_of[static_cast<std::size_t>(mf)] != static_cast<std::int32_t>(wf))
            throw InvalidArgument("matching: partner arrays are not an involution");
    }
    m.wife_of_ = std::move(wife_of);
    m.husband_of_ = std::move(husband_of);
    m.pair_count_ = pairs;
    return m;
}

std::optional<std::uint32_t> Matching::partner_flat(Side side, std::uint32_t agent) const {
    const auto& arr = side == Side::Man ? wife_of_ : husband_of_;
    if (agent >= arr.size()) throw InvalidArgument("matching: agent index out of range");
    if (arr[agent] == -1) return std::nullopt;
    return static_cast<std::uint32_t>(arr[agent]);
}

std::optional<AgentId> Matching::partner(const ExtendedMarket& market, const AgentId& id) const {
    const auto p = partner_flat(id.side, market.flat(id));
    if (!p) return std::nullopt;
    return market.agent(opposite(id.side), *p);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Matching::pairs() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(pair_count_);
    for (std::uint32_t mf = 0; mf < wife_of_.size(); ++mf)
        if (wife_of_[mf] != -1) out.emplace_back(mf, static_cast<std::uint32_t>(wife_of_[mf]));
    return out;
}

bool Matching::complete_on(const ExtendedMarket& market) const {
    for (std::uint32_t mf = 0; mf < wife_of_.size(); ++mf)
        if (market.in_population(Side::Man, mf, population_) && wife_of_[mf] == -1) return false;
    for (std::uint32_t wf = 0; wf < husband_of_.size(); ++wf)
        if (market.in_population(Side::Woman, wf, population_) && husband_of_[wf] == -1)
            return false;
    return true;
}

bool Matching::lex_less(const Matching& a, const Matching& b) {
    return a.pairs() < b.pairs();
}

// --- MatchingScheme ---------------------------------------------------------

MatchingScheme::MatchingScheme(const ExtendedMarket& market, std::vector<Matching> entries)
    : kappa_(market.kappa()) {
    if (kappa_ > 20)
        throw SizeLimitError("scheme: table would need 2^" + std::to_string(kappa_) + " entries");
    const std::size_t needed = (std::size_t{1} << kappa_) - 1;
    if (entries.size() != needed)
        throw InvalidArgument("scheme: expected " + std::to_string(needed) + " matchings, got " +
                              std::to_string(entries.size()));
    std::sort(entries.begin(), entries.end(), [](const Matching& a, const Matching& b) {
        return a.population().mask() < b.population().mask();
    });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::uint64_t mask = entries[i].population().mask();
        if (mask != i + 1)
            throw InvalidArgument("scheme: table must contain every nonempty population exactly once");
    }
    by_mask_ = std::move(entries);
}

const Matching& MatchingScheme::at(const Population& population) const {
    if (population.kappa() != kappa_) throw InvalidArgument("scheme: population kappa mismatch");
    return by_mask_[population.mask() - 1];
}

std::vector<Population> MatchingScheme::populations() const {
    std::vector<Population> out;
    out.reserve(by_mask_.size());
    for (const auto& m : by_mask_) out.push_back(m.population());
    return out;
}

// --- rank queries ------------------------------------------------------------

namespace {

void check_opposite(const AgentId& of, const AgentId& partner) {
    if (of.side == partner.side)
        throw InvalidArgument("rank: " + to_string(of) + " and " + to_string(partner) +
                              " are on the same side");
}

} // namespace

std::uint32_t absolute_rank(const ExtendedMarket& market, const AgentId& of,
                            const AgentId& partner) {
    check_opposite(of, partner);
    return market.preferences().position(of.side, market.flat(of), market.flat(partner)) + 1;
}

std::uint32_t relative_rank(const ExtendedMarket& market, const AgentId& of,
                            const AgentId& partner) {
    check_opposite(of, partner);
    const std::uint32_t self = market.flat(of);
    const std::uint32_t target = market.flat(partner);
    const Side partner_side = opposite(of.side);
    const std::uint32_t pos = market.preferences().position(of.side, self, target);
    // Count community members weakly preferred to the partner: a scan over
    // the prefix [0, pos] of the list, plus the partner itself when inside.
    const auto list = market.preferences().list(of.side, self);
    std::uint32_t count = 0;
    for (std::uint32_t i = 0; i <= pos; ++i)
        if (market.community_of(partner_side, list[i]) == of.community) ++count;
    return count;
}

double average_rank(const ExtendedMarket& market, const Matching& matching, Side side,
                    RankMode mode) {
    const Population& population = matching.population();
    std::uint64_t sum = 0;
    std::uint32_t agents = 0;
    for (std::uint32_t a = 0; a < market.side_count(side); ++a) {
        if (!market.in_population(side, a, population)) continue;
        const auto partner = matching.partner_flat(side, a);
        if (!partner)
            throw UnmatchedAgentError("average_rank: " + to_string(market.agent(side, a)) +
                                      " is unmatched");
        const AgentId of = market.agent(side, a);
        const AgentId p = market.agent(opposite(side), *partner);
        sum += mode == RankMode::Absolute ? absolute_rank(market, of, p)
                                          : relative_rank(market, of, p);
        ++agents;
    }
    if (agents == 0) throw InvalidArgument("average_rank: population has no such agents");
    return static_cast<double>(sum) / agents;
}

bool prefers_weakly(const ExtendedMarket& market, Side side, std::uint32_t agent,
                    std::optional<std::uint32_t> a, std::optional<std::uint32_t> b) {
    if (!a && !b) return true;
    if (!a) return false; // any partner beats being alone
    if (!b) return true;
    return market.preferences().position(side, agent, *a) <=
           market.preferences().position(side, agent, *b);
}

bool prefers_strictly(const ExtendedMarket& market, Side side, std::uint32_t agent,
                      std::optional<std::uint32_t> a, std::optional<std::uint32_t> b) {
    return !prefers_weakly(market, side, agent, b, a);
}

} // namespace integra
