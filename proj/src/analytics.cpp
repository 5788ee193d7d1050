#include "integra/analytics.hpp"

#include <cmath>

namespace integra {

namespace {

double mean_absolute_rank(const ExtendedMarket& market, Side side,
                          const std::vector<Matching>& community_matchings) {
    // Average over the whole society of the community-matching partner's
    // absolute (society-wide) rank.
    std::uint64_t sum = 0;
    const std::uint32_t count = market.side_count(side);
    for (std::uint32_t a = 0; a < count; ++a) {
        const std::uint32_t c = market.community_of(side, a);
        const auto partner = community_matchings[c].partner_flat(side, a);
        if (!partner)
            throw UnmatchedAgentError("gains: " + to_string(market.agent(side, a)) +
                                      " unmatched in its community");
        sum += market.preferences().position(side, a, *partner) + 1;
    }
    return static_cast<double>(sum) / count;
}

} // namespace

IntegrationOutcome integrate_with_mosm(const ExtendedMarket& market) {
    for (const auto& c : market.communities())
        if (c.men_count != c.women_count)
            throw InvalidArgument("gains: every community must have n men and n women");

    std::vector<DeferredAcceptanceResult> per_community;
    per_community.reserve(market.kappa());
    std::vector<Matching> community_matchings;
    for (std::uint32_t c = 0; c < market.kappa(); ++c) {
        per_community.push_back(man_optimal_stable_matching(
            market, Population::single(market.kappa(), c)));
        community_matchings.push_back(per_community.back().matching);
    }
    DeferredAcceptanceResult society = man_optimal_stable_matching(market, market.society());

    HurtPartition partition = hurt_partition(market, community_matchings, society.matching);

    IntegrationStats stats;
    const double before_m = mean_absolute_rank(market, Side::Man, community_matchings);
    const double before_w = mean_absolute_rank(market, Side::Woman, community_matchings);
    stats.expected_rank_men = average_rank(market, society.matching, Side::Man, RankMode::Absolute);
    stats.expected_rank_women =
        average_rank(market, society.matching, Side::Woman, RankMode::Absolute);
    stats.gamma_m = before_m - stats.expected_rank_men;
    stats.gamma_w = before_w - stats.expected_rank_women;
    stats.frac_worse = partition.fraction_worse();

    std::size_t worse_men = 0;
    for (const AgentId& id : partition.worse)
        if (id.side == Side::Man) ++worse_men;
    if (!partition.worse.empty()) {
        stats.frac_worse_men_share = static_cast<double>(worse_men) / partition.worse.size();
        stats.frac_worse_women_share = 1.0 - stats.frac_worse_men_share;
    }

    const LossSummary losses =
        loss_summary(market, partition, community_matchings, society.matching);
    stats.mean_loss_men = losses.mean_loss_men;
    stats.mean_loss_women = losses.mean_loss_women;

    return IntegrationOutcome{std::move(per_community), std::move(society), std::move(partition),
                              stats};
}

IntegrationStats gains_from_integration(const ExtendedMarket& market) {
    return integrate_with_mosm(market).stats;
}

AsymptoticGains asymptotic_gains(std::uint32_t n, std::uint32_t kappa) {
    if (kappa == 0) throw DomainError("asymptotic gains: kappa must be positive");
    if (n < 2) throw DomainError("asymptotic gains: n must be at least 2 (log 1 = 0)");
    const double logn = std::log(static_cast<double>(n));
    const double logkn = std::log(static_cast<double>(kappa) * n);
    return AsymptoticGains{
        (kappa - 1.0) * logn - std::log(static_cast<double>(kappa)),
        kappa * static_cast<double>(n) * (1.0 / logn - 1.0 / logkn),
    };
}

AsymptoticRanks asymptotic_ranks(std::uint32_t n, std::uint32_t kappa) {
    if (kappa == 0) throw DomainError("asymptotic ranks: kappa must be positive");
    if (n < 2) throw DomainError("asymptotic ranks: n must be at least 2 (log 1 = 0)");
    const double logn = std::log(static_cast<double>(n));
    const double kn = static_cast<double>(kappa) * n;
    const double logkn = std::log(kn);
    return AsymptoticRanks{logkn, kn / logkn, kappa * logn, kappa * n / logn};
}

double rank_blowup_factor(std::uint32_t n, std::uint32_t kappa) {
    if (n == 0 || kappa == 0) throw DomainError("rank blow-up: n and kappa must be positive");
    return (static_cast<double>(kappa) * n + 1.0) / (static_cast<double>(n) + 1.0);
}

LossSummary loss_summary(const ExtendedMarket& market, const HurtPartition& partition,
                         const std::vector<Matching>& community_matchings,
                         const Matching& society_matching) {
    if (community_matchings.size() != market.kappa())
        throw InvalidArgument("loss summary: need one matching per community");

    std::vector<double> loss[2], post_rank[2], received[2];
    for (const AgentId& id : partition.worse) {
        const std::uint32_t flat = market.flat(id);
        const auto before = community_matchings[id.community].partner_flat(id.side, flat);
        const auto after = society_matching.partner_flat(id.side, flat);
        if (!before || !after)
            throw UnmatchedAgentError("loss summary: " + to_string(id) + " is unmatched");
        const auto pos = [&](std::uint32_t partner) {
            return static_cast<double>(market.preferences().position(id.side, flat, partner)) + 1;
        };
        const int s = static_cast<int>(id.side);
        loss[s].push_back(pos(*after) - pos(*before));
        post_rank[s].push_back(pos(*after));
        // The hurt agent's own standing: mean 1-based position in every
        // opposite-side list.
        const Side other = opposite(id.side);
        std::uint64_t sum = 0;
        for (std::uint32_t b = 0; b < market.side_count(other); ++b)
            sum += market.preferences().position(other, b, flat) + 1;
        received[s].push_back(static_cast<double>(sum) / market.side_count(other));
    }

    const auto mean_of = [](const std::vector<double>& v) -> std::optional<double> {
        if (v.empty()) return std::nullopt;
        return pairwise_sum(v) / static_cast<double>(v.size());
    };
    const int m = static_cast<int>(Side::Man), w = static_cast<int>(Side::Woman);
    return LossSummary{mean_of(loss[m]),      mean_of(loss[w]),     mean_of(post_rank[m]),
                       mean_of(post_rank[w]), mean_of(received[m]), mean_of(received[w])};
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 16) {
        double sum = 0;
        for (const double v : values) sum += v;
        return sum;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanAndDispersion summarize(std::span<const double> values) {
    MeanAndDispersion out;
    out.count = values.size();
    if (out.count == 0) return out;
    out.mean = pairwise_sum(values) / static_cast<double>(out.count);
    if (out.count == 1) return out;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - out.mean;
        sq[i] = d * d;
    }
    out.sd = std::sqrt(pairwise_sum(sq) / static_cast<double>(out.count - 1));
    out.sem = out.sd / std::sqrt(static_cast<double>(out.count));
    return out;
}

} // namespace integra
