#pragma once

#include <optional>
#include <span>
#include <vector>

#include "integra/deferred_acceptance.hpp"
#include "integra/market.hpp"
#include "integra/properties.hpp"

namespace integra {

/** Welfare effects of merging all communities, measured on the man-optimal
 * stable matchings before and after. Ranks are absolute (over the whole
 * society); a higher rank is a less desired partner, so positive gains mean
 * integration helps.
 */
struct IntegrationStats {
    double gamma_m = 0; ///< men's mean rank before minus after
    double gamma_w = 0;
    double frac_worse = 0;           ///< |worse| / society size, <= 1/2 on stable schemes
    double frac_worse_men_share = 0; ///< men's share of the hurt set (0 when empty)
    double frac_worse_women_share = 0;
    std::optional<double> mean_loss_men; ///< mean rank drop among hurt men; absent if none hurt
    std::optional<double> mean_loss_women;
    double expected_rank_men = 0; ///< post-integration absolute average rank, all men
    double expected_rank_women = 0;
};

/// Everything one integration experiment produces on a single instance.
struct IntegrationOutcome {
    std::vector<DeferredAcceptanceResult> per_community; // index = community
    DeferredAcceptanceResult society;
    HurtPartition partition;
    IntegrationStats stats;
};

/** Runs the MOSM on every single community and on the whole society and
 * derives the integration statistics. Every community must be balanced
 * (n men and n women), which keeps all agents matched throughout.
 */
IntegrationOutcome integrate_with_mosm(const ExtendedMarket& market);
IntegrationStats gains_from_integration(const ExtendedMarket& market);

/** Closed-form large-market approximations of the expected gains:
 * men  ~ log(n^(kappa-1) / kappa) = (kappa-1) log n - log kappa,
 * women ~ kappa n (1/log n - 1/log(kappa n)).
 * Natural logarithms; n >= 2 keeps both denominators positive.
 */
struct AsymptoticGains {
    double gamma_m = 0;
    double gamma_w = 0;
};
AsymptoticGains asymptotic_gains(std::uint32_t n, std::uint32_t kappa);

/** Expected absolute average ranks under the MOSM:
 * post-integration men ~ log(kappa n), women ~ kappa n / log(kappa n);
 * pre-integration men ~ kappa log n, women ~ kappa n / log n (the
 * within-community ranks blown up onto the society-wide list).
 */
struct AsymptoticRanks {
    double rank_m_society = 0;
    double rank_w_society = 0;
    double rank_m_community_abs = 0;
    double rank_w_community_abs = 0;
};
AsymptoticRanks asymptotic_ranks(std::uint32_t n, std::uint32_t kappa);

/** Exact finite-n factor taking a within-community rank q to its expected
 * society-wide rank q * (kappa n + 1)/(n + 1), which tends to q * kappa.
 */
double rank_blowup_factor(std::uint32_t n, std::uint32_t kappa);

/** Statistics over the agents hurt by integration, by gender. Means are
 * absent when the gender's hurt set is empty, never reported as zero.
 *
 * `hurt_rank_received_*` is the hurt agents' own mean position in the
 * opposite side's preference lists; for uniform preferences its expectation
 * is (society side + 1)/2 regardless of the hurt set.
 */
struct LossSummary {
    std::optional<double> mean_loss_men; ///< mean of rank(after) - rank(before), hurt men
    std::optional<double> mean_loss_women;
    std::optional<double> hurt_post_rank_men; ///< mean post-integration rank among hurt men
    std::optional<double> hurt_post_rank_women;
    std::optional<double> hurt_rank_received_men;
    std::optional<double> hurt_rank_received_women;
};

LossSummary loss_summary(const ExtendedMarket& market, const HurtPartition& partition,
                         const std::vector<Matching>& community_matchings,
                         const Matching& society_matching);

/** Pairwise (cascade) summation; the documented order-insensitive way every
 * aggregate in this project folds doubles.
 */
double pairwise_sum(std::span<const double> values);

struct MeanAndDispersion {
    double mean = 0;
    double sd = 0;  ///< per-value standard deviation (n-1 in the denominator)
    double sem = 0; ///< standard error of the mean
    std::size_t count = 0;
};
MeanAndDispersion summarize(std::span<const double> values);

} // namespace integra
