#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "integra/market.hpp"

namespace integra {

/** Parameters of one random market draw: kappa communities with n men and
 * n women each. When `correlation` is set, every preference list is a
 * perturbation of a side-wide status-quo order (see generate_correlated).
 */
struct MarketSpec {
    std::uint32_t n = 1;
    std::uint32_t kappa = 1;
    std::optional<double> correlation; // rho in [0, 1)
    std::uint64_t seed = 0;
};

/** The RNG contract: every draw is a pure function of a 64-bit seed fed to
 * std::mt19937_64, with bounded integers taken by rejection from the raw
 * 64-bit stream (no std::uniform_int_distribution, whose output is
 * implementation-defined). Golden digests in the tests pin the byte-level
 * output of the generators.
 */
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound), platform-stable.
std::uint64_t bounded(Rng& rng, std::uint64_t bound);

/// Uniform random permutation of {0, ..., size-1} (Fisher-Yates).
std::vector<std::uint32_t> random_permutation(Rng& rng, std::uint32_t size);

/** The per-run seed of run `run` of cell `cell` under `master_seed`:
 * seed = mix(mix(mix(master) ^ cell) ^ run) with the splitmix64 finalizer
 * as mix(). Workers never share generator state.
 */
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t run);

/// splitmix64 finalizer (bijective 64-bit mix).
std::uint64_t mix64(std::uint64_t x);

/** Every agent's list drawn independently and uniformly over the whole
 * opposite side of the society. Deterministic in spec.seed; requires
 * spec.correlation to be absent.
 */
ExtendedMarket generate_uniform(const MarketSpec& spec);

/** The swap budget for correlation rho over a side of `side_size` agents:
 * round((1 - rho) * side_size), decremented to even. The realized expected
 * rank correlation against the status quo is 1 - c/(side_size - 1).
 */
std::uint32_t realized_swap_budget(double rho, std::uint32_t side_size);

struct CorrelatedDraw {
    ExtendedMarket market;
    /// Status-quo orders the lists were perturbed from (partners, most
    /// preferred first): what men's lists derive from, then women's.
    std::vector<std::uint32_t> status_quo_over_women;
    std::vector<std::uint32_t> status_quo_over_men;
    std::uint32_t swap_budget = 0; // realized c
};

/** Correlated preferences: one uniform status-quo order per side, then each
 * agent applies c/2 transpositions at distinct uniformly chosen positions,
 * so each list differs from its status quo in exactly c positions (c = the
 * realized swap budget). Requires spec.correlation to be present.
 */
CorrelatedDraw generate_correlated_detailed(const MarketSpec& spec);
ExtendedMarket generate_correlated(const MarketSpec& spec);

/// Dispatches on spec.correlation.
ExtendedMarket generate_market(const MarketSpec& spec);

/** Spearman rank correlation between two orders over the same partner set:
 * 1 - 6*sum(d^2)/(N(N^2-1)) with d the per-partner position differences.
 * Returns 1.0 for single-entry lists.
 */
double spearman(const std::vector<std::uint32_t>& order_a, const std::vector<std::uint32_t>& order_b);

/// Mean Spearman correlation of every agent's list against its side's status quo.
double mean_spearman_vs_status_quo(const CorrelatedDraw& draw);

} // namespace integra
