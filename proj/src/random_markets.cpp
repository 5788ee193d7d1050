#include "integra/random_markets.hpp"

#include <cmath>
#include <numeric>

namespace integra {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t run) {
    return mix64(mix64(mix64(master_seed) ^ cell) ^ run);
}

std::uint64_t bounded(Rng& rng, std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("bounded: bound must be positive");
    // Rejection sampling on the top of the range keeps the draw unbiased and
    // identical on every platform.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

std::vector<std::uint32_t> random_permutation(Rng& rng, std::uint32_t size) {
    std::vector<std::uint32_t> p(size);
    std::iota(p.begin(), p.end(), 0u);
    for (std::uint32_t i = size; i > 1; --i)
        std::swap(p[i - 1], p[bounded(rng, i)]);
    return p;
}

namespace {

std::vector<Community> balanced_communities(const MarketSpec& spec) {
    if (spec.n == 0 || spec.kappa == 0)
        throw InvalidArgument("market spec: n and kappa must be positive");
    return std::vector<Community>(spec.kappa, Community{spec.n, spec.n});
}

} // namespace

ExtendedMarket generate_uniform(const MarketSpec& spec) {
    if (spec.correlation)
        throw InvalidArgument("generate_uniform: spec carries a correlation parameter");
    auto communities = balanced_communities(spec);
    const std::uint32_t side = spec.n * spec.kappa;
    Rng rng(spec.seed);
    std::vector<std::vector<std::uint32_t>> men(side), women(side);
    for (auto& list : men) list = random_permutation(rng, side);
    for (auto& list : women) list = random_permutation(rng, side);
    return ExtendedMarket(std::move(communities),
                          PreferenceProfile(std::move(men), std::move(women)));
}

std::uint32_t realized_swap_budget(double rho, std::uint32_t side_size) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw InvalidArgument("swap budget: correlation must lie in [0, 1)");
    auto c = static_cast<std::uint32_t>(std::llround((1.0 - rho) * side_size));
    if (c > side_size) c = side_size;
    if (c % 2 == 1) --c;
    return c;
}

CorrelatedDraw generate_correlated_detailed(const MarketSpec& spec) {
    if (!spec.correlation)
        throw InvalidArgument("generate_correlated: spec lacks a correlation parameter");
    auto communities = balanced_communities(spec);
    const std::uint32_t side = spec.n * spec.kappa;
    const std::uint32_t c = realized_swap_budget(*spec.correlation, side);
    Rng rng(spec.seed);

    const auto perturbed_lists = [&](const std::vector<std::uint32_t>& status_quo) {
        std::vector<std::vector<std::uint32_t>> lists(side);
        std::vector<std::uint32_t> positions(side);
        for (auto& list : lists) {
            list = status_quo;
            // Partial Fisher-Yates: the first c entries of `positions` are a
            // uniform ordered sample of distinct positions; consecutive entries
            // pair into c/2 disjoint transpositions.
            std::iota(positions.begin(), positions.end(), 0u);
            for (std::uint32_t i = 0; i < c; ++i)
                std::swap(positions[i], positions[i + bounded(rng, side - i)]);
            for (std::uint32_t i = 0; i + 1 < c; i += 2)
                std::swap(list[positions[i]], list[positions[i + 1]]);
        }
        return lists;
    };

    std::vector<std::uint32_t> sq_women = random_permutation(rng, side);
    auto men = perturbed_lists(sq_women);
    std::vector<std::uint32_t> sq_men = random_permutation(rng, side);
    auto women = perturbed_lists(sq_men);
    ExtendedMarket market(std::move(communities),
                          PreferenceProfile(std::move(men), std::move(women)));
    return CorrelatedDraw{std::move(market), std::move(sq_women), std::move(sq_men), c};
}

ExtendedMarket generate_correlated(const MarketSpec& spec) {
    return generate_correlated_detailed(spec).market;
}

ExtendedMarket generate_market(const MarketSpec& spec) {
    return spec.correlation ? generate_correlated(spec) : generate_uniform(spec);
}

double spearman(const std::vector<std::uint32_t>& order_a,
                const std::vector<std::uint32_t>& order_b) {
    if (order_a.size() != order_b.size())
        throw InvalidArgument("spearman: orders have different lengths");
    const std::size_t size = order_a.size();
    if (size <= 1) return 1.0;
    std::vector<std::uint32_t> pos_b(size);
    for (std::uint32_t i = 0; i < size; ++i) pos_b[order_b[i]] = i;
    double sum_d2 = 0;
    for (std::uint32_t i = 0; i < size; ++i) {
        const double d = static_cast<double>(i) - static_cast<double>(pos_b[order_a[i]]);
        sum_d2 += d * d;
    }
    const double nd = static_cast<double>(size);
    return 1.0 - 6.0 * sum_d2 / (nd * (nd * nd - 1.0));
}

double mean_spearman_vs_status_quo(const CorrelatedDraw& draw) {
    const ExtendedMarket& market = draw.market;
    double sum = 0;
    std::size_t count = 0;
    for (const Side side : {Side::Man, Side::Woman}) {
        const auto& sq =
            side == Side::Man ? draw.status_quo_over_women : draw.status_quo_over_men;
        for (std::uint32_t a = 0; a < market.side_count(side); ++a) {
            const auto list = market.preferences().list(side, a);
            sum += spearman(std::vector<std::uint32_t>(list.begin(), list.end()), sq);
            ++count;
        }
    }
    return count == 0 ? 1.0 : sum / static_cast<double>(count);
}

} // namespace integra
