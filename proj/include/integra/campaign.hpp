#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "integra/analytics.hpp"
#include "integra/random_markets.hpp"

namespace integra {

/// One point of a campaign grid.
struct CellSpec {
    std::uint32_t n = 1;
    std::uint32_t kappa = 1;
    std::optional<double> rho;
};

enum class OutputFormat : std::uint8_t { Csv, Json };

/** A Monte Carlo campaign: `runs_per_cell` integration experiments per grid
 * cell, each drawn from the substream seed of (master_seed, cell, run).
 * Records come back in (cell, run) order whatever the worker count.
 */
struct Campaign {
    std::vector<CellSpec> grid;
    std::uint32_t runs_per_cell = 1000;
    std::uint64_t master_seed = 0;
    std::uint32_t workers = 0; ///< 0 = default_worker_count()
};

/// INTEGRA_WORKERS when set, hardware concurrency otherwise (at least 1).
std::uint32_t default_worker_count();

/** One run's complete statistics. Scalar fields mirror IntegrationStats and
 * LossSummary; the schema is integra.runrecord.v1 (documented in the README
 * column by column).
 */
struct RunRecord {
    // cell identity
    std::uint32_t n = 0;
    std::uint32_t kappa = 0;
    std::optional<double> rho;
    std::uint32_t run_index = 0;
    std::uint64_t seed = 0;
    // gains and hurt-set statistics
    double gamma_m = 0, gamma_w = 0;
    double frac_worse = 0;
    std::uint32_t worse_men = 0, worse_women = 0;
    std::uint32_t better_men = 0, better_women = 0;
    std::uint32_t same_men = 0, same_women = 0;
    std::optional<double> mean_loss_men, mean_loss_women;
    std::optional<double> hurt_post_rank_men, hurt_post_rank_women;
    std::optional<double> hurt_rank_received_men, hurt_rank_received_women;
    double expected_rank_men = 0, expected_rank_women = 0;
    // proposal counts: society run, and summed over the community runs
    std::uint64_t society_proposals = 0;
    std::uint64_t community_proposals = 0;
    // correlated draws only
    std::optional<double> spearman_vs_status_quo;
    std::optional<std::uint32_t> realized_c;
};

/// Statistics of a single instance, as recorded by campaign workers.
RunRecord run_one(const CellSpec& cell, std::uint32_t run_index, std::uint64_t seed);

/** Runs the whole campaign on a fixed-size worker pool. A failing run aborts
 * its cell (the cell's records are dropped and the failure is reported in
 * `cell_errors`), not the campaign.
 */
struct CampaignResult {
    std::vector<RunRecord> records; ///< (cell, run) order
    std::vector<std::string> cell_errors;
};
CampaignResult run_campaign(const Campaign& campaign);

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_records_json(std::ostream& out, const std::vector<RunRecord>& records);
void write_records_file(const std::string& path, const std::vector<RunRecord>& records,
                        OutputFormat format);

/// Per-cell aggregate of every numeric RunRecord column.
struct CellAggregate {
    CellSpec cell;
    std::uint32_t runs = 0;
    MeanAndDispersion frac_worse;
    double hurt_men_share = 0; ///< men's share of all hurt agents pooled over runs
    double hurt_women_share = 0;
    MeanAndDispersion gamma_m, gamma_w;
    MeanAndDispersion mean_loss_men, mean_loss_women;
    MeanAndDispersion hurt_post_rank_men, hurt_post_rank_women;
    MeanAndDispersion hurt_rank_received_men, hurt_rank_received_women;
    MeanAndDispersion expected_rank_men, expected_rank_women;
    MeanAndDispersion society_proposals;
    MeanAndDispersion spearman;
    std::optional<std::uint32_t> realized_c;
};

/// Aggregates records cell by cell, in first-appearance order.
std::vector<CellAggregate> aggregate_records(const std::vector<RunRecord>& records);

// Aggregate table emitters. Column sets are fixed per table and documented
// in the README; every mean column is accompanied by sd and sem columns.
void write_table_fractions_csv(std::ostream& out, const std::vector<CellAggregate>& cells);
void write_table_losses_csv(std::ostream& out, const std::vector<CellAggregate>& cells);
void write_table_correlated_csv(std::ostream& out, const std::vector<CellAggregate>& cells);
void write_gain_curve_csv(std::ostream& out, const std::vector<CellAggregate>& cells);

} // namespace integra
