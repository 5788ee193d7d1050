#include "integra/campaign.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace integra {

std::uint32_t default_worker_count() {
    if (const char* env = std::getenv("INTEGRA_WORKERS")) {
        const unsigned long parsed = std::strtoul(env, nullptr, 10);
        if (parsed >= 1) return static_cast<std::uint32_t>(parsed);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

RunRecord run_one(const CellSpec& cell, std::uint32_t run_index, std::uint64_t seed) {
    MarketSpec spec{cell.n, cell.kappa, cell.rho, seed};

    RunRecord rec;
    rec.n = cell.n;
    rec.kappa = cell.kappa;
    rec.rho = cell.rho;
    rec.run_index = run_index;
    rec.seed = seed;

    std::optional<CorrelatedDraw> correlated;
    if (cell.rho) {
        correlated = generate_correlated_detailed(spec);
        rec.spearman_vs_status_quo = mean_spearman_vs_status_quo(*correlated);
        rec.realized_c = correlated->swap_budget;
    }
    const ExtendedMarket market = cell.rho ? std::move(correlated->market) : generate_uniform(spec);

    const IntegrationOutcome outcome = integrate_with_mosm(market);
    rec.gamma_m = outcome.stats.gamma_m;
    rec.gamma_w = outcome.stats.gamma_w;
    rec.frac_worse = outcome.stats.frac_worse;
    rec.expected_rank_men = outcome.stats.expected_rank_men;
    rec.expected_rank_women = outcome.stats.expected_rank_women;

    const auto tally = [](const std::vector<AgentId>& agents, std::uint32_t& men,
                          std::uint32_t& women) {
        for (const AgentId& id : agents) (id.side == Side::Man ? men : women) += 1;
    };
    tally(outcome.partition.worse, rec.worse_men, rec.worse_women);
    tally(outcome.partition.better, rec.better_men, rec.better_women);
    tally(outcome.partition.same, rec.same_men, rec.same_women);

    std::vector<Matching> community_matchings;
    community_matchings.reserve(outcome.per_community.size());
    rec.community_proposals = 0;
    for (const auto& r : outcome.per_community) {
        community_matchings.push_back(r.matching);
        rec.community_proposals += r.total_proposals;
    }
    rec.society_proposals = outcome.society.total_proposals;

    const LossSummary losses =
        loss_summary(market, outcome.partition, community_matchings, outcome.society.matching);
    rec.mean_loss_men = losses.mean_loss_men;
    rec.mean_loss_women = losses.mean_loss_women;
    rec.hurt_post_rank_men = losses.hurt_post_rank_men;
    rec.hurt_post_rank_women = losses.hurt_post_rank_women;
    rec.hurt_rank_received_men = losses.hurt_rank_received_men;
    rec.hurt_rank_received_women = losses.hurt_rank_received_women;
    return rec;
}

CampaignResult run_campaign(const Campaign& campaign) {
    const std::size_t cells = campaign.grid.size();
    const std::size_t runs = campaign.runs_per_cell;
    const std::size_t total = cells * runs;
    std::vector<RunRecord> records(total);
    std::vector<std::atomic<bool>> cell_failed(cells);
    for (auto& flag : cell_failed) flag.store(false);
    std::vector<std::string> cell_errors(cells);
    std::mutex error_mutex;

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            const std::size_t cell = task / runs;
            const std::size_t run = task % runs;
            if (cell_failed[cell].load(std::memory_order_relaxed)) continue;
            try {
                records[task] =
                    run_one(campaign.grid[cell], static_cast<std::uint32_t>(run),
                            substream_seed(campaign.master_seed, cell, run));
            } catch (const std::exception& e) {
                cell_failed[cell].store(true, std::memory_order_relaxed);
                const std::lock_guard<std::mutex> lock(error_mutex);
                std::ostringstream os;
                os << "cell " << cell << " (n=" << campaign.grid[cell].n
                   << ", kappa=" << campaign.grid[cell].kappa << ", run " << run
                   << "): " << e.what();
                cell_errors[cell] = os.str();
            }
        }
    };

    std::uint32_t workers = campaign.workers == 0 ? default_worker_count() : campaign.workers;
    if (workers > total) workers = static_cast<std::uint32_t>(total == 0 ? 1 : total);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint32_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    CampaignResult result;
    result.records.reserve(total);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        if (cell_failed[cell]) {
            result.cell_errors.push_back(cell_errors[cell]);
            continue;
        }
        for (std::size_t run = 0; run < runs; ++run)
            result.records.push_back(std::move(records[cell * runs + run]));
    }
    return result;
}

// --- serialization -----------------------------------------------------------

namespace {

constexpr const char* kRecordSchema = "integra.runrecord.v1";

std::string format_double(double value) {
    char buffer[32];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

std::string opt(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

const char* const kRecordColumns =
    "n,kappa,rho,run_index,seed,frac_worse,worse_men,worse_women,better_men,better_women,"
    "same_men,same_women,gamma_m,gamma_w,mean_loss_men,mean_loss_women,hurt_post_rank_men,"
    "hurt_post_rank_women,hurt_rank_received_men,hurt_rank_received_women,expected_rank_men,"
    "expected_rank_women,society_proposals,community_proposals,spearman_vs_status_quo,"
    "realized_c";

} // namespace

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    out << "# schema: " << kRecordSchema << '\n' << kRecordColumns << '\n';
    for (const RunRecord& r : records) {
        out << r.n << ',' << r.kappa << ',' << (r.rho ? format_double(*r.rho) : "") << ','
            << r.run_index << ',' << r.seed << ',' << format_double(r.frac_worse) << ','
            << r.worse_men << ',' << r.worse_women << ',' << r.better_men << ',' << r.better_women
            << ',' << r.same_men << ',' << r.same_women << ',' << format_double(r.gamma_m) << ','
            << format_double(r.gamma_w) << ',' << opt(r.mean_loss_men) << ','
            << opt(r.mean_loss_women) << ',' << opt(r.hurt_post_rank_men) << ','
            << opt(r.hurt_post_rank_women) << ',' << opt(r.hurt_rank_received_men) << ','
            << opt(r.hurt_rank_received_women) << ',' << format_double(r.expected_rank_men) << ','
            << format_double(r.expected_rank_women) << ',' << r.society_proposals << ','
            << r.community_proposals << ',' << opt(r.spearman_vs_status_quo) << ','
            << (r.realized_c ? std::to_string(*r.realized_c) : "") << '\n';
    }
}

void write_records_json(std::ostream& out, const std::vector<RunRecord>& records) {
    for (const RunRecord& r : records) {
        nlohmann::ordered_json j;
        j["schema"] = kRecordSchema;
        j["n"] = r.n;
        j["kappa"] = r.kappa;
        if (r.rho) j["rho"] = *r.rho;
        j["run_index"] = r.run_index;
        j["seed"] = r.seed;
        j["frac_worse"] = r.frac_worse;
        j["worse_men"] = r.worse_men;
        j["worse_women"] = r.worse_women;
        j["better_men"] = r.better_men;
        j["better_women"] = r.better_women;
        j["same_men"] = r.same_men;
        j["same_women"] = r.same_women;
        j["gamma_m"] = r.gamma_m;
        j["gamma_w"] = r.gamma_w;
        const auto set_opt = [&j](const char* key, const std::optional<double>& v) {
            if (v) j[key] = *v;
        };
        set_opt("mean_loss_men", r.mean_loss_men);
        set_opt("mean_loss_women", r.mean_loss_women);
        set_opt("hurt_post_rank_men", r.hurt_post_rank_men);
        set_opt("hurt_post_rank_women", r.hurt_post_rank_women);
        set_opt("hurt_rank_received_men", r.hurt_rank_received_men);
        set_opt("hurt_rank_received_women", r.hurt_rank_received_women);
        j["expected_rank_men"] = r.expected_rank_men;
        j["expected_rank_women"] = r.expected_rank_women;
        j["society_proposals"] = r.society_proposals;
        j["community_proposals"] = r.community_proposals;
        set_opt("spearman_vs_status_quo", r.spearman_vs_status_quo);
        if (r.realized_c) j["realized_c"] = *r.realized_c;
        out << j.dump() << '\n';
    }
}

void write_records_file(const std::string& path, const std::vector<RunRecord>& records,
                        OutputFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    format == OutputFormat::Csv ? write_records_csv(out, records)
                                : write_records_json(out, records);
    if (!out) throw Error("write failed for '" + path + "'");
}

// --- aggregation -------------------------------------------------------------

namespace {

MeanAndDispersion summarize_opt(const std::vector<RunRecord>& records,
                                const std::vector<std::size_t>& idx,
                                std::optional<double> RunRecord::* field) {
    std::vector<double> values;
    values.reserve(idx.size());
    for (const std::size_t i : idx)
        if (records[i].*field) values.push_back(*(records[i].*field));
    return summarize(values);
}

MeanAndDispersion summarize_field(const std::vector<RunRecord>& records,
                                  const std::vector<std::size_t>& idx,
                                  double RunRecord::* field) {
    std::vector<double> values;
    values.reserve(idx.size());
    for (const std::size_t i : idx) values.push_back(records[i].*field);
    return summarize(values);
}

} // namespace

std::vector<CellAggregate> aggregate_records(const std::vector<RunRecord>& records) {
    std::vector<std::pair<CellSpec, std::vector<std::size_t>>> groups;
    const auto same_cell = [](const CellSpec& a, const RunRecord& r) {
        return a.n == r.n && a.kappa == r.kappa && a.rho == r.rho;
    };
    for (std::size_t i = 0; i < records.size(); ++i) {
        bool placed = false;
        for (auto& [cell, idx] : groups)
            if (same_cell(cell, records[i])) {
                idx.push_back(i);
                placed = true;
                break;
            }
        if (!placed) groups.push_back({CellSpec{records[i].n, records[i].kappa, records[i].rho},
                                       std::vector<std::size_t>{i}});
    }

    std::vector<CellAggregate> out;
    out.reserve(groups.size());
    for (const auto& [cell, idx] : groups) {
        CellAggregate agg;
        agg.cell = cell;
        agg.runs = static_cast<std::uint32_t>(idx.size());
        agg.frac_worse = summarize_field(records, idx, &RunRecord::frac_worse);
        std::uint64_t hurt_men = 0, hurt_women = 0;
        for (const std::size_t i : idx) {
            hurt_men += records[i].worse_men;
            hurt_women += records[i].worse_women;
        }
        if (hurt_men + hurt_women > 0) {
            agg.hurt_men_share =
                static_cast<double>(hurt_men) / static_cast<double>(hurt_men + hurt_women);
            agg.hurt_women_share = 1.0 - agg.hurt_men_share;
        }
        agg.gamma_m = summarize_field(records, idx, &RunRecord::gamma_m);
        agg.gamma_w = summarize_field(records, idx, &RunRecord::gamma_w);
        agg.mean_loss_men = summarize_opt(records, idx, &RunRecord::mean_loss_men);
        agg.mean_loss_women = summarize_opt(records, idx, &RunRecord::mean_loss_women);
        agg.hurt_post_rank_men = summarize_opt(records, idx, &RunRecord::hurt_post_rank_men);
        agg.hurt_post_rank_women = summarize_opt(records, idx, &RunRecord::hurt_post_rank_women);
        agg.hurt_rank_received_men =
            summarize_opt(records, idx, &RunRecord::hurt_rank_received_men);
        agg.hurt_rank_received_women =
            summarize_opt(records, idx, &RunRecord::hurt_rank_received_women);
        agg.expected_rank_men = summarize_field(records, idx, &RunRecord::expected_rank_men);
        agg.expected_rank_women = summarize_field(records, idx, &RunRecord::expected_rank_women);
        {
            std::vector<double> proposals;
            proposals.reserve(idx.size());
            for (const std::size_t i : idx)
                proposals.push_back(static_cast<double>(records[i].society_proposals));
            agg.society_proposals = summarize(proposals);
        }
        agg.spearman = summarize_opt(records, idx, &RunRecord::spearman_vs_status_quo);
        for (const std::size_t i : idx)
            if (records[i].realized_c) {
                agg.realized_c = records[i].realized_c;
                break;
            }
        out.push_back(std::move(agg));
    }
    return out;
}

namespace {

void emit_dispersion(std::ostream& out, const MeanAndDispersion& m) {
    out << ',' << format_double(m.mean) << ',' << format_double(m.sd) << ','
        << format_double(m.sem);
}

} // namespace

void write_table_fractions_csv(std::ostream& out, const std::vector<CellAggregate>& cells) {
    out << "# schema: integra.table.fractions.v1\n";
    out << "n,kappa,runs,pct_worse_mean,pct_worse_sd,pct_worse_sem,hurt_men_share_pct,"
           "hurt_women_share_pct\n";
    for (const CellAggregate& c : cells) {
        out << c.cell.n << ',' << c.cell.kappa << ',' << c.runs << ','
            << format_double(100.0 * c.frac_worse.mean) << ','
            << format_double(100.0 * c.frac_worse.sd) << ','
            << format_double(100.0 * c.frac_worse.sem) << ','
            << format_double(100.0 * c.hurt_men_share) << ','
            << format_double(100.0 * c.hurt_women_share) << '\n';
    }
}

void write_table_losses_csv(std::ostream& out, const std::vector<CellAggregate>& cells) {
    out << "# schema: integra.table.losses.v1\n";
    out << "n,kappa,runs,loss_men_mean,loss_men_sd,loss_men_sem,loss_women_mean,loss_women_sd,"
           "loss_women_sem\n";
    for (const CellAggregate& c : cells) {
        out << c.cell.n << ',' << c.cell.kappa << ',' << c.runs;
        emit_dispersion(out, c.mean_loss_men);
        emit_dispersion(out, c.mean_loss_women);
        out << '\n';
    }
}

void write_table_correlated_csv(std::ostream& out, const std::vector<CellAggregate>& cells) {
    out << "# schema: integra.table.correlated.v1\n";
    out << "rho,n,kappa,runs,realized_c,spearman_mean,pct_worse_mean,pct_worse_sd,pct_worse_sem,"
           "rank_received_hurt_men_mean,rank_received_hurt_men_sd,rank_received_hurt_men_sem,"
           "rank_received_hurt_women_mean,rank_received_hurt_women_sd,"
           "rank_received_hurt_women_sem,post_rank_hurt_men_mean,post_rank_hurt_men_sd,"
           "post_rank_hurt_men_sem,post_rank_hurt_women_mean,post_rank_hurt_women_sd,"
           "post_rank_hurt_women_sem,loss_men_mean,loss_men_sd,loss_men_sem,loss_women_mean,"
           "loss_women_sd,loss_women_sem\n";
    for (const CellAggregate& c : cells) {
        out << (c.cell.rho ? format_double(*c.cell.rho) : "0") << ',' << c.cell.n << ','
            << c.cell.kappa << ',' << c.runs << ','
            << (c.realized_c ? std::to_string(*c.realized_c) : "0") << ','
            << (c.spearman.count > 0 ? format_double(c.spearman.mean) : "");
        out << ',' << format_double(100.0 * c.frac_worse.mean) << ','
            << format_double(100.0 * c.frac_worse.sd) << ','
            << format_double(100.0 * c.frac_worse.sem);
        emit_dispersion(out, c.hurt_rank_received_men);
        emit_dispersion(out, c.hurt_rank_received_women);
        emit_dispersion(out, c.hurt_post_rank_men);
        emit_dispersion(out, c.hurt_post_rank_women);
        emit_dispersion(out, c.mean_loss_men);
        emit_dispersion(out, c.mean_loss_women);
        out << '\n';
    }
}

void write_gain_curve_csv(std::ostream& out, const std::vector<CellAggregate>& cells) {
    out << "# schema: integra.gaincurve.v1\n";
    out << "kappa,n,runs,gamma_m_sim_mean,gamma_m_sim_sd,gamma_m_sim_sem,gamma_w_sim_mean,"
           "gamma_w_sim_sd,gamma_w_sim_sem,gamma_m_formula,gamma_w_formula\n";
    for (const CellAggregate& c : cells) {
        const AsymptoticGains formula = asymptotic_gains(c.cell.n, c.cell.kappa);
        out << c.cell.kappa << ',' << c.cell.n << ',' << c.runs;
        emit_dispersion(out, c.gamma_m);
        emit_dispersion(out, c.gamma_w);
        out << ',' << format_double(formula.gamma_m) << ',' << format_double(formula.gamma_w)
            << '\n';
    }
}

} // namespace integra
