// integra — generate, solve, and verify community-partitioned matching
// markets, and run the Monte Carlo experiment presets.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "integra/analytics.hpp"
#include "integra/campaign.hpp"
#include "integra/deferred_acceptance.hpp"
#include "integra/enumerate.hpp"
#include "integra/fixture_io.hpp"
#include "integra/golden_instances.hpp"
#include "integra/properties.hpp"
#include "integra/random_markets.hpp"

namespace {

using namespace integra;

struct CommonOptions {
    std::uint32_t n = 100;
    std::uint32_t kappa = 2;
    std::optional<double> rho;
    std::uint64_t seed = 0;
    std::uint32_t runs = 1000;
    std::uint32_t workers = 0;
    std::string out;
    std::string format = "csv";
    std::string records_path;
    std::string market_file;
};

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw Error("cannot write '" + path + "'");
    return file;
}

OutputFormat parse_format(const std::string& format) {
    if (format == "csv") return OutputFormat::Csv;
    if (format == "json") return OutputFormat::Json;
    throw InvalidArgument("unknown format '" + format + "' (use csv or json)");
}

ExtendedMarket load_or_generate(const CommonOptions& opt) {
    if (!opt.market_file.empty()) return read_market_file(opt.market_file);
    return generate_market(MarketSpec{opt.n, opt.kappa, opt.rho, opt.seed});
}

void emit_campaign(const CommonOptions& opt, const Campaign& campaign,
                   void (*writer)(std::ostream&, const std::vector<CellAggregate>&)) {
    const CampaignResult result = run_campaign(campaign);
    for (const std::string& error : result.cell_errors) std::cerr << "cell failed: " << error << '\n';
    if (!opt.records_path.empty())
        write_records_file(opt.records_path, result.records, parse_format(opt.format));
    const auto aggregates = aggregate_records(result.records);
    std::ofstream file;
    std::ostream& out = open_output(file, opt.out);
    writer(out, aggregates);
    if (!result.cell_errors.empty()) throw Error("one or more cells failed");
}

int run_gen(const CommonOptions& opt) {
    const ExtendedMarket market = generate_market(MarketSpec{opt.n, opt.kappa, opt.rho, opt.seed});
    std::ofstream file;
    write_market(open_output(file, opt.out), market);
    return 0;
}

int run_solve(const CommonOptions& opt, const std::vector<std::uint32_t>& population_communities) {
    const ExtendedMarket market = load_or_generate(opt);
    Population population = market.society();
    if (!population_communities.empty()) {
        std::uint64_t mask = 0;
        for (const auto c : population_communities) {
            if (c >= market.kappa()) throw InvalidArgument("--population: community out of range");
            mask |= 1ull << c;
        }
        population = Population(market.kappa(), mask);
    }
    const DeferredAcceptanceResult result = man_optimal_stable_matching(market, population);

    std::ofstream file;
    std::ostream& out = open_output(file, opt.out);
    if (parse_format(opt.format) == OutputFormat::Json) {
        nlohmann::ordered_json j;
        j["population"] = population.communities();
        auto& pairs = j["pairs"] = nlohmann::json::array();
        for (const auto& [m, w] : result.matching.pairs()) {
            const AgentId mid = market.agent(Side::Man, m);
            const AgentId wid = market.agent(Side::Woman, w);
            pairs.push_back({{"man", to_string(mid)},
                             {"woman", to_string(wid)},
                             {"man_rank", absolute_rank(market, mid, wid)},
                             {"woman_rank", absolute_rank(market, wid, mid)}});
        }
        j["total_proposals"] = result.total_proposals;
        if (result.matching.complete_on(market)) {
            j["avg_rank_men"] = average_rank(market, result.matching, Side::Man, RankMode::Absolute);
            j["avg_rank_women"] =
                average_rank(market, result.matching, Side::Woman, RankMode::Absolute);
        }
        out << j.dump(2) << '\n';
        return 0;
    }
    for (const auto& [m, w] : result.matching.pairs()) {
        const AgentId mid = market.agent(Side::Man, m);
        const AgentId wid = market.agent(Side::Woman, w);
        out << to_string(mid) << " -- " << to_string(wid)
            << "  (his rank " << absolute_rank(market, mid, wid) << ", her rank "
            << absolute_rank(market, wid, mid) << ")\n";
    }
    out << "total proposals: " << result.total_proposals << '\n';
    if (result.matching.complete_on(market)) {
        out << "men's average rank: "
            << average_rank(market, result.matching, Side::Man, RankMode::Absolute) << '\n'
            << "women's average rank: "
            << average_rank(market, result.matching, Side::Woman, RankMode::Absolute) << '\n';
    }
    return 0;
}

int run_verify(const CommonOptions& opt) {
    const ExtendedMarket market = load_or_generate(opt);
    nlohmann::ordered_json j;
    j["kappa"] = market.kappa();
    j["men"] = market.side_count(Side::Man);
    j["women"] = market.side_count(Side::Woman);

    bool balanced = true;
    for (const auto& c : market.communities())
        if (c.men_count != c.women_count) balanced = false;

    // Stability of the MOSM on every single community and on the society.
    bool stable = true;
    std::vector<Matching> community_matchings;
    for (std::uint32_t c = 0; c < market.kappa(); ++c) {
        const auto r =
            man_optimal_stable_matching(market, Population::single(market.kappa(), c));
        if (find_blocking_pair(market, r.matching)) stable = false;
        community_matchings.push_back(r.matching);
    }
    const auto society = man_optimal_stable_matching(market, market.society());
    if (find_blocking_pair(market, society.matching)) stable = false;
    j["mosm_stable"] = stable;
    j["society_proposals"] = society.total_proposals;

    if (balanced) {
        const HurtPartition partition =
            hurt_partition(market, community_matchings, society.matching);
        j["frac_worse"] = partition.fraction_worse();
        j["half_society_bound"] = half_society_bound_holds(market, partition);
        j["partner_rescue"] = partner_rescue_holds(market, community_matchings, partition);
        auto& hurt = j["hurt_agents"] = nlohmann::json::array();
        for (const AgentId& id : partition.worse) hurt.push_back(to_string(id));
    }

    if (market.kappa() <= 12) {
        const MatchingScheme scheme = stable_scheme(market);
        const MonotonicityResult wim = is_wim(market, scheme);
        j["mosm_scheme_wim"] = wim.monotonic;
        const MonotonicityResult im = is_im(market, scheme);
        j["mosm_scheme_im"] = im.monotonic;
    }
    if (market.total_agents() <= kDefaultOracleBound) {
        const auto stable_set = enumerate_stable_matchings(market, market.society());
        j["society_stable_matchings"] = stable_set.size();
        bool mosm_found = false;
        for (const auto& m : stable_set)
            if (m == society.matching) mosm_found = true;
        j["mosm_in_enumerated_stable_set"] = mosm_found;
    }

    std::ofstream file;
    std::ostream& out = open_output(file, opt.out);
    out << j.dump(2) << '\n';
    return 0;
}

Campaign grid_campaign(const CommonOptions& opt, std::vector<CellSpec> grid) {
    return Campaign{std::move(grid), opt.runs, opt.seed, opt.workers};
}

int run_table_fractions(const CommonOptions& opt, const std::vector<std::uint32_t>& ns,
                        const std::vector<std::uint32_t>& kappas, bool losses) {
    std::vector<CellSpec> grid;
    for (const auto kappa : kappas)
        for (const auto n : ns) grid.push_back(CellSpec{n, kappa, std::nullopt});
    emit_campaign(opt, grid_campaign(opt, std::move(grid)),
                  losses ? write_table_losses_csv : write_table_fractions_csv);
    return 0;
}

int run_table_correlated(const CommonOptions& opt, const std::vector<double>& rhos) {
    std::vector<CellSpec> grid;
    for (const double rho : rhos) grid.push_back(CellSpec{opt.n, opt.kappa, rho});
    emit_campaign(opt, grid_campaign(opt, std::move(grid)), write_table_correlated_csv);
    return 0;
}

int run_gain_curve(const CommonOptions& opt, const std::vector<std::uint32_t>& ns,
                   const std::vector<std::uint32_t>& kappas) {
    std::vector<CellSpec> grid;
    for (const auto kappa : kappas)
        for (const auto n : ns) grid.push_back(CellSpec{n, kappa, std::nullopt});
    emit_campaign(opt, grid_campaign(opt, std::move(grid)), write_gain_curve_csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"integra — stable matching across merging communities"};
    app.require_subcommand(1);

    CommonOptions opt;
    const auto add_market_flags = [&](CLI::App* cmd) {
        cmd->add_option("--n", opt.n, "agents per side per community");
        cmd->add_option("--kappa", opt.kappa, "number of communities");
        cmd->add_option("--rho", opt.rho, "preference correlation in [0,1)");
        cmd->add_option("--seed", opt.seed, "RNG seed");
        cmd->add_option("--out", opt.out, "output path (default stdout)");
    };
    const auto add_campaign_flags = [&](CLI::App* cmd) {
        cmd->add_option("--runs", opt.runs, "runs per cell");
        cmd->add_option("--seed", opt.seed, "campaign master seed");
        cmd->add_option("--workers", opt.workers,
                        "worker threads (0 = INTEGRA_WORKERS or hardware)");
        cmd->add_option("--out", opt.out, "aggregate CSV path (default stdout)");
        cmd->add_option("--format", opt.format, "record format: csv|json");
        cmd->add_option("--records", opt.records_path, "also write per-run records here");
    };

    auto* gen = app.add_subcommand("gen", "generate a market and print it");
    add_market_flags(gen);

    auto* solve = app.add_subcommand("solve", "man-optimal stable matching of a market");
    add_market_flags(solve);
    solve->add_option("--market-file", opt.market_file, "read the market from this file");
    solve->add_option("--format", opt.format, "output format: csv|json (text when csv)");
    std::vector<std::uint32_t> population_communities;
    solve->add_option("--population", population_communities,
                      "restrict to these communities (default: all)");

    auto* verify = app.add_subcommand("verify", "check matching-scheme properties of a market");
    add_market_flags(verify);
    verify->add_option("--market-file", opt.market_file, "read the market from this file");

    std::vector<std::uint32_t> table_ns{50, 100};
    std::vector<std::uint32_t> table_kappas{2, 3, 4, 5};
    bool full = false;
    auto* table1 = app.add_subcommand("table1", "share of society preferring segregation");
    auto* table2 = app.add_subcommand("table2", "welfare loss of the hurt agents, by gender");
    for (auto* cmd : {table1, table2}) {
        add_campaign_flags(cmd);
        cmd->add_option("--n", table_ns, "n grid");
        cmd->add_option("--kappa", table_kappas, "kappa grid");
        cmd->add_flag("--full", full, "include the n=500 column");
    }

    std::vector<double> rhos{0.0, 0.1, 0.3, 0.5, 0.7, 0.9};
    auto* table3 = app.add_subcommand("table3", "correlated-preference statistics");
    add_campaign_flags(table3);
    table3->add_option("--n", opt.n, "agents per side per community");
    table3->add_option("--kappa", opt.kappa, "number of communities");
    table3->add_option("--rho", rhos, "correlation grid");

    std::vector<std::uint32_t> curve_ns{10, 20, 40, 80, 160, 320, 500};
    std::vector<std::uint32_t> curve_kappas{2, 5};
    auto* figure1 = app.add_subcommand("figure1", "simulated vs closed-form integration gains");
    add_campaign_flags(figure1);
    figure1->add_option("--n", curve_ns, "n sweep");
    figure1->add_option("--kappa", curve_kappas, "kappa values");

    try {
        CLI11_PARSE(app, argc, argv);
        if (gen->parsed()) return run_gen(opt);
        if (solve->parsed()) return run_solve(opt, population_communities);
        if (verify->parsed()) return run_verify(opt);
        if (table1->parsed() || table2->parsed()) {
            auto ns = table_ns;
            if (full && std::find(ns.begin(), ns.end(), 500u) == ns.end()) ns.push_back(500);
            return run_table_fractions(opt, ns, table_kappas, table2->parsed());
        }
        if (table3->parsed()) return run_table_correlated(opt, rhos);
        if (figure1->parsed()) return run_gain_curve(opt, curve_ns, curve_kappas);
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = e.what();
        err["type"] = "integra_error";
        std::cerr << err.dump() << '\n';
        return 1;
    }
    return 0;
}
