#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "integra/campaign.hpp"

using namespace integra;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& name) : path("integra_test_" + name) {}
    ~TempPath() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("campaign records are identical for any worker count") {
    Campaign campaign;
    campaign.grid = {CellSpec{4, 2, std::nullopt}, CellSpec{3, 2, 0.5}};
    campaign.runs_per_cell = 12;
    campaign.master_seed = 99;

    TempPath a("1worker.csv"), b("4workers.csv");
    campaign.workers = 1;
    write_records_file(a.path, run_campaign(campaign).records, OutputFormat::Csv);
    campaign.workers = 4;
    write_records_file(b.path, run_campaign(campaign).records, OutputFormat::Csv);
    CHECK(slurp(a.path) == slurp(b.path));
}

TEST_CASE("one record per (cell, run), in order, with the substream seed") {
    Campaign campaign;
    campaign.grid = {CellSpec{2, 2, std::nullopt}, CellSpec{2, 1, std::nullopt}};
    campaign.runs_per_cell = 5;
    campaign.master_seed = 3;
    campaign.workers = 2;
    const CampaignResult result = run_campaign(campaign);
    CHECK(result.cell_errors.empty());
    REQUIRE(result.records.size() == 10);
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const RunRecord& r = result.records[i];
        CHECK(r.run_index == i % 5);
        CHECK(r.seed == substream_seed(3, i / 5, i % 5));
        CHECK(r.n == (i < 5 ? 2u : 2u));
        CHECK(r.kappa == (i < 5 ? 2u : 1u));
    }
}

TEST_CASE("run_one fills the hurt-set tallies consistently") {
    const RunRecord r = run_one(CellSpec{5, 3, std::nullopt}, 0, 1234);
    const std::uint32_t society = 2 * 5 * 3;
    CHECK(r.worse_men + r.worse_women + r.better_men + r.better_women + r.same_men +
              r.same_women ==
          society);
    CHECK(r.frac_worse ==
          doctest::Approx(static_cast<double>(r.worse_men + r.worse_women) / society));
    CHECK(r.frac_worse <= 0.5);
    CHECK(!r.spearman_vs_status_quo.has_value());
    CHECK(!r.realized_c.has_value());
    CHECK(r.community_proposals >= 5 * 3); // at least one proposal per man
}

TEST_CASE("correlated cells carry spearman and the realized budget") {
    const RunRecord r = run_one(CellSpec{10, 2, 0.5}, 0, 77);
    REQUIRE(r.spearman_vs_status_quo.has_value());
    REQUIRE(r.realized_c.has_value());
    CHECK(*r.realized_c == 10);
    CHECK(*r.spearman_vs_status_quo == doctest::Approx(1.0 - 10.0 / 19.0).epsilon(0.2));
}

TEST_CASE("aggregates recompute exactly from the records") {
    Campaign campaign;
    campaign.grid = {CellSpec{3, 2, std::nullopt}};
    campaign.runs_per_cell = 50;
    campaign.master_seed = 11;
    const auto records = run_campaign(campaign).records;
    const auto aggregates = aggregate_records(records);
    REQUIRE(aggregates.size() == 1);
    const CellAggregate& agg = aggregates[0];
    CHECK(agg.runs == 50);

    std::vector<double> fracs;
    for (const auto& r : records) fracs.push_back(r.frac_worse);
    const MeanAndDispersion check = summarize(fracs);
    CHECK(agg.frac_worse.mean == check.mean);
    CHECK(agg.frac_worse.sd == check.sd);
    CHECK(agg.frac_worse.sem == check.sem);

    std::uint64_t hurt_men = 0, hurt_women = 0;
    for (const auto& r : records) {
        hurt_men += r.worse_men;
        hurt_women += r.worse_women;
    }
    if (hurt_men + hurt_women > 0)
        CHECK(agg.hurt_men_share ==
              doctest::Approx(static_cast<double>(hurt_men) / (hurt_men + hurt_women)));
}

TEST_CASE("csv and json record emission fit their schemas") {
    Campaign campaign;
    campaign.grid = {CellSpec{2, 2, 0.3}};
    campaign.runs_per_cell = 3;
    const auto records = run_campaign(campaign).records;

    std::ostringstream csv;
    write_records_csv(csv, records);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "# schema: integra.runrecord.v1");
    std::getline(lines, line);
    CHECK(line.substr(0, 8) == "n,kappa,");
    std::size_t rows = 0, commas = std::count(line.begin(), line.end(), ',');
    while (std::getline(lines, line)) {
        CHECK(static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) == commas);
        ++rows;
    }
    CHECK(rows == 3);

    std::ostringstream json;
    write_records_json(json, records);
    std::istringstream jlines(json.str());
    rows = 0;
    while (std::getline(jlines, line)) {
        CHECK(line.find("\"schema\":\"integra.runrecord.v1\"") != std::string::npos);
        CHECK(line.find("\"realized_c\":") != std::string::npos);
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("aggregate table emitters cover every cell") {
    Campaign campaign;
    campaign.grid = {CellSpec{2, 2, std::nullopt}, CellSpec{3, 2, std::nullopt}};
    campaign.runs_per_cell = 4;
    const auto aggregates = aggregate_records(run_campaign(campaign).records);

    const auto lines_of = [](auto writer, const std::vector<CellAggregate>& cells) {
        std::ostringstream out;
        writer(out, cells);
        std::size_t lines = 0;
        std::istringstream in(out.str());
        std::string line;
        while (std::getline(in, line)) ++lines;
        return lines;
    };
    CHECK(lines_of(write_table_fractions_csv, aggregates) == 4); // schema + header + 2 cells
    CHECK(lines_of(write_table_losses_csv, aggregates) == 4);
    CHECK(lines_of(write_table_correlated_csv, aggregates) == 4);
    CHECK(lines_of(write_gain_curve_csv, aggregates) == 4);
}

TEST_CASE("default worker count honors the environment variable") {
    // Only checks the parse path; the ambient value may be unset.
    CHECK(default_worker_count() >= 1);
}
