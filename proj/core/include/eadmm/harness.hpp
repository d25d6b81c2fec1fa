#pragma once

// Experiment runner: expands a config into (problem, algorithm, seed) cells,
// runs them, persists one record per cell and aggregates the results.
//
// Layout under <output_dir>/<experiment_id>/:
//   manifest.json
//   <problem>/<algorithm>/seed_<k>/record.json
//   <problem>/<algorithm>/seed_<k>/final_P.csv
//   <problem>/<algorithm>/seed_<k>/final_Pbar.csv
//   summary_<metric>.csv, pairwise_<metric>.csv     (summarize)
//   plots/...                                       (emit_plot_data)
//
// Doubles are written in shortest round-trip form, so reading a record back
// reproduces every value bit for bit. Non-finite values are written as the
// strings "inf", "-inf" and "nan".

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eadmm/engine.hpp"
#include "eadmm/stats.hpp"
#include "eadmm/uc_problems.hpp"

namespace eadmm {

enum class Metric { Igd, IgdPlus, Hv };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);
stats::Orientation orientation(Metric m);

struct AlgorithmSpec {
    std::string name;   // "eadmm-<backbone>" or "eadmm-<backbone>-ablated"
    EadmmConfig config; // max_fe is filled in per problem
};

// Accepts "eadmm-nsga2", "eadmm-ibea-ablated", ...
AlgorithmSpec parse_algorithm(std::string_view name);

std::uint64_t default_max_fe(std::size_t m);

struct ExperimentConfig {
    std::string experiment_id = "experiment";
    std::filesystem::path output_dir = "results";
    std::vector<std::string> problems;
    std::vector<AlgorithmSpec> algorithms;
    std::vector<std::uint64_t> seeds;
    std::map<std::size_t, std::uint64_t> max_fe_by_m;         // falls back to default_max_fe
    std::map<std::string, std::uint64_t> max_fe_by_problem;   // wins over max_fe_by_m
    std::vector<Metric> metrics{Metric::Igd, Metric::IgdPlus, Metric::Hv};
    std::size_t metric_interval = 1;  // score every k-th generation; the final one always
    std::size_t reference_size = 0;   // 0 selects default_reference_size(m)
    std::size_t workers = 1;

    std::uint64_t max_fe_for(const UcProblemSpec& spec) const;
    void validate() const;
};

// JSON document; see README for the schema.
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct CellRecord {
    std::string config_hash;
    RunRecord run;
    std::vector<bool> final_p_feasible;      // noiseless truth
    std::vector<bool> final_p_bar_feasible;
};

std::string record_to_json(const CellRecord& record);
CellRecord record_from_json(std::string_view json_text);
CellRecord read_record(const std::filesystem::path& path);

struct CellOptions {
    std::vector<Metric> metrics{Metric::Igd, Metric::IgdPlus, Metric::Hv};
    std::size_t metric_interval = 1;
    std::size_t reference_size = 0;
};

// Runs one cell and returns its record; nothing is written.
CellRecord run_cell(const UcProblemSpec& problem, const AlgorithmSpec& algorithm, std::uint64_t seed,
                    std::uint64_t max_fe, const CellOptions& options);

// Writes record.json, final_P.csv and final_Pbar.csv into `dir`.
void write_cell(const std::filesystem::path& dir, const CellRecord& record);

std::filesystem::path cell_dir(const std::filesystem::path& root, std::string_view problem, std::string_view algorithm,
                               std::uint64_t seed);

struct CellStatus {
    std::string problem;
    std::string algorithm;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
};

struct ExperimentResult {
    std::filesystem::path root;
    std::vector<CellStatus> cells;

    std::size_t failures() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

struct PairwiseRow {
    std::string problem;
    std::string a;
    std::string b;
    stats::WilcoxonResult wilcoxon;
    char marker = '=';  // '+' a better, '-' a worse, '=' no significant difference, '?' undecidable
    double a12 = 0.5;
    stats::Effect effect = stats::Effect::Negligible;
};

struct SummaryRow {
    std::string problem;
    std::string algorithm;
    std::size_t runs = 0;
    double median = 0.0;
    double iqr = 0.0;
    std::optional<int> sk_rank;  // absent when the problem has a single algorithm
};

struct SummaryTable {
    Metric metric = Metric::Igd;
    std::vector<SummaryRow> rows;
    std::vector<PairwiseRow> pairs;
};

struct SummaryOptions {
    double alpha = 0.05;
    stats::Effect min_effect = stats::Effect::Medium;
};

// Final-generation metric values: problem -> algorithm -> seed -> value.
using MetricValues = std::map<std::string, std::map<std::string, std::map<std::uint64_t, double>>>;

MetricValues collect_metric(const std::filesystem::path& results_dir, Metric metric);

// Throws std::runtime_error when algorithms on a problem ran different seeds.
SummaryTable summarize(const MetricValues& values, Metric metric, const SummaryOptions& options = {});

// Reads the records, writes summary_<metric>.csv and pairwise_<metric>.csv
// into results_dir and returns the table.
SummaryTable summarize(const std::filesystem::path& results_dir, Metric metric, const SummaryOptions& options = {});

void write_summary_csv(std::ostream& os, const SummaryTable& table);
void write_pairwise_csv(std::ostream& os, const SummaryTable& table);

enum class PlotKind { FrontScatter, RankBars, HvBars };

std::string_view to_string(PlotKind k);
PlotKind parse_plot_kind(std::string_view name);

// Seed of the run whose final IGD is the (lower) median over seeds.
std::uint64_t median_igd_seed(const std::map<std::uint64_t, double>& igd_by_seed);

// Writes files under results_dir/plots and returns their paths.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& results_dir, PlotKind kind,
                                                  const SummaryOptions& options = {});

} // namespace eadmm
