// eadmm command line: single runs, batch experiments, summaries, plot data.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "eadmm/harness.hpp"
#include "eadmm/uc_problems.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"EADMM: dual-population EMO for problems with binary unknown constraints"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a single (problem, algorithm, seed) cell");
    std::string problem;
    std::string algorithm = "eadmm-nsga2";
    std::uint64_t seed = 1;
    std::uint64_t max_fe = 0;
    std::string out = "results/single";
    run->add_option("--problem", problem, "Registry name, e.g. UC4-DTLZ2-m3")->required();
    run->add_option("--algorithm", algorithm, "eadmm-{nsga2,ibea,moead}[-ablated]")->capture_default_str();
    run->add_option("--seed", seed)->capture_default_str();
    run->add_option("--max-fe", max_fe, "Evaluation budget; 0 selects the default for m");
    run->add_option("--out", out, "Results root")->capture_default_str();

    auto* experiment = app.add_subcommand("experiment", "Run every cell of a JSON experiment config");
    std::string config_path;
    experiment->add_option("--config", config_path)->required()->check(CLI::ExistingFile);

    auto* summarize = app.add_subcommand("summarize", "Median/IQR, Wilcoxon, A12 and Scott-Knott tables");
    std::string dir;
    std::string metric = "igd";
    double alpha = 0.05;
    summarize->add_option("--dir", dir, "Experiment directory")->required();
    summarize->add_option("--metric", metric, "igd | igd_plus | hv")->capture_default_str();
    summarize->add_option("--alpha", alpha)->capture_default_str()->check(CLI::Range(0.0, 1.0));

    auto* plot = app.add_subcommand("plot-data", "Emit CSV data for figures");
    std::string kind;
    plot->add_option("--dir", dir, "Experiment directory")->required();
    plot->add_option("--kind", kind, "front-scatter | rank-bars | hv-bars")->required();

    auto* list = app.add_subcommand("list-problems", "Print every registered problem");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto spec = eadmm::parse_problem_name(problem);
            const auto algo = eadmm::parse_algorithm(algorithm);
            const auto fe = max_fe != 0 ? max_fe : eadmm::default_max_fe(spec.m);
            const auto rec = eadmm::run_cell(spec, algo, seed, fe, {});
            const auto path = eadmm::cell_dir(out, spec.name(), algo.name, seed);
            eadmm::write_cell(path, rec);
            const auto& last = rec.run.trace.back();
            fmt::print("{} {} seed {}: {} FEs, {} generations, feasible {}/{}", spec.name(), algo.name, seed,
                       rec.run.used_fe, last.generation, last.feasible_true, rec.run.final_p.size());
            if (last.scores) fmt::print(", IGD {:.6g}, HV {:.6g}", last.scores->igd, last.scores->hv);
            fmt::print("\n{}\n", path.string());
        } else if (*experiment) {
            const auto config = eadmm::load_experiment_config(config_path);
            const auto result = eadmm::run_experiment(config);
            fmt::print("{} cells, {} failed -> {}\n", result.cells.size(), result.failures(), result.root.string());
            for (const auto& c : result.cells) {
                if (!c.ok) fmt::print(stderr, "failed: {} {} seed {}: {}\n", c.problem, c.algorithm, c.seed, c.error);
            }
            return result.failures() == 0 ? 0 : 2;
        } else if (*summarize) {
            const auto table = eadmm::summarize(fs::path(dir), eadmm::parse_metric(metric), {alpha});
            eadmm::write_summary_csv(std::cout, table);
            if (!table.pairs.empty()) {
                std::cout << '\n';
                eadmm::write_pairwise_csv(std::cout, table);
            }
        } else if (*plot) {
            for (const auto& p : eadmm::emit_plot_data(fs::path(dir), eadmm::parse_plot_kind(kind))) {
                fmt::print("{}\n", p.string());
            }
        } else if (*list) {
            for (const auto& spec : eadmm::problem_registry()) {
                fmt::print("{}  n={} l={} noise={}\n", spec.name(), spec.num_variables(), spec.num_constraints(),
                           spec.p_noise);
            }
        }
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
