#include "eadmm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"

namespace eadmm {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Metric m) {
    switch (m) {
    case Metric::Igd: return "igd";
    case Metric::IgdPlus: return "igd_plus";
    case Metric::Hv: return "hv";
    }
    return "?";
}

Metric parse_metric(std::string_view name) {
    if (name == "igd") return Metric::Igd;
    if (name == "igd_plus" || name == "igd+") return Metric::IgdPlus;
    if (name == "hv") return Metric::Hv;
    throw std::invalid_argument(fmt::format("unknown metric '{}'", name));
}

stats::Orientation orientation(Metric m) {
    return m == Metric::Hv ? stats::Orientation::Maximize : stats::Orientation::Minimize;
}

AlgorithmSpec parse_algorithm(std::string_view name) {
    constexpr std::string_view prefix = "eadmm-";
    constexpr std::string_view suffix = "-ablated";
    if (!name.starts_with(prefix)) throw std::invalid_argument(fmt::format("unknown algorithm '{}'", name));
    auto rest = name.substr(prefix.size());
    AlgorithmSpec spec;
    if (rest.ends_with(suffix)) {
        spec.config.ablation = true;
        rest.remove_suffix(suffix.size());
    }
    spec.config.backbone = parse_backbone(rest);
    spec.name = algorithm_name(spec.config);
    return spec;
}

std::uint64_t default_max_fe(std::size_t m) {
    if (m <= 2) return 30'000;
    if (m == 3) return 50'000;
    if (m <= 5) return 80'000;
    return 120'000;
}

std::uint64_t ExperimentConfig::max_fe_for(const UcProblemSpec& spec) const {
    if (auto it = max_fe_by_problem.find(spec.name()); it != max_fe_by_problem.end()) return it->second;
    if (auto it = max_fe_by_m.find(spec.m); it != max_fe_by_m.end()) return it->second;
    return default_max_fe(spec.m);
}

void ExperimentConfig::validate() const {
    if (experiment_id.empty()) throw std::invalid_argument("experiment_id is empty");
    if (problems.empty()) throw std::invalid_argument("no problems configured");
    if (algorithms.empty()) throw std::invalid_argument("no algorithms configured");
    if (seeds.empty()) throw std::invalid_argument("seed count must be at least 1");
    if (metrics.empty()) throw std::invalid_argument("no metrics configured");
    if (metric_interval == 0) throw std::invalid_argument("metric_interval must be positive");
    if (workers == 0) throw std::invalid_argument("workers must be positive");
    std::set<std::string> names;
    for (const auto& a : algorithms) {
        if (!names.insert(a.name).second) throw std::invalid_argument(fmt::format("duplicate algorithm '{}'", a.name));
        a.config.validate();
    }
    std::set<std::uint64_t> unique_seeds(seeds.begin(), seeds.end());
    if (unique_seeds.size() != seeds.size()) throw std::invalid_argument("duplicate seeds");
    for (const auto& [name, fe] : max_fe_by_problem) parse_problem_name(name);
    for (const auto& p : problems) {
        const auto spec = parse_problem_name(p);
        const auto fe = max_fe_for(spec);
        for (const auto& a : algorithms) {
            auto cfg = a.config;
            cfg.max_fe = fe;
            const auto n = cfg.backbone == Backbone::Moead || cfg.population_size == 0
                               ? default_population_size(spec.m)
                               : cfg.population_size;
            if (fe < 2 * n) {
                throw std::invalid_argument(fmt::format("max_fe {} for {} is below 2N = {}", fe, p, 2 * n));
            }
        }
    }
}

namespace {

template <class T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void apply_algorithm_params(const json& j, EadmmConfig& c) {
    read_if(j, "population_size", c.population_size);
    read_if(j, "ibea_kappa", c.ibea_kappa);
    if (j.contains("sbx")) {
        read_if(j["sbx"], "p_c", c.sbx.p_c);
        read_if(j["sbx"], "eta_c", c.sbx.eta_c);
    }
    if (j.contains("pm")) {
        read_if(j["pm"], "p_m", c.pm.p_m);
        read_if(j["pm"], "eta_m", c.pm.eta_m);
    }
    if (j.contains("moead")) {
        const auto& m = j["moead"];
        read_if(m, "neighborhood_size", c.moead.neighborhood_size);
        read_if(m, "neighborhood_mating", c.moead.neighborhood_mating);
        read_if(m, "max_replacements", c.moead.max_replacements);
        read_if(m, "cr", c.moead.de.cr);
        read_if(m, "f", c.moead.de.f);
        read_if(m, "p_m", c.moead.pm.p_m);
        read_if(m, "eta_m", c.moead.pm.eta_m);
    }
    if (j.contains("local_search")) {
        const auto& l = j["local_search"];
        read_if(l, "ga_pop", c.local_search.ga_pop);
        read_if(l, "ga_generations", c.local_search.ga_generations);
        read_if(l, "archive_cap", c.local_search.archive_cap);
        read_if(l, "credit_ratio", c.local_search.credit_ratio);
    }
}

json algorithm_params(const EadmmConfig& c) {
    return {
        {"backbone", std::string(to_string(c.backbone))},
        {"ablation", c.ablation},
        {"population_size", c.population_size},
        {"ibea_kappa", c.ibea_kappa},
        {"sbx", {{"p_c", c.sbx.p_c}, {"eta_c", c.sbx.eta_c}}},
        {"pm", {{"p_m", c.pm.p_m}, {"eta_m", c.pm.eta_m}}},
        {"moead",
         {{"neighborhood_size", c.moead.neighborhood_size},
          {"neighborhood_mating", c.moead.neighborhood_mating},
          {"max_replacements", c.moead.max_replacements},
          {"cr", c.moead.de.cr},
          {"f", c.moead.de.f},
          {"p_m", c.moead.pm.p_m},
          {"eta_m", c.moead.pm.eta_m}}},
        {"local_search",
         {{"ga_pop", c.local_search.ga_pop},
          {"ga_generations", c.local_search.ga_generations},
          {"archive_cap", c.local_search.archive_cap},
          {"credit_ratio", c.local_search.credit_ratio}}},
    };
}

} // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    ExperimentConfig c;
    try {
        read_if(j, "experiment_id", c.experiment_id);
        if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();

        const auto& problems = j.at("problems");
        if (problems.is_string()) {
            if (problems.get<std::string>() != "all") {
                c.problems.push_back(problems.get<std::string>());
            } else {
                for (const auto& spec : problem_registry()) c.problems.push_back(spec.name());
            }
        } else {
            c.problems = problems.get<std::vector<std::string>>();
        }
        for (const auto& p : c.problems) parse_problem_name(p);

        for (const auto& a : j.at("algorithms")) {
            if (a.is_string()) {
                c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
                continue;
            }
            auto spec = parse_algorithm(a.at("name").get<std::string>());
            if (a.value("ablation", false)) spec.config.ablation = true;
            apply_algorithm_params(a, spec.config);
            spec.name = algorithm_name(spec.config);
            c.algorithms.push_back(std::move(spec));
        }

        if (!j.contains("seeds")) {
            for (std::uint64_t s = 1; s <= 31; ++s) c.seeds.push_back(s);
        } else if (j["seeds"].is_number_integer()) {
            const auto count = j["seeds"].get<std::int64_t>();
            if (count < 1) throw std::invalid_argument("seed count must be at least 1");
            for (std::int64_t s = 1; s <= count; ++s) c.seeds.push_back(static_cast<std::uint64_t>(s));
        } else {
            c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        }

        if (j.contains("max_fe")) {
            const auto& fe = j["max_fe"];
            if (fe.contains("by_m")) {
                for (const auto& [k, v] : fe["by_m"].items()) c.max_fe_by_m[std::stoul(k)] = v.get<std::uint64_t>();
            }
            if (fe.contains("by_problem")) {
                for (const auto& [k, v] : fe["by_problem"].items()) c.max_fe_by_problem[k] = v.get<std::uint64_t>();
            }
        }
        if (j.contains("metrics")) {
            c.metrics.clear();
            for (const auto& m : j["metrics"]) c.metrics.push_back(parse_metric(m.get<std::string>()));
        }
        read_if(j, "metric_interval", c.metric_interval);
        read_if(j, "reference_size", c.reference_size);
        read_if(j, "workers", c.workers);
    } catch (const json::exception& e) {
        throw std::invalid_argument(fmt::format("bad config: {}", e.what()));
    }
    c.validate();
    return c;
}

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double to_number(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw std::runtime_error(fmt::format("bad number '{}'", s));
}

json population_json(const Population& pop, const std::vector<bool>& feasible) {
    json out = json::array();
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const auto& s = pop[i];
        json f = json::array();
        for (double v : s.f) f.push_back(number(v));
        out.push_back({{"x", s.x}, {"f", f}, {"g", s.g}, {"eval_id", s.eval_id}, {"feasible", bool(feasible[i])}});
    }
    return out;
}

void population_from_json(const json& j, Population& pop, std::vector<bool>& feasible) {
    for (const auto& e : j) {
        Solution s;
        s.x = e.at("x").get<DecisionVector>();
        for (const auto& v : e.at("f")) s.f.push_back(to_number(v));
        s.g = e.at("g").get<ConstraintSignal>();
        s.eval_id = e.at("eval_id").get<std::uint64_t>();
        feasible.push_back(e.at("feasible").get<bool>());
        pop.push_back(std::move(s));
    }
}

// FNV-1a; stable across platforms, unlike std::hash.
std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

} // namespace

ExperimentConfig load_experiment_config(const fs::path& path) {
    return parse_experiment_config(read_file(path));
}

std::string record_to_json(const CellRecord& record) {
    const auto& r = record.run;
    json trace = json::array();
    for (const auto& t : r.trace) {
        json row = {{"generation", t.generation},
                    {"used_fe", t.used_fe},
                    {"feasible_flagged", t.feasible_flagged},
                    {"feasible_true", t.feasible_true}};
        if (t.scores) {
            if (!std::isnan(t.scores->igd)) row["igd"] = number(t.scores->igd);
            if (!std::isnan(t.scores->igd_plus)) row["igd_plus"] = number(t.scores->igd_plus);
            if (!std::isnan(t.scores->hv)) row["hv"] = number(t.scores->hv);
        }
        trace.push_back(std::move(row));
    }
    json j = {{"problem", r.problem},
              {"algorithm", r.algorithm},
              {"seed", r.seed},
              {"config_hash", record.config_hash},
              {"max_fe", r.max_fe},
              {"used_fe", r.used_fe},
              {"wall_seconds", r.wall_seconds},
              {"trace", std::move(trace)},
              {"final_p", population_json(r.final_p, record.final_p_feasible)},
              {"final_p_bar", population_json(r.final_p_bar, record.final_p_bar_feasible)}};
    return j.dump(1);
}

CellRecord record_from_json(std::string_view json_text) {
    CellRecord rec;
    try {
        const auto j = json::parse(json_text);
        auto& r = rec.run;
        r.problem = j.at("problem").get<std::string>();
        r.algorithm = j.at("algorithm").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        rec.config_hash = j.at("config_hash").get<std::string>();
        r.max_fe = j.at("max_fe").get<std::uint64_t>();
        r.used_fe = j.at("used_fe").get<std::uint64_t>();
        r.wall_seconds = j.at("wall_seconds").get<double>();
        for (const auto& row : j.at("trace")) {
            TracePoint t;
            t.generation = row.at("generation").get<std::size_t>();
            t.used_fe = row.at("used_fe").get<std::uint64_t>();
            t.feasible_flagged = row.at("feasible_flagged").get<std::size_t>();
            t.feasible_true = row.at("feasible_true").get<std::size_t>();
            const bool any = row.contains("igd") || row.contains("igd_plus") || row.contains("hv");
            if (any) {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                QualityScores s{nan, nan, nan};
                if (row.contains("igd")) s.igd = to_number(row["igd"]);
                if (row.contains("igd_plus")) s.igd_plus = to_number(row["igd_plus"]);
                if (row.contains("hv")) s.hv = to_number(row["hv"]);
                t.scores = s;
            }
            r.trace.push_back(t);
        }
        population_from_json(j.at("final_p"), r.final_p, rec.final_p_feasible);
        population_from_json(j.at("final_p_bar"), r.final_p_bar, rec.final_p_bar_feasible);
    } catch (const json::exception& e) {
        throw std::runtime_error(fmt::format("malformed record: {}", e.what()));
    }
    return rec;
}

CellRecord read_record(const fs::path& path) {
    try {
        return record_from_json(read_file(path));
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(fmt::format("{}: {}", path.string(), e.what()));
    }
}

CellRecord run_cell(const UcProblemSpec& spec, const AlgorithmSpec& algorithm, std::uint64_t seed,
                    std::uint64_t max_fe, const CellOptions& options) {
    const auto problem = make_problem(spec);
    const auto reference =
        reference_front(spec, options.reference_size != 0 ? options.reference_size : default_reference_size(spec.m));
    const auto norm = Normalization::from_front(reference);
    const bool want_igd = std::ranges::find(options.metrics, Metric::Igd) != options.metrics.end();
    const bool want_igd_plus = std::ranges::find(options.metrics, Metric::IgdPlus) != options.metrics.end();
    const bool want_hv = std::ranges::find(options.metrics, Metric::Hv) != options.metrics.end();
    const std::size_t interval = std::max<std::size_t>(options.metric_interval, 1);

    auto config = algorithm.config;
    config.max_fe = max_fe;

    CellRecord rec;
    json hashed = {{"problem", spec.name()},
                   {"algorithm", algorithm.name},
                   {"params", algorithm_params(config)},
                   {"max_fe", max_fe},
                   {"metric_interval", interval},
                   {"reference_size", reference.size()}};
    for (auto m : options.metrics) hashed["metrics"].push_back(std::string(to_string(m)));
    rec.config_hash = fnv1a_hex(hashed.dump());

    auto probe = [&](const EadmmState& state, bool final) -> std::optional<QualityScores> {
        if (!final && state.generation % interval != 0) return std::nullopt;
        std::vector<ObjectiveVector> kept;
        for (const auto& s : state.p) {
            if (problem.noiseless_feasible(s.x)) kept.push_back(s.f);
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double inf = std::numeric_limits<double>::infinity();
        QualityScores q{nan, nan, nan};
        if (want_igd) q.igd = kept.empty() ? inf : igd(kept, reference);
        if (want_igd_plus) q.igd_plus = kept.empty() ? inf : igd_plus(kept, reference);
        if (want_hv) {
            std::vector<ObjectiveVector> scaled;
            for (const auto& f : kept) scaled.push_back(norm.apply(f));
            const ObjectiveVector ref(spec.m, kHvReference);
            q.hv = hypervolume(scaled, ref);
        }
        return q;
    };
    rec.run = run(problem, config, seed, probe);
    for (const auto& s : rec.run.final_p) rec.final_p_feasible.push_back(problem.noiseless_feasible(s.x));
    for (const auto& s : rec.run.final_p_bar) rec.final_p_bar_feasible.push_back(problem.noiseless_feasible(s.x));
    return rec;
}

fs::path cell_dir(const fs::path& root, std::string_view problem, std::string_view algorithm, std::uint64_t seed) {
    return root / std::string(problem) / std::string(algorithm) / fmt::format("seed_{}", seed);
}

namespace {

std::string population_csv(const Population& pop, const std::vector<bool>& feasible) {
    std::string out;
    if (pop.empty()) return "eval_id,feasible\n";
    const auto& first = pop.front();
    for (std::size_t i = 0; i < first.x.size(); ++i) out += fmt::format("x{},", i + 1);
    for (std::size_t i = 0; i < first.f.size(); ++i) out += fmt::format("f{},", i + 1);
    for (std::size_t i = 0; i < first.g.size(); ++i) out += fmt::format("g{},", i + 1);
    out += "eval_id,feasible\n";
    for (std::size_t k = 0; k < pop.size(); ++k) {
        const auto& s = pop[k];
        for (double v : s.x) out += fmt::format("{},", v);
        for (double v : s.f) out += fmt::format("{},", v);
        for (auto v : s.g) out += fmt::format("{},", int(v));
        out += fmt::format("{},{}\n", s.eval_id, feasible[k] ? 1 : 0);
    }
    return out;
}

} // namespace

void write_cell(const fs::path& dir, const CellRecord& record) {
    fs::create_directories(dir);
    write_file(dir / "record.json", record_to_json(record));
    write_file(dir / "final_P.csv", population_csv(record.run.final_p, record.final_p_feasible));
    write_file(dir / "final_Pbar.csv", population_csv(record.run.final_p_bar, record.final_p_bar_feasible));
}

std::size_t ExperimentResult::failures() const {
    return static_cast<std::size_t>(std::ranges::count_if(cells, [](const CellStatus& c) { return !c.ok; }));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    result.root = config.output_dir / config.experiment_id;
    std::error_code ec;
    fs::create_directories(result.root, ec);
    if (ec || !fs::is_directory(result.root)) {
        throw std::runtime_error(fmt::format("cannot create output directory '{}'", result.root.string()));
    }

    struct Cell {
        UcProblemSpec spec;
        const AlgorithmSpec* algorithm;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (const auto& p : config.problems) {
        const auto spec = parse_problem_name(p);
        for (const auto& a : config.algorithms) {
            for (auto seed : config.seeds) cells.push_back({spec, &a, seed});
        }
    }
    result.cells.resize(cells.size());

    const CellOptions options{config.metrics, config.metric_interval, config.reference_size};
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const auto& cell = cells[i];
            auto& status = result.cells[i];
            status.problem = cell.spec.name();
            status.algorithm = cell.algorithm->name;
            status.seed = cell.seed;
            try {
                const auto rec = run_cell(cell.spec, *cell.algorithm, cell.seed, config.max_fe_for(cell.spec), options);
                write_cell(cell_dir(result.root, status.problem, status.algorithm, cell.seed), rec);
                status.ok = true;
            } catch (const std::exception& e) {
                status.error = e.what();
            }
        }
    };
    const std::size_t workers = std::min(config.workers, std::max<std::size_t>(cells.size(), 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    json manifest = {{"experiment_id", config.experiment_id}, {"cells", json::array()}};
    for (const auto& a : config.algorithms) manifest["algorithms"][a.name] = algorithm_params(a.config);
    manifest["problems"] = config.problems;
    manifest["seeds"] = config.seeds;
    for (const auto& p : config.problems) manifest["max_fe"][p] = config.max_fe_for(parse_problem_name(p));
    for (auto m : config.metrics) manifest["metrics"].push_back(std::string(to_string(m)));
    manifest["metric_interval"] = config.metric_interval;
    for (const auto& c : result.cells) {
        json row = {{"problem", c.problem}, {"algorithm", c.algorithm}, {"seed", c.seed},
                    {"status", c.ok ? "ok" : "failed"}};
        if (!c.ok) row["error"] = c.error;
        manifest["cells"].push_back(std::move(row));
    }
    write_file(result.root / "manifest.json", manifest.dump(1));
    return result;
}

namespace {

struct RecordEntry {
    std::string problem;
    std::string algorithm;
    std::uint64_t seed;
    fs::path path;
    std::map<Metric, double> final_scores;
};

std::vector<RecordEntry> scan(const fs::path& results_dir) {
    if (!fs::is_directory(results_dir)) {
        throw std::runtime_error(fmt::format("no results directory '{}'", results_dir.string()));
    }
    std::vector<fs::path> paths;
    for (const auto& e : fs::recursive_directory_iterator(results_dir)) {
        if (e.is_regular_file() && e.path().filename() == "record.json") paths.push_back(e.path());
    }
    std::ranges::sort(paths);
    std::vector<RecordEntry> out;
    for (const auto& path : paths) {
        json j;
        try {
            j = json::parse(read_file(path));
            RecordEntry e{j.at("problem").get<std::string>(), j.at("algorithm").get<std::string>(),
                          j.at("seed").get<std::uint64_t>(), path, {}};
            const auto& trace = j.at("trace");
            if (!trace.empty()) {
                const auto& last = trace.back();
                for (auto m : {Metric::Igd, Metric::IgdPlus, Metric::Hv}) {
                    const std::string key(to_string(m));
                    if (last.contains(key)) e.final_scores[m] = to_number(last[key]);
                }
            }
            out.push_back(std::move(e));
        } catch (const json::exception& ex) {
            throw std::runtime_error(fmt::format("{}: malformed record: {}", path.string(), ex.what()));
        }
    }
    if (out.empty()) throw std::runtime_error(fmt::format("no records under '{}'", results_dir.string()));
    return out;
}

MetricValues values_of(const std::vector<RecordEntry>& entries, Metric metric) {
    MetricValues v;
    for (const auto& e : entries) {
        auto it = e.final_scores.find(metric);
        if (it == e.final_scores.end()) {
            throw std::runtime_error(fmt::format("{}: no final {} value", e.path.string(), to_string(metric)));
        }
        v[e.problem][e.algorithm][e.seed] = it->second;
    }
    return v;
}

std::vector<double> ordered_values(const std::map<std::uint64_t, double>& by_seed) {
    std::vector<double> out;
    out.reserve(by_seed.size());
    for (const auto& [seed, value] : by_seed) out.push_back(value);
    return out;
}

// Scott-Knott works on means, so runs without a feasible solution (IGD = inf)
// are placed one spread beyond the worst finite value of the problem.
std::vector<stats::NamedSample> finite_groups(const std::map<std::string, std::map<std::uint64_t, double>>& algos,
                                              Metric metric) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [name, by_seed] : algos) {
        for (const auto& [seed, v] : by_seed) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    double penalty = 0.0;
    if (std::isfinite(lo)) {
        const double spread = hi > lo ? hi - lo : 1.0;
        penalty = orientation(metric) == stats::Orientation::Minimize ? hi + spread : lo - spread;
    }
    std::vector<stats::NamedSample> groups;
    for (const auto& [name, by_seed] : algos) {
        auto values = ordered_values(by_seed);
        for (auto& v : values) {
            if (!std::isfinite(v)) v = penalty;
        }
        groups.push_back({name, std::move(values)});
    }
    return groups;
}

std::map<std::string, int> problem_ranks(const std::map<std::string, std::map<std::uint64_t, double>>& algos,
                                         Metric metric, const SummaryOptions& options) {
    const auto groups = finite_groups(algos, metric);
    return stats::scott_knott(groups, {options.alpha, orientation(metric), options.min_effect});
}

void check_seed_sets(const std::string& problem, const std::map<std::string, std::map<std::uint64_t, double>>& algos) {
    const auto& first = algos.begin()->second;
    for (const auto& [name, by_seed] : algos) {
        const bool same = by_seed.size() == first.size() &&
                          std::equal(by_seed.begin(), by_seed.end(), first.begin(),
                                     [](const auto& a, const auto& b) { return a.first == b.first; });
        if (!same) {
            throw std::runtime_error(fmt::format("{}: algorithms '{}' and '{}' ran different seeds", problem,
                                                 algos.begin()->first, name));
        }
    }
}

std::string csv_number(double v) { return fmt::format("{}", v); }

} // namespace

MetricValues collect_metric(const fs::path& results_dir, Metric metric) {
    return values_of(scan(results_dir), metric);
}

SummaryTable summarize(const MetricValues& values, Metric metric, const SummaryOptions& options) {
    SummaryTable table;
    table.metric = metric;
    const bool minimize = orientation(metric) == stats::Orientation::Minimize;
    for (const auto& [problem, algos] : values) {
        if (algos.empty()) continue;
        check_seed_sets(problem, algos);
        std::map<std::string, int> ranks;
        if (algos.size() >= 2) ranks = problem_ranks(algos, metric, options);
        for (const auto& [name, by_seed] : algos) {
            const auto v = ordered_values(by_seed);
            SummaryRow row{problem, name, v.size(), stats::median(v), stats::iqr(v), std::nullopt};
            if (auto it = ranks.find(name); it != ranks.end()) row.sk_rank = it->second;
            table.rows.push_back(std::move(row));
        }
        for (auto a = algos.begin(); a != algos.end(); ++a) {
            for (auto b = std::next(a); b != algos.end(); ++b) {
                const auto x = ordered_values(a->second);
                const auto y = ordered_values(b->second);
                PairwiseRow pr;
                pr.problem = problem;
                pr.a = a->first;
                pr.b = b->first;
                pr.wilcoxon = stats::wilcoxon_signed_rank(x, y, options.alpha);
                pr.a12 = stats::a12(x, y);
                pr.effect = stats::classify_a12(pr.a12);
                if (!pr.wilcoxon.decidable) {
                    pr.marker = '?';
                } else if (!pr.wilcoxon.significant) {
                    pr.marker = '=';
                } else {
                    const bool a_higher = pr.a12 > 0.5;
                    pr.marker = (a_higher != minimize) ? '+' : '-';
                }
                table.pairs.push_back(std::move(pr));
            }
        }
    }
    return table;
}

void write_summary_csv(std::ostream& os, const SummaryTable& table) {
    os << "problem,algorithm,metric,runs,median,iqr,sk_rank\n";
    for (const auto& r : table.rows) {
        os << fmt::format("{},{},{},{},{},{},{}\n", r.problem, r.algorithm, to_string(table.metric), r.runs,
                          csv_number(r.median), csv_number(r.iqr), r.sk_rank ? std::to_string(*r.sk_rank) : "");
    }
}

void write_pairwise_csv(std::ostream& os, const SummaryTable& table) {
    os << "problem,algorithm_a,algorithm_b,metric,n_effective,p_value,marker,a12,effect\n";
    for (const auto& p : table.pairs) {
        os << fmt::format("{},{},{},{},{},{},{},{},{}\n", p.problem, p.a, p.b, to_string(table.metric),
                          p.wilcoxon.n_effective, p.wilcoxon.decidable ? csv_number(p.wilcoxon.p) : "", p.marker,
                          csv_number(p.a12), stats::to_string(p.effect));
    }
}

SummaryTable summarize(const fs::path& results_dir, Metric metric, const SummaryOptions& options) {
    auto table = summarize(collect_metric(results_dir, metric), metric, options);
    std::ostringstream summary;
    std::ostringstream pairwise;
    write_summary_csv(summary, table);
    write_pairwise_csv(pairwise, table);
    write_file(results_dir / fmt::format("summary_{}.csv", to_string(metric)), summary.str());
    write_file(results_dir / fmt::format("pairwise_{}.csv", to_string(metric)), pairwise.str());
    return table;
}

std::string_view to_string(PlotKind k) {
    switch (k) {
    case PlotKind::FrontScatter: return "front-scatter";
    case PlotKind::RankBars: return "rank-bars";
    case PlotKind::HvBars: return "hv-bars";
    }
    return "?";
}

PlotKind parse_plot_kind(std::string_view name) {
    if (name == "front-scatter") return PlotKind::FrontScatter;
    if (name == "rank-bars") return PlotKind::RankBars;
    if (name == "hv-bars") return PlotKind::HvBars;
    throw std::invalid_argument(fmt::format("unknown plot kind '{}'", name));
}

std::uint64_t median_igd_seed(const std::map<std::uint64_t, double>& igd_by_seed) {
    if (igd_by_seed.empty()) throw std::invalid_argument("no runs to pick a median from");
    std::vector<std::pair<double, std::uint64_t>> runs;
    for (const auto& [seed, v] : igd_by_seed) runs.emplace_back(v, seed);
    std::ranges::sort(runs);
    return runs[(runs.size() - 1) / 2].second;
}

std::vector<fs::path> emit_plot_data(const fs::path& results_dir, PlotKind kind, const SummaryOptions& options) {
    const auto entries = scan(results_dir);
    const auto out_dir = results_dir / "plots";
    fs::create_directories(out_dir);
    std::vector<fs::path> written;

    switch (kind) {
    case PlotKind::FrontScatter: {
        const auto igds = values_of(entries, Metric::Igd);
        const auto scatter_dir = out_dir / "front_scatter";
        fs::create_directories(scatter_dir);
        for (const auto& [problem, algos] : igds) {
            for (const auto& [algorithm, by_seed] : algos) {
                const auto seed = median_igd_seed(by_seed);
                const auto it = std::ranges::find_if(entries, [&](const RecordEntry& e) {
                    return e.problem == problem && e.algorithm == algorithm && e.seed == seed;
                });
                const auto rec = read_record(it->path);
                std::string text;
                const auto m = parse_problem_name(problem).m;
                for (std::size_t i = 0; i < m; ++i) text += fmt::format("f{},", i + 1);
                text += "feasible\n";
                for (std::size_t k = 0; k < rec.run.final_p.size(); ++k) {
                    for (double v : rec.run.final_p[k].f) text += fmt::format("{},", v);
                    text += rec.final_p_feasible[k] ? "feasible\n" : "infeasible\n";
                }
                const auto path = scatter_dir / fmt::format("{}__{}__seed_{}.csv", problem, algorithm, seed);
                write_file(path, text);
                written.push_back(path);
            }
        }
        break;
    }
    case PlotKind::RankBars: {
        struct Tally {
            std::size_t cells = 0;
            long total = 0;
            std::map<int, std::size_t> counts;
        };
        std::map<std::size_t, std::map<std::string, Tally>> tallies;  // m -> algorithm
        int max_rank = 0;
        for (auto metric : {Metric::Igd, Metric::IgdPlus, Metric::Hv}) {
            const bool present = std::ranges::all_of(
                entries, [&](const RecordEntry& e) { return e.final_scores.contains(metric); });
            if (!present) continue;
            for (const auto& [problem, algos] : values_of(entries, metric)) {
                if (algos.size() < 2) continue;
                check_seed_sets(problem, algos);
                const auto m = parse_problem_name(problem).m;
                for (const auto& [name, rank] : problem_ranks(algos, metric, options)) {
                    auto& t = tallies[m][name];
                    ++t.cells;
                    t.total += rank;
                    ++t.counts[rank];
                    max_rank = std::max(max_rank, rank);
                }
            }
        }
        std::string text = "m,algorithm,cells,total_rank";
        for (int k = 1; k <= max_rank; ++k) text += fmt::format(",rank_{}", k);
        text += "\n";
        for (const auto& [m, algos] : tallies) {
            for (const auto& [name, t] : algos) {
                text += fmt::format("{},{},{},{}", m, name, t.cells, t.total);
                for (int k = 1; k <= max_rank; ++k) {
                    const auto it = t.counts.find(k);
                    text += fmt::format(",{}", it == t.counts.end() ? 0 : it->second);
                }
                text += "\n";
            }
        }
        const auto path = out_dir / "rank_bars.csv";
        write_file(path, text);
        written.push_back(path);
        break;
    }
    case PlotKind::HvBars: {
        std::string text = "problem,m,algorithm,runs,mean_hv,std_hv\n";
        for (const auto& [problem, algos] : values_of(entries, Metric::Hv)) {
            const auto m = parse_problem_name(problem).m;
            for (const auto& [name, by_seed] : algos) {
                const auto v = ordered_values(by_seed);
                text += fmt::format("{},{},{},{},{},{}\n", problem, m, name, v.size(), stats::mean(v),
                                    stats::stddev(v));
            }
        }
        const auto path = out_dir / "hv_bars.csv";
        write_file(path, text);
        written.push_back(path);
        break;
    }
    }
    return written;
}

} // namespace eadmm
