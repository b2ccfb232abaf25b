#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tsplab/dataset.hpp"
#include "tsplab/evolve.hpp"
#include "tsplab/features.hpp"
#include "tsplab/io.hpp"
#include "tsplab/mars.hpp"
#include "tsplab/morph.hpp"
#include "tsplab/solver.hpp"
#include "tsplab/stats.hpp"
#include "tsplab/tree.hpp"
#include "tsplab/validation.hpp"

namespace fs = std::filesystem;
using namespace tsplab;

namespace {

using Clock = std::chrono::steady_clock;

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path.string());
    return out;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    nlohmann::json config, std::uint64_t seed,
                    std::vector<std::string> inputs, std::vector<std::string> outputs,
                    Clock::time_point started) {
    const auto wall =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started);
    const nlohmann::json j{{"command", command},
                           {"config", std::move(config)},
                           {"seed", seed},
                           {"inputs", std::move(inputs)},
                           {"outputs", std::move(outputs)},
                           {"version", TSPLAB_VERSION},
                           {"wall_time_ms", wall.count()}};
    open_out(out_dir / "manifest.json") << j.dump(2) << "\n";
}

/// Expands files and directories (recursively) into a sorted list of
/// instance files, skipping this tool's own non-instance artifacts.
std::vector<fs::path> list_instance_files(const std::vector<std::string>& inputs) {
    static const std::vector<std::string> artifacts{"manifest.json", "run.json", "model.json",
                                                    "report.json", "selection.json"};
    std::vector<fs::path> files;
    for (const std::string& input : inputs) {
        const fs::path p(input);
        if (fs::is_directory(p)) {
            // One entry per (directory, stem); the native format wins when an
            // instance was written in both.
            std::map<std::string, fs::path> chosen;
            for (const auto& entry : fs::recursive_directory_iterator(p)) {
                if (!entry.is_regular_file()) continue;
                const std::string ext = entry.path().extension().string();
                const std::string name = entry.path().filename().string();
                if (std::find(artifacts.begin(), artifacts.end(), name) != artifacts.end())
                    continue;
                if (ext != ".json" && ext != ".tsp") continue;
                const std::string key = (entry.path().parent_path() / entry.path().stem()).string();
                auto [it, inserted] = chosen.emplace(key, entry.path());
                if (!inserted && ext == ".json") it->second = entry.path();
            }
            for (const auto& [key, path] : chosen) files.push_back(path);
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.string() < b.string(); });
    return files;
}

struct LoadedInstance {
    std::string id;
    Instance instance;
    nlohmann::json meta = nlohmann::json::object();
};

LoadedInstance load_instance(const fs::path& path) {
    LoadedInstance loaded;
    loaded.id = path.stem().string();
    if (path.extension() == ".json") {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open: " + path.string());
        try {
            nlohmann::json j;
            in >> j;
            loaded.instance = instance_from_json(j);
            loaded.meta = j.value("meta", nlohmann::json::object());
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ": " + e.what());
        }
    } else {
        loaded.instance = read_tsplib_file(path.string());
    }
    if (!loaded.instance.name.empty()) loaded.id = loaded.instance.name;
    return loaded;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> grid;
    grid.reserve(count);
    if (count == 1) {
        grid.push_back(lo);
        return grid;
    }
    for (int i = 0; i < count; ++i)
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return grid;
}

// ---------------------------------------------------------------- evolve

struct EvolveOpts {
    std::string cls = "both";
    int size = 15;
    int count = 1;
    int pop = 16;
    int generations = 200;
    int repetitions = 50;
    int cells = 100;
    double time_limit_s = 900.0;
    std::string scheme = "rnd";
    double uniform_rate = 0.001;
    double normal_rate = 0.01;
    double normal_sd = 0.025;
    std::uint64_t seed = 0;
    std::string out = ".";
    int threads = 1;
};

nlohmann::json evolve_config_json(const EvolveOpts& o) {
    return {{"class", o.cls},           {"size", o.size},
            {"count", o.count},         {"pop", o.pop},
            {"generations", o.generations}, {"repetitions", o.repetitions},
            {"cells", o.cells},         {"time_limit_s", o.time_limit_s},
            {"scheme", o.scheme},       {"uniform_rate", o.uniform_rate},
            {"normal_rate", o.normal_rate}, {"normal_sd", o.normal_sd},
            {"threads", o.threads}};
}

int cmd_evolve(const EvolveOpts& o) {
    const auto started = Clock::now();
    const fs::path out_dir(o.out);
    fs::create_directories(out_dir);

    std::vector<Objective> classes;
    if (o.cls == "both")
        classes = {Objective::easy, Objective::hard};
    else
        classes = {objective_from_string(o.cls)};

    const RngStream master(o.seed);
    std::vector<std::string> outputs;
    std::ostringstream summary;
    summary << "class,scheme,mean_ratio,mean_generations\n";

    for (Objective obj : classes) {
        const std::uint64_t class_idx = obj == Objective::easy ? 0 : 1;
        std::vector<double> ratios;
        std::vector<double> generations;
        for (int k = 0; k < o.count; ++k) {
            EaConfig cfg;
            cfg.pop_size = o.pop;
            cfg.inst_size = o.size;
            cfg.generations = o.generations;
            cfg.time_limit = std::chrono::milliseconds(
                static_cast<long long>(std::llround(o.time_limit_s * 1000.0)));
            cfg.cells = o.cells;
            cfg.repetitions = o.repetitions;
            cfg.objective = obj;
            cfg.rounding_scheme = rounding_scheme_from_string(o.scheme);
            cfg.uniform_mutation_rate = o.uniform_rate;
            cfg.normal_mutation_rate = o.normal_rate;
            cfg.normal_mutation_sd = o.normal_sd;
            cfg.seed = master.child(class_idx, static_cast<std::uint64_t>(k)).key();

            std::cerr << "evolve: " << to_string(obj) << " run " << k << "\n";
            EaRun run = evolve(cfg);

            char run_name[32];
            std::snprintf(run_name, sizeof run_name, "run_%03d", k);
            const fs::path run_dir = out_dir / to_string(obj) / run_name;
            fs::create_directories(run_dir);

            char inst_name[48];
            std::snprintf(inst_name, sizeof inst_name, "%s-%03d", to_string(obj).c_str(), k);
            run.elite_instance.name = inst_name;
            const nlohmann::json meta{{"class", to_string(obj)},
                                      {"scheme", o.scheme},
                                      {"seed", cfg.seed},
                                      {"ratio", run.elite_fitness.ratio},
                                      {"generations", run.generations_executed}};
            write_json_file(run.elite_instance, (run_dir / "instance.json").string(), meta);
            write_tsplib_file(run.elite_instance, (run_dir / "instance.tsp").string());
            {
                std::ofstream trace = open_out(run_dir / "trace.csv");
                write_trace_csv(run, trace);
            }
            open_out(run_dir / "run.json") << to_json(run).dump(2) << "\n";
            outputs.push_back((run_dir / "instance.json").string());

            ratios.push_back(run.elite_fitness.ratio);
            generations.push_back(static_cast<double>(run.generations_executed));
            std::cerr << "evolve:   elite ratio " << format_sig(run.elite_fitness.ratio)
                      << " after " << run.generations_executed << " evaluated populations\n";
        }
        summary << to_string(obj) << "," << o.scheme << "," << format_sig(mean(ratios)) << ","
                << format_sig(mean(generations)) << "\n";
    }

    open_out(out_dir / "summary.csv") << summary.str();
    outputs.push_back((out_dir / "summary.csv").string());
    write_manifest(out_dir, "evolve", evolve_config_json(o), o.seed, {}, outputs, started);
    return 0;
}

// ---------------------------------------------------------------- features

struct FeaturesOpts {
    std::vector<std::string> inputs;
    std::string out = ".";
    std::uint64_t seed = 0;
    int threads = 1;
};

int cmd_features(const FeaturesOpts& o) {
    const auto started = Clock::now();
    const std::vector<fs::path> files = list_instance_files(o.inputs);
    if (files.empty()) {
        std::cerr << "error: no instance files found in the given inputs\n";
        return 1;
    }

    std::vector<FeatureRecord> records;
    records.reserve(files.size());
    for (const fs::path& path : files) {
        const LoadedInstance loaded = load_instance(path);
        FeatureRecord rec;
        rec.instance_id = loaded.id;
        rec.size = loaded.instance.size();
        rec.class_name = loaded.meta.value("class", std::string{});
        if (loaded.meta.contains("alpha")) rec.alpha = loaded.meta.at("alpha").get<double>();
        try {
            rec.features = extract_features(loaded.instance);
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ": " + e.what());
        }
        records.push_back(std::move(rec));
    }

    const fs::path out_dir(o.out);
    fs::create_directories(out_dir);
    {
        std::ofstream csv = open_out(out_dir / "features.csv");
        write_feature_csv(csv, records);
    }
    std::cerr << "features: wrote " << records.size() << " rows\n";

    std::vector<std::string> inputs;
    for (const fs::path& p : files) inputs.push_back(p.string());
    write_manifest(out_dir, "features", {{"threads", o.threads}}, o.seed, inputs,
                   {(out_dir / "features.csv").string()}, started);
    return 0;
}

// ---------------------------------------------------------------- morph

struct MorphOpts {
    std::string hard_dir;
    std::string easy_dir;
    std::vector<double> alphas{std::begin(kDefaultAlphas), std::end(kDefaultAlphas)};
    std::string scheme = "nrnd";
    int cells = 100;
    int repetitions = 50;
    double normal_rate = 0.01;
    double normal_sd = 0.025;
    std::uint64_t seed = 0;
    std::string out = ".";
    int threads = 1;
};

int cmd_morph(const MorphOpts& o) {
    const auto started = Clock::now();
    for (double a : o.alphas)
        if (!(a >= 0.0 && a <= 1.0)) {
            std::cerr << "error: --alphas values must lie in [0, 1]\n";
            return 1;
        }
    const std::vector<fs::path> hard_files = list_instance_files({o.hard_dir});
    const std::vector<fs::path> easy_files = list_instance_files({o.easy_dir});
    if (hard_files.empty() || easy_files.empty()) {
        std::cerr << "error: --hard and --easy must both contain instance files\n";
        return 1;
    }

    std::vector<LoadedInstance> hard, easy;
    for (const fs::path& p : hard_files) hard.push_back(load_instance(p));
    for (const fs::path& p : easy_files) easy.push_back(load_instance(p));
    const int size = hard.front().instance.size();
    for (const auto& group : {std::cref(hard), std::cref(easy)})
        for (const LoadedInstance& li : group.get())
            if (li.instance.size() != size)
                throw std::runtime_error("instance size mismatch: " + li.id + " has " +
                                         std::to_string(li.instance.size()) + " points, expected " +
                                         std::to_string(size));

    MorphParams params;
    params.cells = o.cells;
    params.rounding_scheme = rounding_scheme_from_string(o.scheme);
    params.normal_mutation_rate = o.normal_rate;
    params.normal_mutation_sd = o.normal_sd;

    const fs::path out_dir(o.out);
    const fs::path inst_dir = out_dir / "instances";
    fs::create_directories(inst_dir);

    const RngStream master(o.seed);
    std::vector<MorphRecord> records;
    for (std::size_t i = 0; i < hard.size(); ++i) {
        for (std::size_t j = 0; j < easy.size(); ++j) {
            const RngStream pair_rng = master.child(i, j);
            RngStream morph_rng = pair_rng.child(0);
            const auto sequence =
                morph_sequence(hard[i].instance, easy[j].instance, o.alphas, params, morph_rng);
            const std::string pair_id = hard[i].id + "__" + easy[j].id;
            std::cerr << "morph: " << pair_id << "\n";
            for (std::size_t k = 0; k < sequence.size(); ++k) {
                const double alpha = sequence[k].first;
                Instance inst = sequence[k].second;
                inst.name = pair_id + "_a" + format_sig(alpha);
                write_json_file(inst, (inst_dir / (inst.name + ".json")).string(),
                                {{"pair", pair_id}, {"alpha", alpha}});

                const DistanceMatrix dm = distance_matrix(inst);
                const double optimal = exact_tour(dm).length;
                RngStream fitness_rng = pair_rng.child(1, k);
                const FitnessValue f =
                    compute_fitness(dm, optimal, o.repetitions, fitness_rng);

                MorphRecord rec;
                rec.pair_id = pair_id;
                rec.alpha = alpha;
                rec.fitness = f.ratio;
                rec.features = extract_features(inst);
                records.push_back(std::move(rec));
            }
        }
    }

    {
        std::ofstream csv = open_out(out_dir / "morph.csv");
        write_morph_csv(csv, records);
    }
    const nlohmann::json config{{"alphas", o.alphas},   {"scheme", o.scheme},
                                {"cells", o.cells},     {"repetitions", o.repetitions},
                                {"normal_rate", o.normal_rate}, {"normal_sd", o.normal_sd},
                                {"threads", o.threads}};
    write_manifest(out_dir, "morph", config, o.seed, {o.hard_dir, o.easy_dir},
                   {(out_dir / "morph.csv").string()}, started);
    return 0;
}

// ---------------------------------------------------------------- solve

struct SolveOpts {
    std::string input;
    std::string method = "two-opt";
    int repetitions = 50;
    std::uint64_t seed = 0;
};

int cmd_solve(const SolveOpts& o) {
    const Instance inst = read_instance_file(o.input);
    const DistanceMatrix dm = distance_matrix(inst);
    nlohmann::json out;
    if (o.method == "exact") {
        out["length"] = exact_tour(dm).length;
    } else {
        RngStream rng(o.seed);
        if (inst.size() <= kDefaultExactCap) {
            const FitnessValue f = compute_fitness(inst, o.repetitions, rng);
            out["length"] = vec_min(f.lengths);
            out["ratio"] = f.ratio;
        } else {
            double best = std::numeric_limits<double>::infinity();
            for (int r = 0; r < o.repetitions; ++r) {
                RngStream sub = rng.child(static_cast<std::uint64_t>(r));
                const SolveResult res = two_opt(dm, random_tour(inst.size(), sub));
                best = std::min(best, res.length);
            }
            out["length"] = best;
        }
    }
    std::cout << out.dump() << "\n";
    return 0;
}

// ---------------------------------------------------------------- train

struct TrainOpts {
    std::string data;
    std::string out = ".";
    std::uint64_t seed = 0;
    int threads = 1;
    // tree
    std::string label_column = "class";
    int max_depth = 5;
    int min_leaf = 1;
    int folds = 10;
    // mars + select
    std::string target_column = "fitness";
    int max_terms = 45;
    int degree = 2;
    double threshold = std::sqrt(5e-5);
    int outer_k = 10;
    int select_max_terms = 9;
    int max_features = 8;
};

int cmd_train_tree(const TrainOpts& o) {
    const auto started = Clock::now();
    const CsvTable table = read_csv_file(o.data);
    const Dataset data = classification_dataset(table, o.label_column);

    RngStream cv_rng = RngStream(o.seed).child(0);
    const CvResult cv =
        cross_validate(data, tree_accuracy(o.max_depth, o.min_leaf), o.folds, cv_rng);
    const DecisionTree tree = fit_tree(data, o.max_depth, o.min_leaf);

    const fs::path out_dir(o.out);
    fs::create_directories(out_dir);
    open_out(out_dir / "model.json") << to_json(tree).dump(2) << "\n";
    const nlohmann::json report{{"cv_accuracy", cv.mean_metric},
                                {"fold_accuracy", cv.fold_metrics},
                                {"folds", o.folds}};
    open_out(out_dir / "report.json") << report.dump(2) << "\n";
    std::cerr << "train tree: cv accuracy " << format_sig(cv.mean_metric) << " over " << o.folds
              << " folds\n";

    const nlohmann::json config{{"label_column", o.label_column}, {"max_depth", o.max_depth},
                                {"min_leaf", o.min_leaf},         {"folds", o.folds},
                                {"threads", o.threads}};
    write_manifest(out_dir, "train tree", config, o.seed, {o.data},
                   {(out_dir / "model.json").string(), (out_dir / "report.json").string()},
                   started);
    return 0;
}

int cmd_train_mars(const TrainOpts& o) {
    const auto started = Clock::now();
    const CsvTable table = read_csv_file(o.data);
    const Dataset data = regression_dataset(table, o.target_column);

    RngStream model_rng = RngStream(o.seed).child(0);
    RngStream baseline_rng = RngStream(o.seed).child(0); // identical folds
    const CvResult cv = cross_validate(data, mars_rmse(o.max_terms, o.degree), o.folds, model_rng);
    const CvResult baseline =
        cross_validate(data, mean_predictor_rmse(), o.folds, baseline_rng);
    const MarsModel model = fit_mars(data, o.max_terms, o.degree);

    const fs::path out_dir(o.out);
    fs::create_directories(out_dir);
    open_out(out_dir / "model.json") << to_json(model).dump(2) << "\n";
    const nlohmann::json report{{"cv_rmse", cv.mean_metric},
                                {"fold_rmse", cv.fold_metrics},
                                {"baseline_rmse", baseline.mean_metric},
                                {"baseline_fold_rmse", baseline.fold_metrics},
                                {"folds", o.folds}};
    open_out(out_dir / "report.json") << report.dump(2) << "\n";
    std::cerr << "train mars: cv rmse " << format_sig(cv.mean_metric) << " vs mean-predictor "
              << format_sig(baseline.mean_metric) << "\n";

    const nlohmann::json config{{"target_column", o.target_column}, {"max_terms", o.max_terms},
                                {"degree", o.degree},               {"folds", o.folds},
                                {"threads", o.threads}};
    write_manifest(out_dir, "train mars", config, o.seed, {o.data},
                   {(out_dir / "model.json").string(), (out_dir / "report.json").string()},
                   started);
    return 0;
}

int cmd_train_select(const TrainOpts& o) {
    const auto started = Clock::now();
    const CsvTable table = read_csv_file(o.data);
    const Dataset data = regression_dataset(table, o.target_column);

    FsConfig cfg;
    cfg.threshold = o.threshold;
    cfg.outer_k = o.outer_k;
    cfg.mars_max_terms = o.select_max_terms;
    cfg.max_features = o.max_features;
    RngStream rng(o.seed);
    const SelectionTrace trace = forward_feature_selection(data, cfg, rng);

    const fs::path out_dir(o.out);
    fs::create_directories(out_dir);
    {
        std::ofstream csv = open_out(out_dir / "selection.csv");
        csv << "step,feature,inner_rmse\n";
        for (std::size_t s = 0; s < trace.steps.size(); ++s)
            csv << s << "," << trace.steps[s].feature << ","
                << format_sig(trace.steps[s].inner_rmse) << "\n";
    }
    open_out(out_dir / "selection.json") << to_json(trace).dump(2) << "\n";

    MarsModel model;
    if (trace.final_features.empty()) {
        model.columns = data.columns;
        model.intercept = mean(data.y);
    } else {
        model = fit_mars(select_columns(data, trace.final_features), cfg.mars_max_terms, 2);
    }
    open_out(out_dir / "model.json") << to_json(model).dump(2) << "\n";
    std::cerr << "train select: " << trace.final_features.size() << " features, outer rmse "
              << format_sig(trace.outer_rmse) << "\n";

    const nlohmann::json config{{"target_column", o.target_column},
                                {"threshold", o.threshold},
                                {"outer_k", o.outer_k},
                                {"max_terms", o.select_max_terms},
                                {"max_features", o.max_features},
                                {"threads", o.threads}};
    write_manifest(out_dir, "train select", config, o.seed, {o.data},
                   {(out_dir / "selection.csv").string(), (out_dir / "selection.json").string(),
                    (out_dir / "model.json").string()},
                   started);
    return 0;
}

// ---------------------------------------------------------------- predict

struct PredictOpts {
    std::string model;
    std::string data;
    std::string out = ".";
    std::string pdp_feature;
    int pdp_points = 50;
    std::uint64_t seed = 0;
    int threads = 1;
};

int cmd_predict(const PredictOpts& o) {
    const auto started = Clock::now();
    nlohmann::json model_json;
    {
        std::ifstream in(o.model);
        if (!in) throw std::runtime_error("cannot open: " + o.model);
        try {
            in >> model_json;
        } catch (const std::exception& e) {
            throw std::runtime_error(o.model + ": " + e.what());
        }
    }
    const std::string kind = model_json.value("model", std::string{});
    if (kind != "tree" && kind != "mars")
        throw std::runtime_error(o.model + ": unknown model kind '" + kind + "'");
    if (!o.pdp_feature.empty() && kind != "mars") {
        std::cerr << "error: --pdp requires a mars model\n";
        return 1;
    }

    const CsvTable table = read_csv_file(o.data);
    const Dataset data = feature_dataset(table);

    int id_col = table.column("instance_id");
    if (id_col < 0) id_col = table.column("pair_id");
    const auto row_id = [&](std::size_t r) {
        return id_col >= 0 ? table.rows[r][id_col] : std::to_string(r + 1);
    };

    const fs::path out_dir(o.out);
    fs::create_directories(out_dir);
    std::vector<std::string> outputs{(out_dir / "predictions.csv").string()};
    std::ofstream csv = open_out(out_dir / "predictions.csv");
    csv << "id,prediction\n";

    if (kind == "tree") {
        const DecisionTree tree = tree_from_json(model_json);
        std::vector<int> col_map(tree.columns.size());
        for (std::size_t j = 0; j < tree.columns.size(); ++j) {
            const int c = feature_index(tree.columns[j]);
            if (c < 0)
                throw std::runtime_error("model feature '" + tree.columns[j] +
                                         "' is not a known feature column");
            col_map[j] = c;
        }
        std::vector<double> input(tree.columns.size());
        for (std::size_t r = 0; r < data.x.size(); ++r) {
            for (std::size_t j = 0; j < input.size(); ++j) input[j] = data.x[r][col_map[j]];
            csv << row_id(r) << "," << predict_tree_label(tree, input) << "\n";
        }
    } else {
        const MarsModel model = mars_from_json(model_json);
        std::vector<int> col_map(model.columns.size());
        for (std::size_t j = 0; j < model.columns.size(); ++j) {
            const int c = feature_index(model.columns[j]);
            if (c < 0)
                throw std::runtime_error("model feature '" + model.columns[j] +
                                         "' is not a known feature column");
            col_map[j] = c;
        }
        std::vector<double> input(model.columns.size());
        for (std::size_t r = 0; r < data.x.size(); ++r) {
            for (std::size_t j = 0; j < input.size(); ++j) input[j] = data.x[r][col_map[j]];
            csv << row_id(r) << "," << format_sig(predict_mars(model, input)) << "\n";
        }

        if (!o.pdp_feature.empty()) {
            const int fcol = feature_index(o.pdp_feature);
            if (fcol < 0)
                throw std::runtime_error("--pdp feature '" + o.pdp_feature +
                                         "' is not a known feature column");
            std::vector<double> fvals(data.rows());
            for (int i = 0; i < data.rows(); ++i) fvals[i] = data.x[i][fcol];
            const std::vector<double> grid =
                linspace(vec_min(fvals), vec_max(fvals), o.pdp_points);
            const auto curve = weighted_partial_dependence(model, data, o.pdp_feature, grid);
            std::ofstream pdp = open_out(out_dir / "pdp.csv");
            pdp << "x,value\n";
            for (const PdpPoint& point : curve) {
                pdp << format_sig(point.x) << ",";
                if (point.defined) pdp << format_sig(point.value);
                pdp << "\n";
            }
            outputs.push_back((out_dir / "pdp.csv").string());
        }
    }

    const nlohmann::json config{{"pdp", o.pdp_feature}, {"pdp_points", o.pdp_points},
                                {"threads", o.threads}};
    write_manifest(out_dir, "predict", config, o.seed, {o.model, o.data}, outputs, started);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolve, measure, morph, and model TSP instances by 2-opt difficulty"};
    app.set_version_flag("--version", TSPLAB_VERSION);
    app.set_config("--config", "", "Read defaults from a config file (flags win)");
    app.require_subcommand(1);

    EvolveOpts eo;
    CLI::App* evolve_cmd = app.add_subcommand("evolve", "Evolve easy or hard instances");
    evolve_cmd->add_option("--class", eo.cls, "Instance class: easy, hard, or both")
        ->check(CLI::IsMember({"easy", "hard", "both"}))
        ->capture_default_str();
    evolve_cmd->add_option("--size", eo.size, "Points per instance")->capture_default_str();
    evolve_cmd->add_option("--count", eo.count, "Independent runs per class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evolve_cmd->add_option("--pop", eo.pop, "Population size")->capture_default_str();
    evolve_cmd->add_option("--generations", eo.generations, "Generations per run")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    evolve_cmd->add_option("--repetitions", eo.repetitions, "2-opt restarts per evaluation")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evolve_cmd->add_option("--cells", eo.cells, "Grid cells per axis for rounding")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evolve_cmd->add_option("--time-limit", eo.time_limit_s, "Wall-clock budget per run, seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evolve_cmd->add_option("--scheme", eo.scheme, "Rounding scheme")
        ->check(CLI::IsMember({"rnd", "nrnd"}))
        ->capture_default_str();
    evolve_cmd->add_option("--uniform-rate", eo.uniform_rate, "Uniform mutation rate")
        ->capture_default_str();
    evolve_cmd->add_option("--normal-rate", eo.normal_rate, "Normal mutation rate")
        ->capture_default_str();
    evolve_cmd->add_option("--normal-sd", eo.normal_sd, "Normal mutation standard deviation")
        ->capture_default_str();
    evolve_cmd->add_option("--seed", eo.seed, "Random seed")->capture_default_str();
    evolve_cmd->add_option("--out", eo.out, "Output directory")->capture_default_str();
    evolve_cmd->add_option("--threads", eo.threads, "Worker threads (reserved)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    FeaturesOpts fo;
    CLI::App* features_cmd =
        app.add_subcommand("features", "Extract the 47 structural features to CSV");
    features_cmd->add_option("inputs", fo.inputs, "Instance files or directories")->required();
    features_cmd->add_option("--out", fo.out, "Output directory")->capture_default_str();
    features_cmd->add_option("--seed", fo.seed, "Random seed (recorded only)")
        ->capture_default_str();
    features_cmd->add_option("--threads", fo.threads, "Worker threads (reserved)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    MorphOpts mo;
    CLI::App* morph_cmd =
        app.add_subcommand("morph", "Blend hard/easy instance pairs across alphas");
    morph_cmd->add_option("--hard", mo.hard_dir, "Directory of hard instances")->required();
    morph_cmd->add_option("--easy", mo.easy_dir, "Directory of easy instances")->required();
    morph_cmd->add_option("--alphas", mo.alphas, "Morphing coefficients")
        ->delimiter(',')
        ->capture_default_str();
    morph_cmd->add_option("--scheme", mo.scheme, "Rounding scheme")
        ->check(CLI::IsMember({"rnd", "nrnd"}))
        ->capture_default_str();
    morph_cmd->add_option("--cells", mo.cells, "Grid cells per axis for rounding")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    morph_cmd->add_option("--repetitions", mo.repetitions, "2-opt restarts per evaluation")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    morph_cmd->add_option("--normal-rate", mo.normal_rate, "Normal mutation rate (rnd only)")
        ->capture_default_str();
    morph_cmd->add_option("--normal-sd", mo.normal_sd, "Normal mutation sd (rnd only)")
        ->capture_default_str();
    morph_cmd->add_option("--seed", mo.seed, "Random seed")->capture_default_str();
    morph_cmd->add_option("--out", mo.out, "Output directory")->capture_default_str();
    morph_cmd->add_option("--threads", mo.threads, "Worker threads (reserved)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    SolveOpts so;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one instance and print JSON");
    solve_cmd->add_option("input", so.input, "Instance file")->required();
    solve_cmd->add_option("--method", so.method, "Solver")
        ->check(CLI::IsMember({"two-opt", "exact"}))
        ->capture_default_str();
    solve_cmd->add_option("--repetitions", so.repetitions, "2-opt restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    solve_cmd->add_option("--seed", so.seed, "Random seed")->capture_default_str();

    TrainOpts to;
    CLI::App* train_cmd = app.add_subcommand("train", "Fit models on feature CSVs");
    train_cmd->require_subcommand(1);
    CLI::App* tree_cmd = train_cmd->add_subcommand("tree", "Classification tree + CV accuracy");
    CLI::App* mars_cmd = train_cmd->add_subcommand("mars", "Hinge regression + CV RMSE");
    CLI::App* select_cmd =
        train_cmd->add_subcommand("select", "Nested-resampling forward feature selection");
    for (CLI::App* sub : {tree_cmd, mars_cmd, select_cmd}) {
        sub->add_option("--data", to.data, "Feature CSV")->required();
        sub->add_option("--out", to.out, "Output directory")->capture_default_str();
        sub->add_option("--seed", to.seed, "Random seed")->capture_default_str();
        sub->add_option("--threads", to.threads, "Worker threads (reserved)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }
    tree_cmd->add_option("--label-column", to.label_column, "Class label column")
        ->capture_default_str();
    tree_cmd->add_option("--max-depth", to.max_depth, "Tree depth limit")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    tree_cmd->add_option("--min-leaf", to.min_leaf, "Minimum rows per leaf")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    tree_cmd->add_option("--folds", to.folds, "Cross-validation folds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    mars_cmd->add_option("--target-column", to.target_column, "Regression target column")
        ->capture_default_str();
    mars_cmd->add_option("--max-terms", to.max_terms, "Forward-pass term limit")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    mars_cmd->add_option("--degree", to.degree, "Maximum hinges per term")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    mars_cmd->add_option("--folds", to.folds, "Cross-validation folds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    select_cmd->add_option("--target-column", to.target_column, "Regression target column")
        ->capture_default_str();
    select_cmd->add_option("--threshold", to.threshold, "Minimum RMSE improvement to add")
        ->capture_default_str();
    select_cmd->add_option("--outer-k", to.outer_k, "Outer cross-validation folds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    select_cmd->add_option("--max-terms", to.select_max_terms, "Inner MARS term limit")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    select_cmd->add_option("--max-features", to.max_features, "Selection size cap")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    PredictOpts po;
    CLI::App* predict_cmd = app.add_subcommand("predict", "Apply a model JSON to a feature CSV");
    predict_cmd->add_option("--model", po.model, "Model JSON")->required();
    predict_cmd->add_option("--data", po.data, "Feature CSV")->required();
    predict_cmd->add_option("--out", po.out, "Output directory")->capture_default_str();
    predict_cmd->add_option("--pdp", po.pdp_feature, "Also write the dependence curve CSV");
    predict_cmd->add_option("--pdp-points", po.pdp_points, "Grid points for the curve")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    predict_cmd->add_option("--seed", po.seed, "Random seed (recorded only)")
        ->capture_default_str();
    predict_cmd->add_option("--threads", po.threads, "Worker threads (reserved)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (evolve_cmd->parsed()) return cmd_evolve(eo);
        if (features_cmd->parsed()) return cmd_features(fo);
        if (morph_cmd->parsed()) return cmd_morph(mo);
        if (solve_cmd->parsed()) return cmd_solve(so);
        if (train_cmd->parsed()) {
            if (tree_cmd->parsed()) return cmd_train_tree(to);
            if (mars_cmd->parsed()) return cmd_train_mars(to);
            return cmd_train_select(to);
        }
        if (predict_cmd->parsed()) return cmd_predict(po);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
