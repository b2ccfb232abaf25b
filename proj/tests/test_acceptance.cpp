// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line; the exit status is zero only when every criterion holds. The slow
// evolutionary runs are shared between the criteria that need them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "tsplab/dataset.hpp"
#include "tsplab/evolve.hpp"
#include "tsplab/features.hpp"
#include "tsplab/geometry.hpp"
#include "tsplab/instance.hpp"
#include "tsplab/io.hpp"
#include "tsplab/mars.hpp"
#include "tsplab/morph.hpp"
#include "tsplab/rng.hpp"
#include "tsplab/solver.hpp"
#include "tsplab/stats.hpp"
#include "tsplab/validation.hpp"

namespace fs = std::filesystem;
using namespace tsplab;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool near(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(6) << v;
    return ss.str();
}

void criterion(int id, const std::string& label, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::ostringstream line;
    line << "criterion " << std::setw(2) << std::setfill('0') << id << ": "
         << (pass ? "PASS" : "FAIL") << "  " << label;
    if (!detail.empty()) line << "  [" << detail << "]";
    std::cout << line.str() << std::endl;
    if (!pass) ++g_failures;
}

Instance convex_instance(int n, RngStream& rng) {
    std::vector<double> angles(n);
    for (double& a : angles) a = rng.uniform() * 2.0 * std::numbers::pi;
    std::sort(angles.begin(), angles.end());
    Instance inst;
    inst.name = "convex";
    for (double a : angles)
        inst.points.push_back({0.5 + 0.4 * std::cos(a), 0.5 + 0.4 * std::sin(a)});
    return inst;
}

Instance unit_square() {
    Instance inst;
    inst.name = "square";
    inst.points = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    return inst;
}

/// The full-scale evolution runs shared by criteria 4, 5, 8, and 12.
struct EvolvedRuns {
    std::vector<EaRun> hard;
    std::vector<EaRun> easy;
    double hard_seconds = 0.0;
    double easy_seconds = 0.0;
};

const EvolvedRuns& evolved_runs() {
    static const EvolvedRuns runs = [] {
        EvolvedRuns r;
        EaConfig cfg;
        for (int k = 0; k < 10; ++k) {
            std::cerr << "  evolving hard run " << k << "\n";
            cfg.objective = Objective::hard;
            cfg.seed = 1000 + k;
            const auto t0 = Clock::now();
            r.hard.push_back(evolve(cfg));
            r.hard_seconds += seconds_since(t0);
        }
        for (int k = 0; k < 10; ++k) {
            std::cerr << "  evolving easy run " << k << "\n";
            cfg.objective = Objective::easy;
            cfg.seed = 2000 + k;
            const auto t0 = Clock::now();
            r.easy.push_back(evolve(cfg));
            r.easy_seconds += seconds_since(t0);
        }
        return r;
    }();
    return runs;
}

double mean_elite_ratio(const std::vector<EaRun>& runs) {
    std::vector<double> ratios;
    for (const EaRun& run : runs) ratios.push_back(run.elite_fitness.ratio);
    return mean(ratios);
}

/// Indices of the k best final members under the run's own objective.
std::vector<int> best_members(const EaRun& run, int k) {
    std::vector<int> idx(run.final_fitness.size());
    std::iota(idx.begin(), idx.end(), 0);
    const bool maximize = run.config.objective == Objective::hard;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return maximize ? run.final_fitness[a] > run.final_fitness[b]
                        : run.final_fitness[a] < run.final_fitness[b];
    });
    idx.resize(k);
    return idx;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const int status = std::system((std::string(TSPLAB_CLI_PATH) + " " + args).c_str());
    return (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> dir_contents(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            files[fs::relative(entry.path(), root).string()] = slurp(entry.path());
    return files;
}

} // namespace

int main() {
    criterion(1, "dynamic-programming solver matches brute force on 50 instances", [](std::string& detail) {
        RngStream rng(101);
        const auto t0 = Clock::now();
        double max_diff = 0.0;
        for (int k = 0; k < 50; ++k) {
            RngStream sub = rng.child(k);
            const Instance inst = random_instance(8, sub);
            const DistanceMatrix dm = distance_matrix(inst);
            const double exact = exact_tour(dm).length;
            const double brute = brute_force_tour(dm).length;
            max_diff = std::max(max_diff, std::abs(exact - brute));
        }
        const double elapsed = seconds_since(t0);
        detail = "max diff " + fmt(max_diff) + ", " + fmt(elapsed) + " s";
        return max_diff <= 1e-9 && elapsed < 10.0;
    });

    criterion(2, "local search output survives an exhaustive exchange audit", [](std::string& detail) {
        RngStream rng(202);
        int audited = 0;
        for (int k = 0; k < 100; ++k) {
            const int n = 8 + k % 8;
            RngStream sub = rng.child(k);
            const Instance inst = random_instance(n, sub);
            const DistanceMatrix dm = distance_matrix(inst);
            const SolveResult res = two_opt(dm, random_tour(n, sub));
            if (oracle::has_improving_exchange(dm, res.tour, 1e-9)) {
                detail = "improving exchange left at instance " + std::to_string(k);
                return false;
            }
            if (n <= 10 && res.length < brute_force_tour(dm).length - 1e-9) {
                detail = "local optimum beat the brute-force optimum at " + std::to_string(k);
                return false;
            }
            ++audited;
        }
        detail = std::to_string(audited) + " instances audited";
        return true;
    });

    criterion(3, "convex-position instances score a ratio of exactly 1", [](std::string& detail) {
        RngStream rng(303);
        for (int k = 0; k < 20; ++k) {
            RngStream sub = rng.child(k);
            const Instance inst = convex_instance(6 + k % 10, sub);
            const FitnessValue f = compute_fitness(inst, 10, sub);
            if (f.ratio != 1.0) {
                detail = "instance " + std::to_string(k) + " ratio " + fmt(f.ratio);
                return false;
            }
            for (double len : f.lengths)
                if (len != f.optimal_length) {
                    detail = "instance " + std::to_string(k) + " repetition missed the optimum";
                    return false;
                }
        }
        detail = "20 instances, every repetition bit-equal to the optimum";
        return true;
    });

    criterion(4, "evolution separates easy from hard instances", [](std::string& detail) {
        const EvolvedRuns& runs = evolved_runs();
        const double hard_mean = mean_elite_ratio(runs.hard);
        const double easy_mean = mean_elite_ratio(runs.easy);
        detail = "hard mean " + fmt(hard_mean) + ", easy mean " + fmt(easy_mean) + ", " +
                 fmt(runs.hard_seconds) + "/" + fmt(runs.easy_seconds) + " s";
        return hard_mean >= 1.03 && easy_mean <= 1.005 && hard_mean - easy_mean >= 0.03 &&
               runs.hard_seconds <= 900.0 && runs.easy_seconds <= 900.0;
    });

    criterion(5, "every evolution trace is monotone in the best-so-far ratio", [](std::string& detail) {
        const EvolvedRuns& runs = evolved_runs();
        int checked = 0;
        for (const std::vector<EaRun>* side : {&runs.hard, &runs.easy}) {
            for (const EaRun& run : *side) {
                const bool maximize = run.config.objective == Objective::hard;
                double best = maximize ? -1.0 : std::numeric_limits<double>::infinity();
                for (const std::vector<double>& generation : run.fitness_trace) {
                    const double g = maximize ? vec_max(generation) : vec_min(generation);
                    const double next = maximize ? std::max(best, g) : std::min(best, g);
                    if (maximize ? next < best : next > best) {
                        detail = "best-so-far worsened";
                        return false;
                    }
                    best = next;
                }
                if (run.elite_fitness.ratio != best) {
                    detail = "recorded elite " + fmt(run.elite_fitness.ratio) +
                             " != trace best " + fmt(best);
                    return false;
                }
                ++checked;
            }
        }
        detail = std::to_string(checked) + " traces, elite equal to the running best";
        return true;
    });

    criterion(6, "features match analytic values and ignore point order", [](std::string& detail) {
        const FeatureVector f = extract_features(unit_square());
        const double r2 = std::sqrt(2.0);
        const std::vector<std::pair<std::string, double>> expected = {
            {"distance_min", 1.0},
            {"distance_max", r2},
            {"distance_mean", (4.0 + 2.0 * r2) / 6.0},
            {"distance_mean_tour_length", (4.0 + 2.0 * r2) * 2.0 / 3.0},
            {"nnds_min", 1.0},
            {"nnds_max", 1.0},
            {"centroid_x", 0.5},
            {"centroid_y", 0.5},
            {"centroid_mean_distance_to_centroid", r2 / 2.0},
            {"mst_dists_sum", 3.0 / (4.0 + 2.0 * r2)},
            {"mst_depth_max", 2.0},
            {"angle_min", std::numbers::pi / 2.0},
            {"angle_mean", std::numbers::pi / 2.0},
            {"angle_max", std::numbers::pi / 2.0},
            {"chull_area", 1.0},
        };
        for (const auto& [name, value] : expected) {
            const int idx = feature_index(name);
            if (idx < 0 || !near(f[idx], value, 1e-9)) {
                detail = name + " = " + fmt(f[idx]) + ", expected " + fmt(value);
                return false;
            }
        }

        RngStream rng(606);
        for (int k = 0; k < 10; ++k) {
            RngStream sub = rng.child(k);
            Instance inst = random_instance(10 + k, sub);
            const FeatureVector base = extract_features(inst);
            for (int shuffle = 0; shuffle < 20; ++shuffle) {
                for (int i = inst.size() - 1; i > 0; --i) {
                    const int j = static_cast<int>(sub.below(i + 1));
                    std::swap(inst.points[i], inst.points[j]);
                }
                const FeatureVector shuffled = extract_features(inst);
                for (std::size_t c = 0; c < shuffled.size(); ++c)
                    if (!near(shuffled[c], base[c], 1e-9)) {
                        detail = feature_names()[c] + " changed under reordering";
                        return false;
                    }
            }
        }
        detail = "15 analytic values, 10 instances x 20 shuffles";
        return true;
    });

    criterion(7, "expected tour length agrees with Monte Carlo sampling", [](std::string& detail) {
        RngStream rng(707);
        const int idx = feature_index("distance_mean_tour_length");
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            RngStream sub = rng.child(i);
            const Instance inst = random_instance(20, sub);
            const double analytic = extract_features(inst)[idx];
            const DistanceMatrix dm = distance_matrix(inst);
            double total = 0.0;
            for (int t = 0; t < 100000; ++t) total += tour_length(dm, random_tour(20, sub));
            const double sampled = total / 100000.0;
            worst = std::max(worst, std::abs(analytic - sampled) / sampled);
        }
        detail = "worst relative gap " + fmt(worst);
        return worst <= 0.02;
    });

    criterion(8, "a depth-2 tree on two features separates the classes", [](std::string& detail) {
        const EvolvedRuns& runs = evolved_runs();
        Dataset d;
        d.columns = {"angle_mean", "distance_max"};
        d.target_kind = TargetKind::classification;
        d.class_names = {"easy", "hard"};
        const int a = feature_index("angle_mean");
        const int b = feature_index("distance_max");
        for (const std::vector<EaRun>* side : {&runs.easy, &runs.hard}) {
            for (const EaRun& run : *side) {
                for (int m : best_members(run, 3)) {
                    const FeatureVector f = extract_features(run.final_population[m]);
                    d.x.push_back({f[a], f[b]});
                    d.y.push_back(side == &runs.hard ? 1.0 : 0.0);
                }
            }
        }
        RngStream rng(808);
        const CvResult cv = cross_validate(d, tree_accuracy(2, 1), 10, rng);
        detail = std::to_string(d.rows()) + " rows, cv accuracy " + fmt(cv.mean_metric);
        return cv.mean_metric >= 0.85;
    });

    criterion(9, "greedy matching beats random and respects the optimum", [](std::string& detail) {
        RngStream rng(909);
        int wins = 0;
        for (int k = 0; k < 200; ++k) {
            RngStream sub = rng.child(k);
            const Instance a = random_instance(25, sub);
            const Instance b = random_instance(25, sub);
            const Matching greedy = greedy_point_matching(a, b);
            const Matching random = random_point_matching(a, b, sub);
            if (greedy.total_distance <= random.total_distance + 1e-12) ++wins;
        }
        for (int k = 0; k < 20; ++k) {
            RngStream sub = rng.child(1000 + k);
            const int n = 4 + k % 4;
            const Instance a = random_instance(n, sub);
            const Instance b = random_instance(n, sub);
            const double greedy = greedy_point_matching(a, b).total_distance;
            const double optimal = oracle::optimal_assignment_cost(a, b);
            if (greedy < optimal - 1e-12) {
                detail = "greedy beat the optimal assignment at trial " + std::to_string(k);
                return false;
            }
        }
        detail = std::to_string(wins) + "/200 wins over random matching";
        return wins >= 190;
    });

    criterion(10, "morphing endpoints reproduce the processed inputs", [](std::string& detail) {
        RngStream rng(1010);
        MorphParams params;
        params.rounding_scheme = RoundingScheme::nrnd;
        for (int k = 0; k < 10; ++k) {
            RngStream sub = rng.child(k);
            const Instance hard = random_instance(15, sub);
            const Instance easy = random_instance(15, sub);

            const Instance at_one = morph(hard, easy, 1.0, params, sub);
            const Instance hard_ref = round_to_grid(rescale(hard).instance, params.cells);
            for (int i = 0; i < at_one.size(); ++i)
                if (at_one.points[i].x != hard_ref.points[i].x ||
                    at_one.points[i].y != hard_ref.points[i].y) {
                    detail = "alpha=1 differs from the processed first input";
                    return false;
                }

            const Instance at_zero = morph(hard, easy, 0.0, params, sub);
            const Instance easy_ref = round_to_grid(rescale(easy).instance, params.cells);
            auto key = [](const Point& p) { return std::pair<double, double>(p.x, p.y); };
            std::multiset<std::pair<double, double>> got, want;
            for (const Point& p : at_zero.points) got.insert(key(p));
            for (const Point& p : easy_ref.points) want.insert(key(p));
            if (got != want) {
                detail = "alpha=0 differs from the processed second input";
                return false;
            }
        }
        detail = "10 pairs, both endpoints exact";
        return true;
    });

    criterion(11, "hinge regression recovers a planted kink", [](std::string& detail) {
        Dataset d;
        d.columns = {"x"};
        for (int i = 0; i < 200; ++i) {
            const double x = i / 200.0;
            d.x.push_back({x});
            d.y.push_back(std::max(0.0, x - 0.5));
        }
        const MarsModel m = fit_mars(d, 20, 2);
        if (m.terms.size() != 1 || m.terms[0].factors.size() != 1) {
            detail = "expected a single one-factor term, got " + std::to_string(m.terms.size()) +
                     " terms";
            return false;
        }
        const HingeFactor& h = m.terms[0].factors[0];
        double sse = 0.0;
        for (int i = 0; i < d.rows(); ++i) {
            const double r = predict_mars(m, d.x[i]) - d.y[i];
            sse += r * r;
        }
        const double rmse = std::sqrt(sse / d.rows());
        detail = "knot " + fmt(h.knot) + ", training rmse " + fmt(rmse);
        return h.dir == 1 && std::abs(h.knot - 0.5) <= 0.02 && rmse < 1e-6;
    });

    criterion(12, "hinge regression explains morphed-instance hardness", [](std::string& detail) {
        const EvolvedRuns& runs = evolved_runs();
        const std::vector<double> alphas(std::begin(kDefaultAlphas), std::end(kDefaultAlphas));
        const MorphParams params;
        RngStream rng(1212);
        Dataset d;
        d.columns = feature_names();
        for (int i = 0; i < 10; ++i) {
            std::cerr << "  morph pair " << i << "\n";
            RngStream sub = rng.child(i);
            const auto sequence = morph_sequence(runs.hard[i].elite_instance,
                                                 runs.easy[i].elite_instance, alphas, params, sub);
            for (std::size_t k = 0; k < sequence.size(); ++k) {
                const Instance& inst = sequence[k].second;
                RngStream frng = sub.child(k);
                const FitnessValue f = compute_fitness(inst, 50, frng);
                const FeatureVector feats = extract_features(inst);
                d.x.emplace_back(feats.begin(), feats.end());
                d.y.push_back(f.ratio);
            }
        }
        RngStream r1(4242);
        RngStream r2(4242);
        const CvResult model = cross_validate(d, mars_rmse(15, 2), 10, r1);
        const CvResult baseline = cross_validate(d, mean_predictor_rmse(), 10, r2);
        detail = std::to_string(d.rows()) + " rows, cv rmse " + fmt(model.mean_metric) +
                 " vs baseline " + fmt(baseline.mean_metric);
        return model.mean_metric <= 0.5 * baseline.mean_metric;
    });

    criterion(13, "forward selection finds two planted features and stops", [](std::string& detail) {
        RngStream rng(1313);
        Dataset d;
        d.columns = feature_names();
        const int a = feature_index("angle_mean");
        const int b = feature_index("distance_max");
        for (int r = 0; r < 150; ++r) {
            std::vector<double> row(d.columns.size());
            for (double& v : row) v = rng.uniform();
            d.y.push_back(2.0 * row[a] - 1.5 * row[b]);
            d.x.push_back(std::move(row));
        }
        FsConfig cfg;
        cfg.outer_k = 10;
        cfg.max_features = 12;
        RngStream srng(1414);
        const SelectionTrace trace = forward_feature_selection(d, cfg, srng);

        const std::set<std::string> planted = {"angle_mean", "distance_max"};
        int first_two = 0;
        std::size_t largest = 0;
        for (const std::vector<std::string>& fold : trace.fold_selections) {
            largest = std::max(largest, fold.size());
            if (fold.size() >= 2 && std::set<std::string>{fold[0], fold[1]} == planted)
                ++first_two;
        }
        for (std::size_t i = 1; i < trace.steps.size(); ++i)
            if (trace.steps[i].inner_rmse > trace.steps[i - 1].inner_rmse + 1e-12) {
                detail = "inner rmse increased at step " + std::to_string(i);
                return false;
            }
        detail = std::to_string(first_two) + "/10 folds led with both, longest selection " +
                 std::to_string(largest);
        return first_two >= 8 && largest < static_cast<std::size_t>(cfg.max_features);
    });

    criterion(14, "instance files round-trip and the CLI is reproducible", [](std::string& detail) {
        RngStream rng(1441);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            RngStream sub = rng.child(k);
            const Instance inst = random_instance(5 + k, sub);
            std::stringstream buffer;
            write_tsplib(inst, buffer);
            const Instance back = read_tsplib(buffer);
            if (back.size() != inst.size()) {
                detail = "round-trip changed the instance size";
                return false;
            }
            for (int i = 0; i < inst.size(); ++i) {
                worst = std::max(worst, std::abs(back.points[i].x - inst.points[i].x));
                worst = std::max(worst, std::abs(back.points[i].y - inst.points[i].y));
            }
        }
        if (worst > 1e-6) {
            detail = "round-trip moved a coordinate by " + fmt(worst);
            return false;
        }

        const fs::path root = fs::temp_directory_path() / "tsplab_acceptance";
        fs::remove_all(root);
        fs::create_directories(root);
        const std::string args = "evolve --size 10 --count 1 --pop 6 --generations 8 "
                                 "--repetitions 10 --seed 99 --out ";
        const std::string quiet = " > /dev/null 2>&1";
        if (run_cli(args + (root / "a").string() + quiet) != 0 ||
            run_cli(args + (root / "b").string() + quiet) != 0) {
            detail = "command-line run failed";
            return false;
        }
        const auto fa = dir_contents(root / "a");
        const auto fb = dir_contents(root / "b");
        if (fa.size() != fb.size()) {
            detail = "repeated runs produced different file sets";
            return false;
        }
        for (const auto& [rel, bytes] : fa) {
            if (rel == "manifest.json") continue;
            if (!fb.count(rel) || fb.at(rel) != bytes) {
                detail = "repeated runs differ at " + rel;
                return false;
            }
        }
        detail = "worst coordinate gap " + fmt(worst) + ", repeated runs byte-identical";
        return true;
    });

    if (g_failures == 0) {
        std::cout << "all 14 criteria passed" << std::endl;
        return 0;
    }
    std::cout << g_failures << " criteria failed" << std::endl;
    return 1;
}
