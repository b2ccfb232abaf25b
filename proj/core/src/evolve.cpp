#include "tsplab/evolve.hpp"

#include <cstring>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "tsplab/io.hpp"
#include "tsplab/stats.hpp"

namespace tsplab {

std::string to_string(Objective o) { return o == Objective::easy ? "easy" : "hard"; }

Objective objective_from_string(const std::string& s) {
    if (s == "easy") return Objective::easy;
    if (s == "hard") return Objective::hard;
    throw std::invalid_argument("unknown objective: " + s);
}

nlohmann::json to_json(const EaConfig& cfg) {
    return nlohmann::json{{"pop_size", cfg.pop_size},
                          {"inst_size", cfg.inst_size},
                          {"generations", cfg.generations},
                          {"time_limit_ms", cfg.time_limit.count()},
                          {"cells", cfg.cells},
                          {"repetitions", cfg.repetitions},
                          {"objective", to_string(cfg.objective)},
                          {"rounding_scheme", to_string(cfg.rounding_scheme)},
                          {"uniform_mutation_rate", cfg.uniform_mutation_rate},
                          {"normal_mutation_rate", cfg.normal_mutation_rate},
                          {"normal_mutation_sd", cfg.normal_mutation_sd},
                          {"seed", cfg.seed}};
}

nlohmann::json to_json(const EaRun& run) {
    nlohmann::json finals = nlohmann::json::array();
    for (const Instance& inst : run.final_population) finals.push_back(instance_to_json(inst));
    return nlohmann::json{{"config", to_json(run.config)},
                          {"trace", run.fitness_trace},
                          {"elite",
                           {{"instance", instance_to_json(run.elite_instance)},
                            {"fitness", to_json(run.elite_fitness)}}},
                          {"final_population", std::move(finals)},
                          {"final_fitness", run.final_fitness},
                          {"generations_executed", run.generations_executed}};
}

void write_trace_csv(const EaRun& run, std::ostream& out) {
    out << "generation,min,mean,max\n";
    for (std::size_t g = 0; g < run.fitness_trace.size(); ++g) {
        const auto& ratios = run.fitness_trace[g];
        out << g << "," << format_sig(vec_min(ratios)) << "," << format_sig(mean(ratios)) << ","
            << format_sig(vec_max(ratios)) << "\n";
    }
}

namespace {

// Substream roles; combined with generation and slot they key all randomness.
constexpr std::uint64_t kInitTag = 1;
constexpr std::uint64_t kFitnessTag = 2;
constexpr std::uint64_t kBreedingTag = 3;

bool better(double a, double b, Objective objective) {
    return objective == Objective::hard ? a > b : a < b;
}

void validate(const EaConfig& cfg) {
    if (cfg.pop_size < 2) throw std::invalid_argument("evolve: pop_size must be at least 2");
    if (cfg.inst_size < 4) throw std::invalid_argument("evolve: inst_size must be at least 4");
    if (cfg.inst_size > kDefaultExactCap)
        throw CapacityError("evolve: inst_size " + std::to_string(cfg.inst_size) +
                            " exceeds the exact solver cap of " +
                            std::to_string(kDefaultExactCap));
    if (cfg.generations < 0) throw std::invalid_argument("evolve: generations must be >= 0");
    if (cfg.cells <= 0) throw std::invalid_argument("evolve: cells must be positive");
    if (cfg.repetitions <= 0) throw std::invalid_argument("evolve: repetitions must be positive");
    if (cfg.time_limit.count() <= 0)
        throw std::invalid_argument("evolve: time_limit must be positive");
}

std::string coordinate_key(const Instance& inst) {
    std::string key(inst.points.size() * sizeof(Point), '\0');
    std::memcpy(key.data(), inst.points.data(), key.size());
    return key;
}

} // namespace

std::vector<Instance> create_mating_pool(int pool_size, const std::vector<Instance>& population,
                                         const std::vector<double>& fitness, Objective objective,
                                         RngStream& rng) {
    if (pool_size < 1) throw std::invalid_argument("create_mating_pool: pool_size must be >= 1");
    if (population.empty() || population.size() != fitness.size())
        throw std::invalid_argument("create_mating_pool: population and fitness sizes differ");
    std::vector<Instance> pool;
    pool.reserve(pool_size);
    for (int i = 0; i < pool_size; ++i) {
        const std::size_t a = rng.below(population.size());
        const std::size_t b = rng.below(population.size());
        pool.push_back(better(fitness[b], fitness[a], objective) ? population[b] : population[a]);
    }
    return pool;
}

int elite_of(const std::vector<double>& fitness, Objective objective) {
    if (fitness.empty()) throw std::invalid_argument("elite_of: empty fitness vector");
    int best = 0;
    for (int i = 1; i < static_cast<int>(fitness.size()); ++i)
        if (better(fitness[i], fitness[best], objective)) best = i;
    return best;
}

EaRun evolve(const EaConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const RngStream root(cfg.seed);
    const int pool_size = cfg.pop_size / 2;

    std::vector<Instance> population(cfg.pop_size);
    for (int i = 0; i < cfg.pop_size; ++i) {
        RngStream r = root.child(kInitTag, static_cast<std::uint64_t>(i));
        Instance inst = random_instance(cfg.inst_size, r);
        inst = rescale(inst).instance;
        inst = round_to_grid(inst, cfg.cells);
        if (cfg.rounding_scheme == RoundingScheme::rnd) {
            inst = normal_mutation(inst, cfg.normal_mutation_rate, cfg.normal_mutation_sd, r);
            inst = cut_to_boundary(inst);
        }
        population[i] = std::move(inst);
    }

    EaRun run;
    run.config = cfg;
    bool have_elite = false;

    // Optimal tour lengths are deterministic per coordinate set, and the
    // elite (plus converged offspring) recurs across generations, so the
    // exact-solver work is cached by raw coordinate bytes.
    std::unordered_map<std::string, double> optimal_cache;

    auto evaluate = [&](int generation) {
        std::vector<double> ratios(cfg.pop_size);
        for (int i = 0; i < cfg.pop_size; ++i) {
            const DistanceMatrix dm = distance_matrix(population[i]);
            double& optimal = optimal_cache[coordinate_key(population[i])];
            if (optimal == 0.0) optimal = exact_tour(dm).length;
            RngStream r = root.child(kFitnessTag, static_cast<std::uint64_t>(generation),
                                     static_cast<std::uint64_t>(i));
            FitnessValue f = compute_fitness(dm, optimal, cfg.repetitions, r);
            ratios[i] = f.ratio;
            if (!have_elite || better(f.ratio, run.elite_fitness.ratio, cfg.objective)) {
                have_elite = true;
                run.elite_instance = population[i];
                run.elite_fitness = std::move(f);
            }
        }
        run.fitness_trace.push_back(ratios);
        return ratios;
    };

    std::vector<double> fitness = evaluate(0);
    for (int gen = 1; gen <= cfg.generations; ++gen) {
        if (std::chrono::steady_clock::now() - start > cfg.time_limit) break;

        RngStream breed = root.child(kBreedingTag, static_cast<std::uint64_t>(gen));
        const std::vector<Instance> pool =
            create_mating_pool(pool_size, population, fitness, cfg.objective, breed);

        std::vector<Instance> next(cfg.pop_size);
        next[0] = population[elite_of(fitness, cfg.objective)];
        for (int k = 1; k < cfg.pop_size; ++k) {
            const Instance& p1 = pool[breed.below(pool.size())];
            const Instance& p2 = pool[breed.below(pool.size())];
            Instance off = uniform_crossover(p1, p2, breed);
            off = uniform_mutation(off, cfg.uniform_mutation_rate, breed);
            if (cfg.rounding_scheme == RoundingScheme::nrnd)
                off = normal_mutation(off, cfg.normal_mutation_rate, cfg.normal_mutation_sd,
                                      breed);
            off = rescale(off).instance;
            off = round_to_grid(off, cfg.cells);
            if (cfg.rounding_scheme == RoundingScheme::rnd) {
                off = normal_mutation(off, cfg.normal_mutation_rate, cfg.normal_mutation_sd,
                                      breed);
                off = cut_to_boundary(off);
            }
            next[k] = std::move(off);
        }
        population = std::move(next);
        fitness = evaluate(gen);
    }

    run.final_population = std::move(population);
    run.final_fitness = std::move(fitness);
    run.generations_executed = static_cast<int>(run.fitness_trace.size());
    run.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    return run;
}

} // namespace tsplab
