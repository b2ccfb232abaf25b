#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsplab/instance.hpp"
#include "tsplab/solver.hpp"

namespace tsplab {

enum class Objective { easy, hard };

std::string to_string(Objective o);
Objective objective_from_string(const std::string& s);

struct EaConfig {
    int pop_size = 16;
    int inst_size = 15;
    int generations = 200;
    std::chrono::milliseconds time_limit = std::chrono::minutes(15);
    int cells = 100;
    int repetitions = 50;
    Objective objective = Objective::hard;
    RoundingScheme rounding_scheme = RoundingScheme::rnd;
    double uniform_mutation_rate = 0.001;
    double normal_mutation_rate = 0.01;
    double normal_mutation_sd = 0.025;
    std::uint64_t seed = 0;
};

nlohmann::json to_json(const EaConfig& cfg);

struct EaRun {
    EaConfig config;
    // One entry per evaluated population (the initial population included),
    // holding every member's approximation ratio.
    std::vector<std::vector<double>> fitness_trace;
    Instance elite_instance;        // best individual ever evaluated
    FitnessValue elite_fitness;
    std::vector<Instance> final_population;
    std::vector<double> final_fitness;
    int generations_executed = 0;   // = fitness_trace.size()
    std::chrono::milliseconds wall_time{0};
};

/// JSON form carries config, trace, elite, and the final population, but no
/// timing, so files produced under a fixed seed are byte-stable.
nlohmann::json to_json(const EaRun& run);

/// Per-generation fitness summary: "generation,min,mean,max" rows.
void write_trace_csv(const EaRun& run, std::ostream& out);

/// One round of binary tournaments: each pool slot draws two members
/// uniformly with replacement and keeps the fitter per objective.
std::vector<Instance> create_mating_pool(int pool_size, const std::vector<Instance>& population,
                                         const std::vector<double>& fitness, Objective objective,
                                         RngStream& rng);

/// Index of the best fitness per objective; ties go to the lowest index.
int elite_of(const std::vector<double>& fitness, Objective objective);

/// Evolve instances that are easy or hard for 2-opt. Per generation: evaluate
/// everyone, carry the single best unchanged, and refill from tournament
/// winners via uniform crossover and mutation; offspring are renormalized to
/// the unit square and snapped to the cells grid, with normal mutation applied
/// before rounding (nrnd) or after it with boundary clamping (rnd). Stops
/// after `generations` breeding steps or once the time limit is hit (checked
/// between generations). All randomness is keyed to (seed, role, generation,
/// index), so runs are reproducible regardless of evaluation order.
EaRun evolve(const EaConfig& cfg);

} // namespace tsplab
