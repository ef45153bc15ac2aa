#ifndef MEMBIN_GA_HPP
#define MEMBIN_GA_HPP

#include <chrono>
#include <limits>
#include <utility>
#include <vector>

#include "membin/model.hpp"
#include "membin/nfd.hpp"
#include "membin/rng.hpp"

namespace membin {

enum class MutationOp { swap, nfd };

struct Budget {
    double max_seconds = 300.0;
    long long max_rounds = -1;  // generations or annealing iterations; -1 = unlimited
};

struct GaParams {
    int population_size = 50;
    int tournament_size = 5;
    double p_mut = 0.3;
    NfdParams nfd;
    MutationOp mutation_operator = MutationOp::nfd;
    double layer_mix_weight = 0.25;
    Budget budget;
    int stall_generations = 200;
};

struct RunLogEntry {
    double elapsed_seconds = 0.0;
    long long best_cost = 0;
};

// Timestamped best-cost trace; one entry per improvement event.
struct RunLog {
    std::vector<RunLogEntry> entries;
    PackingSolution best;
};

// Weighted sum of BRAM cost and the per-bin surplus layer count. Lower is
// better.
inline double fitness(const PackingSolution& solution, double layer_mix_weight,
                      const AcceleratorSpec& spec, const CostModel& model) {
    double score = static_cast<double>(solution_cost(solution, spec, model));
    if (layer_mix_weight != 0.0) {
        long long surplus = 0;
        for (const auto& bin : solution.bins) {
            std::set<int> layers;
            for (int id : bin.buffers) {
                layers.insert(spec.buffers.at(static_cast<std::size_t>(id)).layer_id);
            }
            if (layers.size() > 1) surplus += static_cast<long long>(layers.size()) - 1;
        }
        score += layer_mix_weight * static_cast<double>(surplus);
    }
    return score;
}

// Samples tournament_size distinct individuals and returns the index of the
// best-scoring one; ties go to the earliest sampled.
inline std::size_t tournament_select(const std::vector<double>& scores, int tournament_size,
                                     Rng& rng) {
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (int t = 0; t < tournament_size; ++t) {
        const std::size_t j =
            static_cast<std::size_t>(t) + static_cast<std::size_t>(rng.below(order.size() - static_cast<std::size_t>(t)));
        std::swap(order[static_cast<std::size_t>(t)], order[j]);
        const std::size_t pick = order[static_cast<std::size_t>(t)];
        if (scores[pick] < best_score) {
            best_score = scores[pick];
            best = pick;
        }
    }
    return best;
}

inline PackingSolution mutate(const PackingSolution& individual, const GaParams& params,
                              const CostModel& model, const Constraints& constraints,
                              const AcceleratorSpec& spec, Rng& rng) {
    if (params.mutation_operator == MutationOp::swap) {
        return buffer_swap(individual, constraints, spec.buffers, rng);
    }
    PackingSolution out;
    out.bins = nfd_repack(individual.bins, params.nfd, model, constraints, spec.buffers, rng);
    return out;
}

namespace detail {

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

inline void track_best(const PackingSolution& candidate, long long cost, double elapsed,
                       long long& best_cost, RunLog& log) {
    if (cost < best_cost) {
        best_cost = cost;
        log.best = candidate;
        log.entries.push_back({elapsed, cost});
    }
}

}  // namespace detail

// Mutation-plus-tournament evolution over bin-per-gene individuals. The
// minimum-cost individual across all generations is tracked and returned.
inline std::pair<PackingSolution, RunLog> evolve(const AcceleratorSpec& spec,
                                                 const GaParams& params, const CostModel& model,
                                                 const Constraints& constraints, Rng& rng) {
    detail::Stopwatch clock;
    RunLog log;
    long long best_cost = std::numeric_limits<long long>::max();

    // One all-singleton individual guarantees the result never exceeds the
    // unpacked baseline; the rest seed diversity.
    std::vector<PackingSolution> population;
    population.reserve(static_cast<std::size_t>(params.population_size));
    population.push_back(singleton_solution(spec));
    while (static_cast<int>(population.size()) < params.population_size) {
        if (params.mutation_operator == MutationOp::nfd) {
            PackingSolution seed;
            seed.bins =
                nfd_repack(singleton_solution(spec).bins, params.nfd, model, constraints,
                           spec.buffers, rng);
            population.push_back(std::move(seed));
        } else {
            population.push_back(random_feasible(spec, constraints, rng));
        }
    }
    for (const auto& individual : population) {
        detail::track_best(individual, solution_cost(individual, spec, model), clock.seconds(),
                           best_cost, log);
    }

    long long generation = 0;
    int stall = 0;
    std::vector<double> scores(population.size());
    while (stall < params.stall_generations &&
           (params.budget.max_rounds < 0 || generation < params.budget.max_rounds) &&
           clock.seconds() < params.budget.max_seconds) {
        const long long best_before = best_cost;
        for (std::size_t i = 0; i < population.size(); ++i) {
            if (rng.uniform() < params.p_mut) {
                population[i] = mutate(population[i], params, model, constraints, spec, rng);
            }
            scores[i] = fitness(population[i], params.layer_mix_weight, spec, model);
            detail::track_best(population[i], solution_cost(population[i], spec, model),
                               clock.seconds(), best_cost, log);
        }
        std::vector<PackingSolution> next;
        next.reserve(population.size());
        for (std::size_t i = 0; i < population.size(); ++i) {
            next.push_back(population[tournament_select(scores, params.tournament_size, rng)]);
        }
        population = std::move(next);
        ++generation;
        stall = best_cost < best_before ? 0 : stall + 1;
    }
    return {log.best, std::move(log)};
}

}  // namespace membin

#endif  // MEMBIN_GA_HPP
