#ifndef MEMBIN_SA_HPP
#define MEMBIN_SA_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "membin/ga.hpp"
#include "membin/model.hpp"
#include "membin/nfd.hpp"
#include "membin/rng.hpp"

namespace membin {

struct SaParams {
    double t0 = 30.0;
    double cooling_rate = 1.0;
    MutationOp perturbation = MutationOp::nfd;
    NfdParams nfd;
    double layer_mix_weight = 0.25;
    Budget budget;
    long long stall_iterations = 20000;
    double t_min = 1e-3;
};

// exp(-dE/T), clamped to 1 for non-positive deltas.
inline double acceptance_probability(double delta_e, double t) {
    if (t <= 0.0) throw std::invalid_argument("acceptance_probability: t must be positive");
    if (delta_e <= 0.0) return 1.0;
    return std::exp(-delta_e / t);
}

// Exponential cooling schedule.
inline double temperature(double t0, double r_c, long long iter) {
    return t0 * std::exp(-r_c * static_cast<double>(iter));
}

// Simulated annealing over packing solutions. The best-ever solution is
// tracked separately from the accepted state and is additionally seeded with
// the all-singleton baseline, so the result never exceeds the unpacked cost.
inline std::pair<PackingSolution, RunLog> anneal(const AcceleratorSpec& spec,
                                                 const SaParams& params, const CostModel& model,
                                                 const Constraints& constraints, Rng& rng) {
    detail::Stopwatch clock;
    RunLog log;
    long long best_cost = std::numeric_limits<long long>::max();

    const PackingSolution singletons = singleton_solution(spec);
    detail::track_best(singletons, solution_cost(singletons, spec, model), clock.seconds(),
                       best_cost, log);

    PackingSolution state = random_feasible(spec, constraints, rng);
    double state_score = fitness(state, params.layer_mix_weight, spec, model);
    detail::track_best(state, solution_cost(state, spec, model), clock.seconds(), best_cost, log);

    long long iter = 0;
    long long stall = 0;
    while (stall < params.stall_iterations &&
           (params.budget.max_rounds < 0 || iter < params.budget.max_rounds) &&
           clock.seconds() < params.budget.max_seconds) {
        // Below t_min the walk degenerates to hill climbing.
        const double t = std::max(temperature(params.t0, params.cooling_rate, iter), params.t_min);
        PackingSolution candidate;
        if (params.perturbation == MutationOp::swap) {
            candidate = buffer_swap(state, constraints, spec.buffers, rng);
        } else {
            candidate.bins =
                nfd_repack(state.bins, params.nfd, model, constraints, spec.buffers, rng);
        }
        const double candidate_score = fitness(candidate, params.layer_mix_weight, spec, model);
        const long long best_before = best_cost;
        detail::track_best(candidate, solution_cost(candidate, spec, model), clock.seconds(),
                           best_cost, log);
        if (candidate_score < state_score ||
            rng.uniform() < acceptance_probability(candidate_score - state_score, t)) {
            state = std::move(candidate);
            state_score = candidate_score;
        }
        ++iter;
        stall = best_cost < best_before ? 0 : stall + 1;
    }
    return {log.best, std::move(log)};
}

}  // namespace membin

#endif  // MEMBIN_SA_HPP
