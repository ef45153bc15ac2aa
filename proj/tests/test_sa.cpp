#include <doctest.h>

#include <cmath>

#include "membin/io.hpp"
#include "membin/oracle.hpp"
#include "membin/sa.hpp"

using namespace membin;

TEST_CASE("acceptance_probability") {
    CHECK(acceptance_probability(0.0, 5.0) == 1.0);
    CHECK(acceptance_probability(-3.0, 5.0) == 1.0);
    CHECK(acceptance_probability(30.0, 30.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(acceptance_probability(10.0, 40.0) == doctest::Approx(std::exp(-0.25)));
    CHECK_THROWS_AS(acceptance_probability(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("temperature decays exponentially") {
    CHECK(temperature(40.0, 0.004, 0) == 40.0);
    CHECK(temperature(40.0, 0.004, 1000) == doctest::Approx(40.0 * std::exp(-4.0)));
    for (long long iter = 0; iter < 100; ++iter) {
        CHECK(temperature(30.0, 1.0, iter + 1) < temperature(30.0, 1.0, iter));
    }
}

TEST_CASE("anneal matches the oracle on a toy spec") {
    AcceleratorSpec spec;
    spec.name = "toy";
    spec.layers = {{0, 3, 18, 256, 1}, {1, 3, 18, 512, 1}};
    expand_buffers(spec);
    const CostModel model = CostModel::standard();
    Constraints constraints;
    const long long optimum = optimal_pack(spec, constraints, model).min_cost;
    SaParams params;
    params.budget.max_rounds = 5000;
    Rng rng(1);
    const auto [best, log] = anneal(spec, params, model, constraints, rng);
    CHECK(solution_cost(best, spec, model) == optimum);
    CHECK(is_valid(best, spec, constraints));
}

TEST_CASE("anneal with zero iterations never exceeds the singleton baseline") {
    const AcceleratorSpec spec = builtin_spec("cnv-w1a1");
    const CostModel model = CostModel::standard();
    Constraints constraints;
    SaParams params;
    params.budget.max_rounds = 0;
    Rng rng(3);
    const auto [best, log] = anneal(spec, params, model, constraints, rng);
    CHECK(is_valid(best, spec, constraints));
    CHECK(solution_cost(best, spec, model) <= baseline_cost(spec, model));
}

TEST_CASE("anneal trace is monotone and seed-deterministic") {
    const AcceleratorSpec spec = builtin_spec("cnv-w2a2");
    const CostModel model = CostModel::standard();
    Constraints constraints;
    SaParams params;
    params.budget.max_rounds = 2000;

    Rng rng_a(42);
    const auto [best_a, log_a] = anneal(spec, params, model, constraints, rng_a);
    for (std::size_t i = 1; i < log_a.entries.size(); ++i) {
        CHECK(log_a.entries[i].best_cost < log_a.entries[i - 1].best_cost);
    }
    Rng rng_b(42);
    const auto [best_b, log_b] = anneal(spec, params, model, constraints, rng_b);
    CHECK(best_a == best_b);
}

TEST_CASE("frozen chain degenerates to hill climbing") {
    // With the temperature clamped at t_min, a unit cost increase is accepted
    // with probability exp(-1000); count acceptances of worse moves directly.
    const AcceleratorSpec spec = builtin_spec("cnv-w1a1");
    const CostModel model = CostModel::standard();
    Constraints constraints;
    SaParams params;
    params.perturbation = MutationOp::swap;
    params.t0 = 30.0;
    params.cooling_rate = 1.0;  // frozen after ~15 iterations
    params.budget.max_rounds = 3000;
    Rng rng(7);

    PackingSolution state = random_feasible(spec, constraints, rng);
    double score = fitness(state, 0.25, spec, model);
    int uphill_accepts = 0;
    for (long long iter = 100; iter < 1100; ++iter) {
        const double t = std::max(temperature(params.t0, params.cooling_rate, iter), params.t_min);
        PackingSolution candidate = buffer_swap(state, constraints, spec.buffers, rng);
        const double cscore = fitness(candidate, 0.25, spec, model);
        const bool accept =
            cscore < score || rng.uniform() < acceptance_probability(cscore - score, t);
        if (accept) {
            if (cscore > score) ++uphill_accepts;
            state = std::move(candidate);
            score = cscore;
        }
    }
    CHECK(uphill_accepts == 0);
}
