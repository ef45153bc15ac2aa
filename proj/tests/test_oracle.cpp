#include <doctest.h>

#include "membin/io.hpp"
#include "membin/nfd.hpp"
#include "membin/oracle.hpp"

using namespace membin;

TEST_CASE("optimal_pack basics") {
    const CostModel model = CostModel::standard();
    Constraints constraints;

    SUBCASE("two half-depth buffers share one BRAM") {
        const std::vector<Buffer> buffers = {{0, 18, 512, 0}, {1, 18, 512, 0}};
        const auto result = optimal_pack(buffers, constraints, model);
        CHECK(result.min_cost == 1);
        CHECK(result.solution.bins.size() == 1);
    }
    SUBCASE("single buffer equals its singleton cost") {
        const std::vector<Buffer> buffers = {{0, 32, 144, 0}};
        CHECK(optimal_pack(buffers, constraints, model).min_cost ==
              bin_cost(Bin{{0}}, buffers, model).n_bram);
    }
    SUBCASE("c_max 1 forces the singleton partition") {
        AcceleratorSpec spec;
        spec.layers = {{0, 5, 7, 300, 1}};
        expand_buffers(spec);
        constraints.c_max = 1;
        CHECK(optimal_pack(spec, constraints, model).min_cost == baseline_cost(spec, model));
    }
    SUBCASE("instances beyond 12 buffers are rejected") {
        std::vector<Buffer> buffers;
        for (int i = 0; i < 13; ++i) buffers.push_back({i, 1, 1, 0});
        CHECK_THROWS_AS(optimal_pack(buffers, constraints, model), std::invalid_argument);
    }
}

TEST_CASE("optimal_pack never loses to random candidates") {
    const CostModel model = CostModel::standard();
    Rng rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        AcceleratorSpec spec;
        const int layers = static_cast<int>(rng.range(1, 2));
        int remaining = static_cast<int>(rng.range(2, 7));
        for (int l = 0; l < layers && remaining > 0; ++l) {
            const int pe = l == layers - 1 ? remaining : static_cast<int>(rng.range(1, remaining));
            remaining -= pe;
            spec.layers.push_back({l, pe, static_cast<int>(rng.range(1, 40)),
                                   static_cast<int>(rng.range(16, 9000)), 1});
        }
        expand_buffers(spec);
        Constraints constraints;
        constraints.c_max = static_cast<int>(rng.range(1, 4));
        constraints.intra_layer_only = rng.uniform() < 0.3;
        const auto result = optimal_pack(spec, constraints, model);
        CHECK(is_valid(result.solution, spec, constraints));
        CHECK(solution_cost(result.solution, spec, model) == result.min_cost);
        for (int s = 0; s < 30; ++s) {
            const PackingSolution candidate = random_feasible(spec, constraints, rng);
            CHECK(solution_cost(candidate, spec, model) >= result.min_cost);
        }
    }
}

TEST_CASE("optimal_pack honors the layer restriction") {
    AcceleratorSpec spec;
    spec.layers = {{0, 2, 18, 512, 1}, {1, 2, 18, 512, 1}};
    expand_buffers(spec);
    const CostModel model = CostModel::standard();
    Constraints inter;
    Constraints intra;
    intra.intra_layer_only = true;
    const auto inter_result = optimal_pack(spec, inter, model);
    const auto intra_result = optimal_pack(spec, intra, model);
    CHECK(inter_result.min_cost <= intra_result.min_cost);
    CHECK(is_valid(intra_result.solution, spec, intra));
    CHECK(intra_result.min_cost == 2);  // one bin per layer
}
