#include <doctest.h>

#include <cmath>

#include "membin/io.hpp"
#include "membin/model.hpp"
#include "membin/rng.hpp"

using namespace membin;

TEST_CASE("buffer_bits is width times depth") {
    CHECK(buffer_bits(Buffer{0, 18, 1024, 0}) == 18432);
    CHECK(buffer_bits(Buffer{0, 32, 144, 0}) == 4608);
}

TEST_CASE("cnv-w1a1 stores 1531904 bits over 43 buffers") {
    const AcceleratorSpec spec = builtin_spec("cnv-w1a1");
    CHECK(spec.buffers.size() == 43);
    CHECK(spec.total_bits() == 1531904);
}

TEST_CASE("bin_cost picks the cheapest aspect mode") {
    const CostModel model = CostModel::standard();
    std::vector<Buffer> buffers = {{0, 18, 1024, 0}, {1, 32, 144, 0}, {2, 1, 8192, 0},
                                   {3, 1, 8192, 0}};

    SUBCASE("exact one-BRAM fit") {
        const BinCost cost = bin_cost(Bin{{0}}, buffers, model);
        CHECK(cost.mode == BramMode{18, 1024});
        CHECK(cost.columns == 1);
        CHECK(cost.rows == 1);
        CHECK(cost.n_bram == 1);
    }
    SUBCASE("wide shallow buffer prefers the 36x512 mode") {
        const BinCost cost = bin_cost(Bin{{1}}, buffers, model);
        CHECK(cost.mode == BramMode{36, 512});
        CHECK(cost.n_bram == 1);
    }
    SUBCASE("two 1x8192 buffers stack into one 1x16384 BRAM") {
        const BinCost cost = bin_cost(Bin{{2, 3}}, buffers, model);
        CHECK(cost.mode == BramMode{1, 16384});
        CHECK(cost.n_bram == 1);
    }
    SUBCASE("returned cost is minimal over every mode") {
        const Bin bin{{0, 1}};
        const BinCost cost = bin_cost(bin, buffers, model);
        for (const auto& mode : model.modes) {
            const long long cols = (32 + mode.width_bits - 1) / mode.width_bits;
            const long long rows = (1024 + 144 + mode.depth_words - 1) / mode.depth_words;
            CHECK(cost.n_bram <= cols * rows);
        }
    }
}

TEST_CASE("solution_cost is additive over bins and matches the baseline on singletons") {
    const AcceleratorSpec spec = builtin_spec("cnv-w1a1");
    const CostModel model = CostModel::standard();
    const PackingSolution singles = singleton_solution(spec);
    CHECK(solution_cost(singles, spec, model) == baseline_cost(spec, model));
    CHECK(solution_cost(PackingSolution{}, spec, model) == 0);
}

TEST_CASE("mapping_efficiency reproduces the published ratios") {
    const CostModel model = CostModel::standard();
    CHECK(mapping_efficiency(1531904, 120, model) == doctest::Approx(0.693).epsilon(0.001));
    CHECK(mapping_efficiency(22020096, 1374, model) == doctest::Approx(0.869).epsilon(0.001));
    CHECK(mapping_efficiency(18432, 1, model) == 1.0);
    CHECK_THROWS_AS(mapping_efficiency(0, 1, model), std::invalid_argument);
    CHECK_THROWS_AS(mapping_efficiency(18432, 0, model), std::invalid_argument);
}

TEST_CASE("efficiency identity holds to representation rounding") {
    const CostModel model = CostModel::standard();
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const long long bits = rng.range(1, 1000000);
        const long long n = rng.range(1, 5000);
        const double e = mapping_efficiency(bits, n, model);
        const double back = e * static_cast<double>(n) * 18432.0;
        CHECK(std::abs(back - static_cast<double>(bits)) / static_cast<double>(bits) < 1e-9);
    }
}

TEST_CASE("baseline examples") {
    const CostModel model = CostModel::standard();
    AcceleratorSpec one;
    one.layers = {{0, 1, 1, 1024, 18}};
    expand_buffers(one);
    CHECK(baseline_cost(one, model) == 1);

    AcceleratorSpec awkward;
    awkward.layers = {{0, 1, 1, 1025, 19}};
    expand_buffers(awkward);
    CHECK(baseline_cost(awkward, CostModel::base_frame_only()) == 4);
}

TEST_CASE("adding a buffer to a bin never decreases its cost") {
    const CostModel model = CostModel::standard();
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Buffer> buffers;
        const int n = static_cast<int>(rng.range(2, 5));
        for (int i = 0; i < n; ++i) {
            buffers.push_back(Buffer{i, static_cast<int>(rng.range(1, 80)),
                                     static_cast<int>(rng.range(1, 20000)), 0});
        }
        Bin bin;
        for (int i = 0; i + 1 < n; ++i) bin.buffers.push_back(i);
        const long long before = bin_cost(bin, buffers, model).n_bram;
        bin.buffers.push_back(n - 1);
        CHECK(bin_cost(bin, buffers, model).n_bram >= before);
    }
}

TEST_CASE("validate reports all violations") {
    const AcceleratorSpec spec = builtin_spec("cnv-w1a1");
    Constraints constraints;

    SUBCASE("singleton solution is valid") {
        CHECK(validate(singleton_solution(spec), spec, constraints).empty());
    }
    SUBCASE("over-full bin trips the cardinality check") {
        PackingSolution s = singleton_solution(spec);
        s.bins[0] = Bin{{0, 1, 2, 3, 4}};
        s.bins.erase(s.bins.begin() + 1, s.bins.begin() + 5);
        const auto violations = validate(s, spec, constraints);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].kind == Violation::Kind::cardinality);
    }
    SUBCASE("mixed-layer bin trips the layer check when restricted") {
        constraints.intra_layer_only = true;
        PackingSolution s = singleton_solution(spec);
        // buffers 0 and 16 belong to different layers
        s.bins[0] = Bin{{0, 16}};
        s.bins.erase(s.bins.begin() + 16);
        const auto violations = validate(s, spec, constraints);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].kind == Violation::Kind::layer_mix);
    }
    SUBCASE("missing and duplicated buffers trip the partition check") {
        PackingSolution s = singleton_solution(spec);
        s.bins[1] = Bin{{0}};
        const auto violations = validate(s, spec, constraints);
        CHECK(violations.size() == 2);
        for (const auto& v : violations) CHECK(v.kind == Violation::Kind::partition);
    }
    SUBCASE("empty bin is flagged") {
        PackingSolution s = singleton_solution(spec);
        s.bins.push_back(Bin{});
        const auto violations = validate(s, spec, constraints);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].kind == Violation::Kind::empty_bin);
    }
}
