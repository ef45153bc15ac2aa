#include <doctest.h>

#include "membin/io.hpp"

using namespace membin;

TEST_CASE("built-in specs match the published buffer counts and bit totals") {
    // bit totals recomputed independently (sum of pe*simd*width*depth)
    struct Expected {
        const char* name;
        std::size_t buffers;
        long long bits;
    };
    const Expected expected[] = {
        {"cnv-w1a1", 43, 1531904},    {"cnv-w2a2", 28, 3063808},
        {"tincy-yolo", 137, 6109696}, {"dorefanet", 320, 59548160},
        {"rebnet", 552, 33873920},    {"rn50-w1a2", 896, 22020096},
    };
    for (const auto& e : expected) {
        const AcceleratorSpec spec = builtin_spec(e.name);
        CHECK(spec.buffers.size() == e.buffers);
        CHECK(spec.total_bits() == e.bits);
    }
    CHECK_THROWS_AS(builtin_spec("rn101-w1a2"), SpecError);
}

TEST_CASE("cnv-w1a1 first layer expands to 16 buffers of 32 bits") {
    const AcceleratorSpec spec = builtin_spec("cnv-w1a1");
    REQUIRE(spec.layers.size() == 7);
    CHECK(spec.layers[0].pe == 16);
    CHECK(spec.buffers[0].width_bits == 32);
    CHECK(spec.buffers[0].depth_words == 144);
}

TEST_CASE("parse_spec") {
    SUBCASE("round-trips a built-in spec") {
        const AcceleratorSpec spec = builtin_spec("rn50-w1a2");
        const AcceleratorSpec parsed = parse_spec(emit_spec(spec));
        CHECK(parsed.name == spec.name);
        CHECK(parsed.buffers.size() == spec.buffers.size());
        CHECK(parsed.total_bits() == spec.total_bits());
    }
    SUBCASE("rejects malformed syntax") {
        CHECK_THROWS_AS(parse_spec("{not json"), SpecError);
    }
    SUBCASE("rejects an empty layer list") {
        CHECK_THROWS_AS(parse_spec(R"({"name":"x","layers":[]})"), SpecError);
    }
    SUBCASE("rejects non-positive dimensions") {
        CHECK_THROWS_AS(
            parse_spec(
                R"({"name":"x","layers":[{"layer_id":0,"pe":1,"simd":0,"depth":4,"width":1}]})"),
            SpecError);
    }
    SUBCASE("rejects duplicate layer ids") {
        CHECK_THROWS_AS(
            parse_spec(
                R"({"name":"x","layers":[{"layer_id":0,"pe":1,"simd":1,"depth":4,"width":1},
                                          {"layer_id":0,"pe":1,"simd":1,"depth":4,"width":1}]})"),
            SpecError);
    }
}

TEST_CASE("tuned hyperparameter rows") {
    const GaParams rn50 = builtin_ga_params("rn50-w1a2");
    CHECK(rn50.population_size == 75);
    CHECK(rn50.tournament_size == 5);
    CHECK(rn50.nfd.p_adm_w == 0.0);
    CHECK(rn50.nfd.p_adm_h == 0.1);
    CHECK(rn50.p_mut == 0.4);

    const SaParams cnv = builtin_sa_params("cnv-w1a1");
    CHECK(cnv.t0 == 30.0);
    CHECK(cnv.cooling_rate == 1.0);

    CHECK(builtin_ga_params("rebnet").nfd.p_adm_w == 1.0);
    CHECK_THROWS_AS(builtin_ga_params("unknown-net"), SpecError);
}

TEST_CASE("report round-trips through json") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        ResultReport report;
        report.spec_name = "spec-" + std::to_string(trial);
        report.algorithm = "ga-nfd";
        report.seed = rng.next();
        report.constraints.c_max = static_cast<int>(rng.range(1, 8));
        report.constraints.intra_layer_only = rng.uniform() < 0.5;
        report.n_bram = rng.range(1, 5000);
        report.baseline_n_bram = report.n_bram + rng.range(0, 500);
        report.efficiency = rng.uniform();
        report.delta_bram = 1.0 + rng.uniform();
        const int bins = static_cast<int>(rng.range(0, 5));
        for (int b = 0; b < bins; ++b) {
            report.bins.push_back(BinReport{18, 1024, 1, static_cast<int>(rng.range(1, 4)),
                                            {static_cast<int>(rng.range(0, 100))}});
        }
        const int entries = static_cast<int>(rng.range(1, 6));
        for (int e = 0; e < entries; ++e) {
            report.convergence.push_back({rng.uniform() * 100.0, rng.range(1, 1000)});
        }
        CHECK(parse_report_json(emit_report_json(report)) == report);
    }
}

TEST_CASE("report efficiency matches the packed cost") {
    const AcceleratorSpec spec = builtin_spec("cnv-w1a1");
    const CostModel model = CostModel::standard();
    RunLog log;
    log.best = singleton_solution(spec);
    log.entries.push_back({0.0, baseline_cost(spec, model)});
    const ResultReport report =
        make_report(spec, "sa-nfd", 1, Constraints{}, model, log.best, log);
    CHECK(report.efficiency ==
          mapping_efficiency(spec.total_bits(), report.n_bram, model));
    CHECK(report.delta_bram == 1.0);
    // paper reports 86.6% at 96 BRAM on this network
    CHECK(mapping_efficiency(spec.total_bits(), 96, model) ==
          doctest::Approx(0.866).epsilon(0.001));
}

TEST_CASE("convergence csv") {
    const std::vector<RunLogEntry> entries = {{0.0, 200}, {1.5, 100}};
    CHECK(emit_convergence_csv(entries) == "t_seconds,best_cost\n0,200\n1.5,100\n");
}
