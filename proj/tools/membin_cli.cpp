// membin: pack CNN parameter memories into FPGA block RAMs and benchmark the
// packing algorithms.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "membin/bench.hpp"
#include "membin/io.hpp"
#include "membin/model.hpp"
#include "membin/oracle.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

membin::AcceleratorSpec load_spec(const std::string& name_or_path) {
    const auto names = membin::builtin_spec_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
        return membin::builtin_spec(name_or_path);
    }
    std::ifstream in(name_or_path);
    if (!in) throw membin::SpecError("cannot open spec: " + name_or_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return membin::parse_spec(buffer.str());
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    // "1..10" or "1,2,3".
    std::vector<std::uint64_t> seeds;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const std::uint64_t lo = std::stoull(text.substr(0, dots));
        const std::uint64_t hi = std::stoull(text.substr(dots + 2));
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) seeds.push_back(std::stoull(item));
    return seeds;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << content;
}

struct PackFlags {
    std::string spec;
    std::string alg = "ga-nfd";
    int cmax = 4;
    bool intra = false;
    bool no_width_match = false;
    bool base_frame_only = false;
    std::uint64_t seed = 1;
    double budget = 300.0;
    bool use_preset = true;
    int pop = -1;
    int tour = -1;
    double pmut = -1.0;
    double padm_w = -1.0;
    double padm_h = -1.0;
    double t0 = -1.0;
    double rc = -1.0;
    double threshold = -1.0;
    std::string out_path;
    std::string csv_path;
    bool human = true;
};

membin::RunConfig build_config(const PackFlags& flags, const std::string& spec_name) {
    membin::RunConfig config;
    config.algorithm = flags.alg;
    config.constraints.c_max = flags.cmax;
    config.constraints.intra_layer_only = flags.intra;
    config.constraints.strict_width_match = !flags.no_width_match;
    config.seed = flags.seed;
    config.ga.budget.max_seconds = flags.budget;
    config.sa.budget.max_seconds = flags.budget;
    if (flags.use_preset) {
        try {
            membin::apply_presets(config, spec_name);
        } catch (const membin::SpecError&) {
            // user-supplied spec without a tuned row; module defaults apply
        }
    }
    if (flags.pop > 0) config.ga.population_size = flags.pop;
    if (flags.tour > 0) config.ga.tournament_size = flags.tour;
    if (flags.pmut >= 0.0) config.ga.p_mut = flags.pmut;
    if (flags.padm_w >= 0.0) {
        config.ga.nfd.p_adm_w = flags.padm_w;
        config.sa.nfd.p_adm_w = flags.padm_w;
    }
    if (flags.padm_h >= 0.0) {
        config.ga.nfd.p_adm_h = flags.padm_h;
        config.sa.nfd.p_adm_h = flags.padm_h;
    }
    if (flags.t0 > 0.0) config.sa.t0 = flags.t0;
    if (flags.rc > 0.0) config.sa.cooling_rate = flags.rc;
    if (flags.threshold >= 0.0) {
        config.ga.nfd.efficiency_threshold = flags.threshold;
        config.sa.nfd.efficiency_threshold = flags.threshold;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CNN parameter memory to FPGA block-RAM packing"};
    app.require_subcommand(1);

    PackFlags flags;
    bool no_preset = false;

    auto* pack = app.add_subcommand("pack", "Pack one accelerator spec");
    pack->add_option("--spec", flags.spec, "Built-in name or spec file path")->required();
    pack->add_option("--alg", flags.alg, "Algorithm: ga-s, ga-nfd, sa-s, sa-nfd");
    pack->add_option("--cmax", flags.cmax, "Cardinality limit (buffers per bin)");
    pack->add_flag("--intra", flags.intra, "Restrict bins to a single layer");
    pack->add_flag("--relax-width", flags.no_width_match, "Disable the width-match guard");
    pack->add_flag("--base-frame-only", flags.base_frame_only, "Use only the 18x1024 mode");
    pack->add_option("--seed", flags.seed, "Random seed");
    pack->add_option("--budget", flags.budget, "Wall-clock budget in seconds");
    pack->add_flag("--no-preset", no_preset, "Ignore tuned per-network hyperparameters");
    pack->add_option("--pop", flags.pop, "GA population size");
    pack->add_option("--tour", flags.tour, "GA tournament size");
    pack->add_option("--pmut", flags.pmut, "GA mutation probability");
    pack->add_option("--padm-w", flags.padm_w, "NFD width admission probability");
    pack->add_option("--padm-h", flags.padm_h, "NFD height admission probability");
    pack->add_option("--threshold", flags.threshold, "NFD efficiency threshold");
    pack->add_option("--t0", flags.t0, "SA initial temperature");
    pack->add_option("--rc", flags.rc, "SA cooling rate");
    pack->add_option("--out", flags.out_path, "Write JSON report to this path");
    pack->add_option("--csv", flags.csv_path, "Write convergence CSV to this path");

    std::string cmp_spec, cmp_algs = "ga-s,ga-nfd,sa-s,sa-nfd", cmp_seeds = "1..10";
    double cmp_budget = 300.0;
    int cmp_cmax = 4;
    bool cmp_intra = false;
    auto* cmp = app.add_subcommand("compare", "Compare algorithms across seeds");
    cmp->add_option("--spec", cmp_spec, "Built-in name or spec file path")->required();
    cmp->add_option("--algs", cmp_algs, "Comma-separated algorithm list");
    cmp->add_option("--seeds", cmp_seeds, "Seed list: 1,2,3 or 1..10");
    cmp->add_option("--budget", cmp_budget, "Per-run budget in seconds");
    cmp->add_option("--cmax", cmp_cmax, "Cardinality limit");
    cmp->add_flag("--intra", cmp_intra, "Restrict bins to a single layer");

    std::string eff_specs, eff_mode = "inter", eff_seeds = "1..3";
    double eff_budget = 300.0;
    auto* eff = app.add_subcommand("efficiency", "Mapping-efficiency table");
    eff->add_option("--specs", eff_specs, "Comma-separated spec names")->required();
    eff->add_option("--mode", eff_mode, "baseline, intra, or inter");
    eff->add_option("--seeds", eff_seeds, "Seeds for the packed modes");
    eff->add_option("--budget", eff_budget, "Per-run budget in seconds");

    std::string sweep_spec, sweep_sizes = "5,25,50,100,200,400";
    int sweep_repeats = 5;
    double sweep_budget = 420.0;
    std::uint64_t sweep_seed = 1;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep-pop", "GA population-size sweep");
    sweep->add_option("--spec", sweep_spec, "Built-in name or spec file path")->required();
    sweep->add_option("--sizes", sweep_sizes, "Comma-separated population sizes");
    sweep->add_option("--repeats", sweep_repeats, "Repeats per size");
    sweep->add_option("--budget", sweep_budget, "Per-run budget in seconds");
    sweep->add_option("--seed", sweep_seed, "Base seed");
    sweep->add_option("--csv", sweep_out, "Write CSV to this path");

    std::string oracle_spec;
    int oracle_cmax = 4;
    bool oracle_intra = false;
    auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum for tiny specs");
    oracle->group("");  // hidden; test tooling only
    oracle->add_option("--spec", oracle_spec, "Spec file path")->required();
    oracle->add_option("--cmax", oracle_cmax, "Cardinality limit");
    oracle->add_flag("--intra", oracle_intra, "Restrict bins to a single layer");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (pack->parsed()) {
            flags.use_preset = !no_preset;
            const membin::AcceleratorSpec spec = load_spec(flags.spec);
            const membin::CostModel model = flags.base_frame_only
                                                ? membin::CostModel::base_frame_only()
                                                : membin::CostModel::standard();
            const membin::RunConfig config = build_config(flags, spec.name);
            const membin::ResultReport report = membin::run_pack(spec, config, model);
            if (!flags.out_path.empty()) {
                write_file(flags.out_path, membin::emit_report_json(report));
            }
            if (!flags.csv_path.empty()) {
                write_file(flags.csv_path, membin::emit_convergence_csv(report.convergence));
            }
            std::cout << membin::emit_report_human(report);
        } else if (cmp->parsed()) {
            const membin::AcceleratorSpec spec = load_spec(cmp_spec);
            std::vector<std::string> algorithms;
            std::stringstream stream(cmp_algs);
            std::string item;
            while (std::getline(stream, item, ',')) algorithms.push_back(item);
            membin::RunConfig base;
            base.constraints.c_max = cmp_cmax;
            base.constraints.intra_layer_only = cmp_intra;
            base.ga.budget.max_seconds = cmp_budget;
            base.sa.budget.max_seconds = cmp_budget;
            try {
                membin::apply_presets(base, spec.name);
            } catch (const membin::SpecError&) {
            }
            // apply_presets only fills the fields of the configured family;
            // compare mixes families, so resolve both when a row exists.
            try {
                const membin::Budget keep = base.ga.budget;
                base.ga = membin::builtin_ga_params(spec.name);
                base.ga.budget = keep;
                const membin::Budget keep_sa = base.sa.budget;
                base.sa = membin::builtin_sa_params(spec.name);
                base.sa.budget = keep_sa;
            } catch (const membin::SpecError&) {
            }
            const auto table = membin::compare(spec, algorithms, parse_seeds(cmp_seeds), base,
                                               membin::CostModel::standard());
            std::cout << membin::format_comparison(table);
        } else if (eff->parsed()) {
            membin::PackingMode mode = membin::PackingMode::inter;
            if (eff_mode == "baseline") {
                mode = membin::PackingMode::baseline;
            } else if (eff_mode == "intra") {
                mode = membin::PackingMode::intra;
            } else if (eff_mode != "inter") {
                std::cerr << "unknown mode: " << eff_mode << '\n';
                return kExitUsage;
            }
            membin::RunConfig base;
            base.ga.budget.max_seconds = eff_budget;
            std::cout << "accelerator       bram     efficiency  dbram\n";
            std::stringstream stream(eff_specs);
            std::string name;
            while (std::getline(stream, name, ',')) {
                const membin::AcceleratorSpec spec = load_spec(name);
                const auto row = membin::efficiency_row(spec, mode, base, parse_seeds(eff_seeds),
                                                        membin::CostModel::standard());
                char line[128];
                std::snprintf(line, sizeof(line), "%-17s %-8lld %.1f%%       %.2fx\n",
                              row.spec_name.c_str(), row.n_bram, row.efficiency * 100.0,
                              row.delta_bram);
                std::cout << line;
            }
        } else if (sweep->parsed()) {
            const membin::AcceleratorSpec spec = load_spec(sweep_spec);
            std::vector<int> sizes;
            std::stringstream stream(sweep_sizes);
            std::string item;
            while (std::getline(stream, item, ',')) sizes.push_back(std::stoi(item));
            membin::RunConfig base;
            base.seed = sweep_seed;
            base.ga.budget.max_seconds = sweep_budget;
            try {
                membin::apply_presets(base, spec.name);
            } catch (const membin::SpecError&) {
            }
            base.ga.budget.max_seconds = sweep_budget;
            const auto rows = membin::sweep_population(spec, sizes, sweep_repeats, base,
                                                       membin::CostModel::standard());
            const std::string csv = membin::sweep_csv(rows);
            if (!sweep_out.empty()) write_file(sweep_out, csv);
            std::cout << csv;
        } else if (oracle->parsed()) {
            const membin::AcceleratorSpec spec = load_spec(oracle_spec);
            membin::Constraints constraints;
            constraints.c_max = oracle_cmax;
            constraints.intra_layer_only = oracle_intra;
            const auto result =
                membin::optimal_pack(spec, constraints, membin::CostModel::standard());
            std::cout << "optimum " << result.min_cost << " BRAM in "
                      << result.solution.bins.size() << " bins\n";
        }
    } catch (const membin::SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
