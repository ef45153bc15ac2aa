#ifndef MEMBIN_IO_HPP
#define MEMBIN_IO_HPP

#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "membin/ga.hpp"
#include "membin/model.hpp"
#include "membin/sa.hpp"

namespace membin {

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

// Spec file: { "name": str, "layers": [ { "layer_id", "pe", "simd", "depth",
// "width" } ] }. The buffer list is derived by expanding each layer into pe
// slices.
inline AcceleratorSpec parse_spec(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError(std::string("spec parse: ") + e.what());
    }
    AcceleratorSpec spec;
    try {
        spec.name = doc.at("name").get<std::string>();
        std::set<int> seen_layers;
        for (const auto& row : doc.at("layers")) {
            LayerShape layer;
            layer.layer_id = row.at("layer_id").get<int>();
            layer.pe = row.at("pe").get<int>();
            layer.simd = row.at("simd").get<int>();
            layer.depth = row.at("depth").get<int>();
            layer.width = row.at("width").get<int>();
            if (layer.pe < 1 || layer.simd < 1 || layer.depth < 1 || layer.width < 1) {
                throw SpecError("spec: non-positive dimension in layer " +
                                std::to_string(layer.layer_id));
            }
            if (!seen_layers.insert(layer.layer_id).second) {
                throw SpecError("spec: duplicate layer_id " + std::to_string(layer.layer_id));
            }
            spec.layers.push_back(layer);
        }
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("spec structure: ") + e.what());
    }
    if (spec.layers.empty()) throw SpecError("spec: empty layer list");
    expand_buffers(spec);
    return spec;
}

inline std::string emit_spec(const AcceleratorSpec& spec) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["name"] = spec.name;
    doc["layers"] = nlohmann::json::array();
    for (const auto& layer : spec.layers) {
        doc["layers"].push_back({{"layer_id", layer.layer_id},
                                 {"pe", layer.pe},
                                 {"simd", layer.simd},
                                 {"depth", layer.depth},
                                 {"width", layer.width}});
    }
    return doc.dump(2);
}

namespace detail {

struct BuiltinLayer {
    int pe, simd, depth, width;
};

inline const std::map<std::string, std::vector<BuiltinLayer>>& builtin_tables() {
    // Shapes transcribed verbatim, including the suspect Tincy-YOLO rows.
    static const std::map<std::string, std::vector<BuiltinLayer>> tables = {
        {"cnv-w1a1",
         {{16, 32, 144, 1},
          {16, 32, 288, 1},
          {4, 32, 2304, 1},
          {4, 1, 8192, 1},
          {1, 32, 18432, 1},
          {1, 4, 32768, 1},
          {1, 8, 32768, 1}}},
        {"cnv-w2a2",
         {{8, 16, 576, 2},
          {8, 16, 1152, 2},
          {4, 1, 8192, 2},
          {4, 8, 9216, 2},
          {3, 2, 65536, 2},
          {1, 8, 73728, 2}}},
        {"tincy-yolo",
         {{16, 32, 144, 1}, {25, 8, 320, 1}, {16, 32, 144, 1}, {80, 32, 2304, 1}}},
        {"dorefanet",
         {{136, 45, 72, 1},
          {64, 34, 108, 1},
          {32, 64, 108, 1},
          {68, 3, 144, 1},
          {8, 8, 64000, 1},
          {4, 64, 65536, 1},
          {8, 64, 73728, 1}}},
        {"rebnet",
         {{64, 54, 256, 1},
          {64, 25, 384, 1},
          {64, 36, 384, 1},
          {64, 32, 576, 1},
          {128, 64, 1152, 1},
          {40, 50, 2048, 1},
          {128, 64, 2048, 1}}},
        {"rn50-w1a2",
         {{368, 32, 256, 1},
          {32, 64, 256, 1},
          {192, 64, 288, 1},
          {176, 32, 1024, 1},
          {32, 64, 1024, 1},
          {96, 64, 1152, 1}}},
    };
    return tables;
}

}  // namespace detail

inline std::vector<std::string> builtin_spec_names() {
    std::vector<std::string> names;
    for (const auto& [name, _] : detail::builtin_tables()) names.push_back(name);
    return names;
}

inline AcceleratorSpec builtin_spec(const std::string& name) {
    const auto& tables = detail::builtin_tables();
    const auto it = tables.find(name);
    if (it == tables.end()) throw SpecError("unknown built-in accelerator: " + name);
    AcceleratorSpec spec;
    spec.name = name;
    int layer_id = 0;
    for (const auto& row : it->second) {
        spec.layers.push_back(LayerShape{layer_id++, row.pe, row.simd, row.depth, row.width});
    }
    expand_buffers(spec);
    return spec;
}

struct HyperparamRow {
    int n_p;
    int n_t;
    double p_adm_w;
    double p_adm_h;
    double p_mut;
    double t0;
    double r_c;
};

namespace detail {

inline const std::map<std::string, HyperparamRow>& hyperparam_table() {
    static const std::map<std::string, HyperparamRow> rows = {
        {"cnv-w1a1", {50, 5, 0.0, 0.1, 0.3, 30.0, 1.0}},
        {"cnv-w2a2", {50, 5, 0.0, 0.1, 0.3, 30.0, 2.0}},
        {"tincy-yolo", {75, 5, 0.0, 0.2, 0.4, 30.0, 1.0}},
        {"dorefanet", {50, 5, 0.1, 0.3, 0.4, 30.0, 1.0}},
        {"rebnet", {75, 5, 1.0, 0.2, 0.4, 30.0, 1.0}},
        {"rn50-w1a2", {75, 5, 0.0, 0.1, 0.4, 40.0, 0.004}},
        {"rn101-w1a2", {75, 5, 0.0, 0.1, 0.4, 40.0, 0.004}},
        {"rn152-w1a2", {75, 5, 0.0, 0.1, 0.4, 40.0, 0.004}},
    };
    return rows;
}

inline const HyperparamRow& hyperparam_row(const std::string& name) {
    const auto& rows = hyperparam_table();
    const auto it = rows.find(name);
    if (it == rows.end()) throw SpecError("no tuned hyperparameters for: " + name);
    return it->second;
}

}  // namespace detail

inline GaParams builtin_ga_params(const std::string& name) {
    const auto& row = detail::hyperparam_row(name);
    GaParams params;
    params.population_size = row.n_p;
    params.tournament_size = row.n_t;
    params.p_mut = row.p_mut;
    params.nfd.p_adm_w = row.p_adm_w;
    params.nfd.p_adm_h = row.p_adm_h;
    return params;
}

inline SaParams builtin_sa_params(const std::string& name) {
    const auto& row = detail::hyperparam_row(name);
    SaParams params;
    params.t0 = row.t0;
    params.cooling_rate = row.r_c;
    params.nfd.p_adm_w = row.p_adm_w;
    params.nfd.p_adm_h = row.p_adm_h;
    return params;
}

struct BinReport {
    int mode_width = 0;
    int mode_depth = 0;
    int columns = 0;
    int rows = 0;
    std::vector<int> buffer_ids;

    bool operator==(const BinReport&) const = default;
};

struct ResultReport {
    std::string spec_name;
    std::string algorithm;
    std::uint64_t seed = 0;
    Constraints constraints;
    std::string cost_model = "18kb-standard";
    long long n_bram = 0;
    long long baseline_n_bram = 0;
    double efficiency = 0.0;
    double delta_bram = 0.0;
    std::vector<BinReport> bins;
    std::vector<RunLogEntry> convergence;

    bool operator==(const ResultReport& other) const {
        return spec_name == other.spec_name && algorithm == other.algorithm &&
               seed == other.seed && constraints.c_max == other.constraints.c_max &&
               constraints.intra_layer_only == other.constraints.intra_layer_only &&
               constraints.strict_width_match == other.constraints.strict_width_match &&
               cost_model == other.cost_model && n_bram == other.n_bram &&
               baseline_n_bram == other.baseline_n_bram && efficiency == other.efficiency &&
               delta_bram == other.delta_bram && bins == other.bins &&
               [&] {
                   if (convergence.size() != other.convergence.size()) return false;
                   for (std::size_t i = 0; i < convergence.size(); ++i) {
                       if (convergence[i].elapsed_seconds !=
                               other.convergence[i].elapsed_seconds ||
                           convergence[i].best_cost != other.convergence[i].best_cost) {
                           return false;
                       }
                   }
                   return true;
               }();
    }
};

inline ResultReport make_report(const AcceleratorSpec& spec, const std::string& algorithm,
                                std::uint64_t seed, const Constraints& constraints,
                                const CostModel& model, const PackingSolution& solution,
                                const RunLog& log) {
    ResultReport report;
    report.spec_name = spec.name;
    report.algorithm = algorithm;
    report.seed = seed;
    report.constraints = constraints;
    report.n_bram = solution_cost(solution, spec, model);
    report.baseline_n_bram = baseline_cost(spec, model);
    report.efficiency = mapping_efficiency(spec.total_bits(), report.n_bram, model);
    report.delta_bram =
        static_cast<double>(report.baseline_n_bram) / static_cast<double>(report.n_bram);
    for (const auto& bin : solution.bins) {
        const BinCost cost = bin_cost(bin, spec.buffers, model);
        report.bins.push_back(BinReport{cost.mode.width_bits, cost.mode.depth_words,
                                        cost.columns, cost.rows, bin.buffers});
    }
    report.convergence = log.entries;
    return report;
}

inline std::string emit_report_json(const ResultReport& report) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["spec"] = report.spec_name;
    doc["algorithm"] = report.algorithm;
    doc["seed"] = report.seed;
    doc["constraints"] = {{"c_max", report.constraints.c_max},
                          {"intra_layer_only", report.constraints.intra_layer_only},
                          {"strict_width_match", report.constraints.strict_width_match}};
    doc["cost_model"] = report.cost_model;
    doc["n_bram"] = report.n_bram;
    doc["baseline_n_bram"] = report.baseline_n_bram;
    doc["efficiency"] = report.efficiency;
    doc["delta_bram"] = report.delta_bram;
    doc["bins"] = nlohmann::json::array();
    for (const auto& bin : report.bins) {
        doc["bins"].push_back({{"mode", {bin.mode_width, bin.mode_depth}},
                               {"columns", bin.columns},
                               {"rows", bin.rows},
                               {"buffers", bin.buffer_ids}});
    }
    doc["convergence"] = nlohmann::json::array();
    for (const auto& entry : report.convergence) {
        doc["convergence"].push_back({entry.elapsed_seconds, entry.best_cost});
    }
    return doc.dump(2);
}

inline ResultReport parse_report_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError(std::string("report parse: ") + e.what());
    }
    ResultReport report;
    report.spec_name = doc.at("spec").get<std::string>();
    report.algorithm = doc.at("algorithm").get<std::string>();
    report.seed = doc.at("seed").get<std::uint64_t>();
    report.constraints.c_max = doc.at("constraints").at("c_max").get<int>();
    report.constraints.intra_layer_only = doc.at("constraints").at("intra_layer_only").get<bool>();
    report.constraints.strict_width_match =
        doc.at("constraints").at("strict_width_match").get<bool>();
    report.cost_model = doc.at("cost_model").get<std::string>();
    report.n_bram = doc.at("n_bram").get<long long>();
    report.baseline_n_bram = doc.at("baseline_n_bram").get<long long>();
    report.efficiency = doc.at("efficiency").get<double>();
    report.delta_bram = doc.at("delta_bram").get<double>();
    for (const auto& bin : doc.at("bins")) {
        BinReport b;
        b.mode_width = bin.at("mode").at(0).get<int>();
        b.mode_depth = bin.at("mode").at(1).get<int>();
        b.columns = bin.at("columns").get<int>();
        b.rows = bin.at("rows").get<int>();
        b.buffer_ids = bin.at("buffers").get<std::vector<int>>();
        report.bins.push_back(std::move(b));
    }
    for (const auto& entry : doc.at("convergence")) {
        report.convergence.push_back({entry.at(0).get<double>(), entry.at(1).get<long long>()});
    }
    return report;
}

inline std::string emit_report_human(const ResultReport& report) {
    std::ostringstream out;
    out << "Accelerator      BRAM   Efficiency   dBRAM\n";
    out << report.spec_name;
    for (std::size_t i = report.spec_name.size(); i < 17; ++i) out << ' ';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-6lld %.1f%%        %.2fx\n",
                  report.n_bram, report.efficiency * 100.0, report.delta_bram);
    out << buf;
    out << "algorithm " << report.algorithm << ", seed " << report.seed << ", c_max "
        << report.constraints.c_max
        << (report.constraints.intra_layer_only ? ", intra-layer" : ", inter-layer") << ", "
        << report.bins.size() << " bins, baseline " << report.baseline_n_bram << " BRAM\n";
    return out.str();
}

inline std::string emit_convergence_csv(const std::vector<RunLogEntry>& entries) {
    std::ostringstream out;
    out << "t_seconds,best_cost\n";
    for (const auto& entry : entries) {
        out << entry.elapsed_seconds << ',' << entry.best_cost << '\n';
    }
    return out.str();
}

}  // namespace membin

#endif  // MEMBIN_IO_HPP
