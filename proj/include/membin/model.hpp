#ifndef MEMBIN_MODEL_HPP
#define MEMBIN_MODEL_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace membin {

// One logical parameter memory slice: the item to be placed. Width is the
// SIMD lane count times the parameter bit width of its layer.
struct Buffer {
    int id = 0;
    int width_bits = 0;
    int depth_words = 0;
    int layer_id = 0;
};

inline long long buffer_bits(const Buffer& b) {
    return static_cast<long long>(b.width_bits) * b.depth_words;
}

// One physical RAM aspect-ratio configuration.
struct BramMode {
    int width_bits = 0;
    int depth_words = 0;

    long long capacity_bits() const {
        return static_cast<long long>(width_bits) * depth_words;
    }

    bool operator==(const BramMode&) const = default;
};

struct CostModel {
    std::vector<BramMode> modes;
    long long nominal_capacity_bits = 18 * 1024;

    // The standard aspect configurations of an 18Kb block RAM.
    static CostModel standard() {
        return CostModel{{{1, 16384}, {2, 8192}, {4, 4096}, {9, 2048}, {18, 1024}, {36, 512}},
                         18 * 1024};
    }

    // Single 18x1024 frame only.
    static CostModel base_frame_only() { return CostModel{{{18, 1024}}, 18 * 1024}; }
};

// A group of buffers depth-stacked into a rectangular grid of RAM primitives.
struct Bin {
    std::vector<int> buffers;  // buffer ids, stacking order

    bool operator==(const Bin&) const = default;
};

struct LayerShape {
    int layer_id = 0;
    int pe = 0;     // number of buffers this row expands to
    int simd = 0;   // lanes per buffer
    int depth = 0;  // words per buffer
    int width = 0;  // bits per parameter
};

struct AcceleratorSpec {
    std::string name;
    std::vector<LayerShape> layers;
    std::vector<Buffer> buffers;  // expanded, ids are 0..n-1

    long long total_bits() const {
        long long bits = 0;
        for (const auto& b : buffers) bits += buffer_bits(b);
        return bits;
    }
};

// Expands the layer table into per-PE buffer slices.
inline void expand_buffers(AcceleratorSpec& spec) {
    spec.buffers.clear();
    int next_id = 0;
    for (const auto& layer : spec.layers) {
        for (int i = 0; i < layer.pe; ++i) {
            spec.buffers.push_back(Buffer{next_id++, layer.simd * layer.width, layer.depth,
                                          layer.layer_id});
        }
    }
}

// A partition of the spec's buffers into bins; the chromosome/annealing state.
struct PackingSolution {
    std::vector<Bin> bins;

    bool operator==(const PackingSolution&) const = default;
};

struct Constraints {
    int c_max = 4;
    bool intra_layer_only = false;
    bool strict_width_match = true;
};

struct BinCost {
    BramMode mode;
    int columns = 0;
    int rows = 0;
    long long n_bram = 0;
};

// Cheapest grid of RAM primitives implementing the bin: per mode the bin needs
// ceil(max width / mode width) columns and ceil(stacked depth / mode depth)
// rows. Ties go to the mode wasting fewer bits, then to the narrower mode.
inline BinCost bin_cost(const Bin& bin, const std::vector<Buffer>& buffers,
                        const CostModel& model) {
    if (bin.buffers.empty()) throw std::invalid_argument("bin_cost: empty bin");
    int max_width = 0;
    long long total_depth = 0;
    for (int id : bin.buffers) {
        const Buffer& b = buffers.at(static_cast<std::size_t>(id));
        max_width = std::max(max_width, b.width_bits);
        total_depth += b.depth_words;
    }
    BinCost best;
    long long best_capacity = 0;
    bool have = false;
    for (const auto& mode : model.modes) {
        const int columns = static_cast<int>((max_width + mode.width_bits - 1) / mode.width_bits);
        const int rows =
            static_cast<int>((total_depth + mode.depth_words - 1) / mode.depth_words);
        const long long n = static_cast<long long>(columns) * rows;
        const long long capacity = n * mode.capacity_bits();
        const bool better =
            !have || n < best.n_bram ||
            (n == best.n_bram &&
             (capacity < best_capacity ||
              (capacity == best_capacity && mode.width_bits < best.mode.width_bits)));
        if (better) {
            best = BinCost{mode, columns, rows, n};
            best_capacity = capacity;
            have = true;
        }
    }
    return best;
}

inline long long solution_cost(const PackingSolution& solution, const AcceleratorSpec& spec,
                               const CostModel& model) {
    long long total = 0;
    for (const auto& bin : solution.bins) total += bin_cost(bin, spec.buffers, model).n_bram;
    return total;
}

// Stored bits over total nominal capacity of the allocated RAMs. The
// denominator uses the nominal capacity regardless of the modes chosen.
inline double mapping_efficiency(long long total_bits, long long n_bram,
                                 const CostModel& model) {
    if (total_bits < 1 || n_bram < 1) {
        throw std::invalid_argument("mapping_efficiency: nonpositive input");
    }
    return static_cast<double>(total_bits) /
           (static_cast<double>(n_bram) * static_cast<double>(model.nominal_capacity_bits));
}

inline PackingSolution singleton_solution(const AcceleratorSpec& spec) {
    PackingSolution s;
    s.bins.reserve(spec.buffers.size());
    for (const auto& b : spec.buffers) s.bins.push_back(Bin{{b.id}});
    return s;
}

// Cost of the unpacked configuration: every buffer in its own bin.
inline long long baseline_cost(const AcceleratorSpec& spec, const CostModel& model) {
    long long total = 0;
    for (const auto& b : spec.buffers) {
        total += bin_cost(Bin{{b.id}}, spec.buffers, model).n_bram;
    }
    return total;
}

struct Violation {
    enum class Kind { partition, cardinality, layer_mix, empty_bin };
    Kind kind;
    std::string message;
};

// Checks partition exactness, cardinality, and the intra-layer restriction.
// Violations are data, not errors.
inline std::vector<Violation> validate(const PackingSolution& solution,
                                       const AcceleratorSpec& spec,
                                       const Constraints& constraints) {
    std::vector<Violation> out;
    std::vector<int> seen(spec.buffers.size(), 0);
    bool ids_ok = true;
    for (std::size_t i = 0; i < solution.bins.size(); ++i) {
        const Bin& bin = solution.bins[i];
        if (bin.buffers.empty()) {
            out.push_back({Violation::Kind::empty_bin, "bin " + std::to_string(i) + " is empty"});
        }
        if (static_cast<int>(bin.buffers.size()) > constraints.c_max) {
            out.push_back({Violation::Kind::cardinality,
                           "bin " + std::to_string(i) + " holds " +
                               std::to_string(bin.buffers.size()) + " buffers, c_max " +
                               std::to_string(constraints.c_max)});
        }
        std::set<int> layers;
        for (int id : bin.buffers) {
            if (id < 0 || id >= static_cast<int>(spec.buffers.size())) {
                ids_ok = false;
                out.push_back({Violation::Kind::partition,
                               "unknown buffer id " + std::to_string(id)});
                continue;
            }
            ++seen[static_cast<std::size_t>(id)];
            layers.insert(spec.buffers[static_cast<std::size_t>(id)].layer_id);
        }
        if (constraints.intra_layer_only && layers.size() > 1) {
            out.push_back({Violation::Kind::layer_mix,
                           "bin " + std::to_string(i) + " mixes " +
                               std::to_string(layers.size()) + " layers"});
        }
    }
    if (ids_ok) {
        for (std::size_t id = 0; id < seen.size(); ++id) {
            if (seen[id] != 1) {
                out.push_back({Violation::Kind::partition,
                               "buffer " + std::to_string(id) + " appears " +
                                   std::to_string(seen[id]) + " times"});
            }
        }
    }
    return out;
}

inline bool is_valid(const PackingSolution& solution, const AcceleratorSpec& spec,
                     const Constraints& constraints) {
    return validate(solution, spec, constraints).empty();
}

}  // namespace membin

#endif  // MEMBIN_MODEL_HPP
