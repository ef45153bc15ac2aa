#ifndef MEMBIN_NFD_HPP
#define MEMBIN_NFD_HPP

#include <algorithm>
#include <vector>

#include "membin/model.hpp"
#include "membin/rng.hpp"

namespace membin {

struct NfdParams {
    double efficiency_threshold = 0.85;  // bins at or above pass through untouched
    double p_adm_w = 0.0;                // admit a width mismatch with this probability
    double p_adm_h = 0.0;                // admit a non-saving stack with this probability
    int c_max = 4;
};

// Nominal capacity consumed by the bin minus the bits actually stored.
inline long long bin_waste(const Bin& bin, const std::vector<Buffer>& buffers,
                           const CostModel& model) {
    long long bits = 0;
    for (int id : bin.buffers) bits += buffer_bits(buffers.at(static_cast<std::size_t>(id)));
    return bin_cost(bin, buffers, model).n_bram * model.nominal_capacity_bits - bits;
}

inline double bin_efficiency(const Bin& bin, const std::vector<Buffer>& buffers,
                             const CostModel& model) {
    long long bits = 0;
    for (int id : bin.buffers) bits += buffer_bits(buffers.at(static_cast<std::size_t>(id)));
    return static_cast<double>(bits) /
           (static_cast<double>(bin_cost(bin, buffers, model).n_bram) *
            static_cast<double>(model.nominal_capacity_bits));
}

// Next-fit dynamic repacking. Bins mapping at or above the efficiency
// threshold pass through untouched; the rest are decomposed into a buffer
// pool, shuffled, and re-packed next-fit style. A buffer joins the open bin
// only if the bin has spare cardinality, stacking costs less than leaving the
// buffer in its own bin (or the height admission fires) and the widths match
// (or the width admission fires). The layer restriction, when active, is
// never relaxed.
inline std::vector<Bin> nfd_repack(const std::vector<Bin>& bins, const NfdParams& params,
                                   const CostModel& model, const Constraints& constraints,
                                   const std::vector<Buffer>& buffers, Rng& rng) {
    std::vector<Bin> out;
    std::vector<int> pool;
    for (const auto& bin : bins) {
        if (bin_efficiency(bin, buffers, model) >= params.efficiency_threshold) {
            out.push_back(bin);
        } else {
            pool.insert(pool.end(), bin.buffers.begin(), bin.buffers.end());
        }
    }
    rng.shuffle(pool);
    if (constraints.intra_layer_only) {
        // keep the shuffled order within each layer but make layers
        // contiguous, otherwise the layer guard closes bins constantly
        std::stable_sort(pool.begin(), pool.end(), [&](int a, int b) {
            return buffers[static_cast<std::size_t>(a)].layer_id <
                   buffers[static_cast<std::size_t>(b)].layer_id;
        });
    }

    Bin open;
    int open_width = 0;
    long long open_cost = 0;
    for (int id : pool) {
        const Buffer& buf = buffers.at(static_cast<std::size_t>(id));
        if (open.buffers.empty()) {
            open.buffers.push_back(id);
            open_width = buf.width_bits;
            open_cost = bin_cost(open, buffers, model).n_bram;
            continue;
        }
        bool admit = static_cast<int>(open.buffers.size()) < params.c_max;
        if (admit && constraints.intra_layer_only) {
            admit = buffers.at(static_cast<std::size_t>(open.buffers.front())).layer_id ==
                    buf.layer_id;
        }
        long long grown_cost = 0;
        if (admit) {
            Bin grown = open;
            grown.buffers.push_back(id);
            grown_cost = bin_cost(grown, buffers, model).n_bram;
            // Admit when co-locating beats keeping the buffer in its own
            // bin, i.e. the wasted bits of the pair strictly drop.
            const long long alone = bin_cost(Bin{{id}}, buffers, model).n_bram;
            if (!(grown_cost < open_cost + alone) && !(rng.uniform() < params.p_adm_h)) {
                admit = false;
            }
        }
        if (admit && constraints.strict_width_match && open_width != buf.width_bits &&
            !(rng.uniform() < params.p_adm_w)) {
            admit = false;
        }
        if (admit) {
            open.buffers.push_back(id);
            open_width = std::max(open_width, buf.width_bits);
            open_cost = grown_cost;
        } else {
            out.push_back(open);
            open = Bin{{id}};
            open_width = buf.width_bits;
            open_cost = bin_cost(open, buffers, model).n_bram;
        }
    }
    if (!open.buffers.empty()) out.push_back(open);
    return out;
}

namespace detail {

inline bool layer_compatible(const Bin& bin, const Buffer& buf,
                             const std::vector<Buffer>& buffers, const Constraints& constraints) {
    if (!constraints.intra_layer_only) return true;
    for (int id : bin.buffers) {
        if (buffers.at(static_cast<std::size_t>(id)).layer_id != buf.layer_id) return false;
    }
    return true;
}

}  // namespace detail

// Random neighborhood move: with equal probability either relocate one buffer
// into another bin with spare cardinality (or a fresh bin), or exchange two
// buffers between distinct bins. Returns the input unchanged when no legal
// move is found.
inline PackingSolution buffer_swap(const PackingSolution& solution,
                                   const Constraints& constraints,
                                   const std::vector<Buffer>& buffers, Rng& rng) {
    if (solution.bins.empty()) return solution;
    constexpr int kAttempts = 32;
    PackingSolution next = solution;
    auto& bins = next.bins;

    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        if (rng.uniform() < 0.5) {
            // Relocate.
            const std::size_t src = static_cast<std::size_t>(rng.below(bins.size()));
            const std::size_t pos = static_cast<std::size_t>(rng.below(bins[src].buffers.size()));
            const int id = bins[src].buffers[pos];
            const Buffer& buf = buffers.at(static_cast<std::size_t>(id));
            // Destination index bins.size() means a fresh bin.
            const std::size_t dst = static_cast<std::size_t>(rng.below(bins.size() + 1));
            if (dst == src) continue;
            if (dst < bins.size()) {
                if (static_cast<int>(bins[dst].buffers.size()) >= constraints.c_max) continue;
                if (!detail::layer_compatible(bins[dst], buf, buffers, constraints)) continue;
            } else if (bins[src].buffers.size() == 1) {
                continue;  // singleton to fresh bin is a no-op
            }
            bins[src].buffers.erase(bins[src].buffers.begin() +
                                    static_cast<std::ptrdiff_t>(pos));
            if (dst < bins.size()) {
                bins[dst].buffers.push_back(id);
            } else {
                bins.push_back(Bin{{id}});
            }
            if (bins[src].buffers.empty()) {
                bins.erase(bins.begin() + static_cast<std::ptrdiff_t>(src));
            }
            return next;
        }
        // Exchange.
        if (bins.size() < 2) continue;
        const std::size_t a = static_cast<std::size_t>(rng.below(bins.size()));
        std::size_t b = static_cast<std::size_t>(rng.below(bins.size() - 1));
        if (b >= a) ++b;
        const std::size_t pa = static_cast<std::size_t>(rng.below(bins[a].buffers.size()));
        const std::size_t pb = static_cast<std::size_t>(rng.below(bins[b].buffers.size()));
        const int ida = bins[a].buffers[pa];
        const int idb = bins[b].buffers[pb];
        if (constraints.intra_layer_only) {
            Bin rest_a = bins[a];
            rest_a.buffers.erase(rest_a.buffers.begin() + static_cast<std::ptrdiff_t>(pa));
            Bin rest_b = bins[b];
            rest_b.buffers.erase(rest_b.buffers.begin() + static_cast<std::ptrdiff_t>(pb));
            if (!detail::layer_compatible(rest_a, buffers.at(static_cast<std::size_t>(idb)),
                                          buffers, constraints) ||
                !detail::layer_compatible(rest_b, buffers.at(static_cast<std::size_t>(ida)),
                                          buffers, constraints)) {
                continue;
            }
        }
        bins[a].buffers[pa] = idb;
        bins[b].buffers[pb] = ida;
        return next;
    }
    return solution;
}

// Shuffle the buffers and deal them into bins of random size in [1, c_max].
// With the layer restriction active, dealing happens per layer group.
inline PackingSolution random_feasible(const AcceleratorSpec& spec,
                                       const Constraints& constraints, Rng& rng) {
    std::vector<std::vector<int>> groups;
    if (constraints.intra_layer_only) {
        std::vector<int> order;
        for (const auto& b : spec.buffers) order.push_back(b.id);
        std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
            return spec.buffers[static_cast<std::size_t>(lhs)].layer_id <
                   spec.buffers[static_cast<std::size_t>(rhs)].layer_id;
        });
        for (int id : order) {
            const int layer = spec.buffers[static_cast<std::size_t>(id)].layer_id;
            if (groups.empty() ||
                spec.buffers[static_cast<std::size_t>(groups.back().front())].layer_id != layer) {
                groups.emplace_back();
            }
            groups.back().push_back(id);
        }
    } else {
        groups.emplace_back();
        for (const auto& b : spec.buffers) groups.back().push_back(b.id);
    }

    PackingSolution out;
    for (auto& group : groups) {
        rng.shuffle(group);
        std::size_t i = 0;
        while (i < group.size()) {
            const std::size_t take = std::min<std::size_t>(
                static_cast<std::size_t>(rng.range(1, constraints.c_max)), group.size() - i);
            Bin bin;
            bin.buffers.assign(group.begin() + static_cast<std::ptrdiff_t>(i),
                               group.begin() + static_cast<std::ptrdiff_t>(i + take));
            out.bins.push_back(std::move(bin));
            i += take;
        }
    }
    return out;
}

}  // namespace membin

#endif  // MEMBIN_NFD_HPP
