#ifndef MEMBIN_ORACLE_HPP
#define MEMBIN_ORACLE_HPP

#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "membin/model.hpp"

namespace membin {

struct OracleResult {
    long long min_cost = 0;
    PackingSolution solution;
};

// Exhaustive optimal packer for tiny instances. Enumerates every partition of
// the buffer set via restricted-growth assignment, pruning blocks that exceed
// the cardinality limit, break the layer restriction, or already cost no less
// than the incumbent.
inline OracleResult optimal_pack(const std::vector<Buffer>& buffers,
                                 const Constraints& constraints, const CostModel& model) {
    constexpr std::size_t kMaxBuffers = 12;
    if (buffers.size() > kMaxBuffers) {
        throw std::invalid_argument("optimal_pack: instance too large (limit 12 buffers)");
    }
    if (buffers.empty()) return {0, {}};

    // Work on positional ids so bin_cost can index directly; translate back
    // at the end.
    std::vector<Buffer> local = buffers;
    for (std::size_t i = 0; i < local.size(); ++i) local[i].id = static_cast<int>(i);

    OracleResult best;
    best.min_cost = std::numeric_limits<long long>::max();

    std::vector<Bin> blocks;
    std::vector<long long> block_costs;

    auto recurse = [&](auto&& self, std::size_t index, long long partial_cost) -> void {
        if (partial_cost >= best.min_cost) return;
        if (index == local.size()) {
            best.min_cost = partial_cost;
            best.solution.bins = blocks;
            for (auto& bin : best.solution.bins) {
                for (int& id : bin.buffers) id = buffers[static_cast<std::size_t>(id)].id;
            }
            return;
        }
        const Buffer& buf = local[index];
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (static_cast<int>(blocks[b].buffers.size()) >= constraints.c_max) continue;
            if (constraints.intra_layer_only &&
                local[static_cast<std::size_t>(blocks[b].buffers.front())].layer_id !=
                    buf.layer_id) {
                continue;
            }
            blocks[b].buffers.push_back(buf.id);
            const long long old_cost = block_costs[b];
            const long long new_cost = bin_cost(blocks[b], local, model).n_bram;
            block_costs[b] = new_cost;
            self(self, index + 1, partial_cost - old_cost + new_cost);
            block_costs[b] = old_cost;
            blocks[b].buffers.pop_back();
        }
        blocks.push_back(Bin{{buf.id}});
        const long long cost = bin_cost(blocks.back(), local, model).n_bram;
        block_costs.push_back(cost);
        self(self, index + 1, partial_cost + cost);
        block_costs.pop_back();
        blocks.pop_back();
    };
    recurse(recurse, 0, 0);
    return best;
}

inline OracleResult optimal_pack(const AcceleratorSpec& spec, const Constraints& constraints,
                                 const CostModel& model) {
    return optimal_pack(spec.buffers, constraints, model);
}

}  // namespace membin

#endif  // MEMBIN_ORACLE_HPP
