#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace privsketch {

using ItemId = std::uint64_t;

/// Frequency estimates (or ground truth) for an explicit list of domain
/// items. `values[i]` belongs to `items[i]`. Estimates are not clipped to
/// [0,1] unless the caller asks for it.
struct FrequencyTable {
    std::vector<ItemId> items;
    std::vector<double> values;

    std::size_t size() const { return items.size(); }
};

inline void clip_to_unit(FrequencyTable& table) {
    for (double& v : table.values) {
        if (v < 0.0) v = 0.0;
        if (v > 1.0) v = 1.0;
    }
}

} // namespace privsketch
