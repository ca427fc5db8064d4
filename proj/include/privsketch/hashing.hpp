#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "privsketch/types.hpp"

namespace privsketch {

/// Seeded family of K hash functions mapping items to columns [0, M).
/// The per-function keys are derived from the master seed, so the same
/// (k_count, m_size, seed) triple gives identical outputs on every platform.
class HashFamily {
public:
    HashFamily(std::uint32_t k_count, std::uint32_t m_size, std::uint64_t seed);

    std::uint32_t k_count() const { return k_count_; }
    std::uint32_t m_size() const { return m_size_; }
    std::uint64_t seed() const { return seed_; }

    /// Column of `item` under hash function `k`. Throws on out-of-range k.
    std::uint32_t column(std::uint32_t k, ItemId item) const;

    /// Stable 64-bit digest for string-keyed items (FNV-1a).
    static ItemId canonical(std::string_view token);

private:
    std::uint32_t k_count_;
    std::uint32_t m_size_;
    std::uint64_t seed_;
    std::vector<std::uint64_t> keys_;
};

} // namespace privsketch
