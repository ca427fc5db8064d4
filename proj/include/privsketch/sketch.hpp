#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "privsketch/hashing.hpp"
#include "privsketch/rng.hpp"
#include "privsketch/types.hpp"

namespace privsketch {

/// Boolean count-min sketch: K rows of M cells, cell (k, m) is 1 iff some
/// inserted item hashes to column m under function k.
class BoolSketch {
public:
    BoolSketch(std::uint32_t k_count, std::uint32_t m_size);

    std::uint32_t k_count() const { return k_count_; }
    std::uint32_t m_size() const { return m_size_; }
    std::uint32_t cell_count() const { return k_count_ * m_size_; }

    bool cell(std::uint32_t k, std::uint32_t m) const { return cells_[k * m_size_ + m] != 0; }
    void set_cell(std::uint32_t k, std::uint32_t m) { cells_[k * m_size_ + m] = 1; }

    std::uint32_t ones_count() const;

private:
    std::uint32_t k_count_;
    std::uint32_t m_size_;
    std::vector<std::uint8_t> cells_;
};

/// Per-user rank matrix over the K*M sketch cells. Ranks are a permutation
/// of 1..K*M that is consistent with the cell values: every 0-cell ranks
/// below every 1-cell, and ranks are uniformly random within each group.
/// The collector can therefore locate a minimum-value cell for any item
/// without learning the cell values themselves.
class OrderingMatrix {
public:
    OrderingMatrix(std::uint32_t k_count, std::uint32_t m_size);

    std::uint32_t k_count() const { return k_count_; }
    std::uint32_t m_size() const { return m_size_; }

    std::uint32_t rank(std::uint32_t k, std::uint32_t m) const { return ranks_[k * m_size_ + m]; }
    void set_rank(std::uint32_t k, std::uint32_t m, std::uint32_t r) { ranks_[k * m_size_ + m] = r; }

private:
    std::uint32_t k_count_;
    std::uint32_t m_size_;
    std::vector<std::uint32_t> ranks_;
};

/// Sketch of an item set. Duplicate items are fine; insertion is idempotent.
BoolSketch encode(std::span<const ItemId> items, const HashFamily& family);

/// Minimum cell value over the K rows for `item` (0 or 1). Rejects a family
/// whose dimensions do not match the sketch.
int query_min(const BoolSketch& sketch, const HashFamily& family, ItemId item);

/// Draw an ordering matrix consistent with `sketch`, uniformly at random
/// among all admissible rank assignments.
OrderingMatrix generate_ordering_matrix(const BoolSketch& sketch, Rng& rng);

/// Row index whose cell for `item` carries the smallest rank. Because ranks
/// respect cell values, the value at this row equals the min over all rows.
std::uint32_t argmin_row(const OrderingMatrix& ordering, const HashFamily& family, ItemId item);

} // namespace privsketch
