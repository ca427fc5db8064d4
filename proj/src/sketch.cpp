#include "privsketch/sketch.hpp"

#include <numeric>
#include <stdexcept>

namespace privsketch {

namespace {

void check_dims(std::uint32_t a_k, std::uint32_t a_m, const HashFamily& family, const char* what) {
    if (a_k != family.k_count() || a_m != family.m_size()) {
        throw std::invalid_argument(std::string(what) + ": hash family dimensions do not match");
    }
}

} // namespace

BoolSketch::BoolSketch(std::uint32_t k_count, std::uint32_t m_size)
    : k_count_(k_count), m_size_(m_size), cells_(static_cast<std::size_t>(k_count) * m_size, 0) {
    if (k_count < 1) throw std::invalid_argument("BoolSketch: k_count must be >= 1");
    if (m_size < 2) throw std::invalid_argument("BoolSketch: m_size must be >= 2");
}

std::uint32_t BoolSketch::ones_count() const {
    return static_cast<std::uint32_t>(std::accumulate(cells_.begin(), cells_.end(), 0u));
}

OrderingMatrix::OrderingMatrix(std::uint32_t k_count, std::uint32_t m_size)
    : k_count_(k_count), m_size_(m_size), ranks_(static_cast<std::size_t>(k_count) * m_size, 0) {}

BoolSketch encode(std::span<const ItemId> items, const HashFamily& family) {
    BoolSketch sketch(family.k_count(), family.m_size());
    for (ItemId item : items) {
        for (std::uint32_t k = 0; k < family.k_count(); ++k) {
            sketch.set_cell(k, family.column(k, item));
        }
    }
    return sketch;
}

int query_min(const BoolSketch& sketch, const HashFamily& family, ItemId item) {
    check_dims(sketch.k_count(), sketch.m_size(), family, "query_min");
    for (std::uint32_t k = 0; k < sketch.k_count(); ++k) {
        if (!sketch.cell(k, family.column(k, item))) return 0;
    }
    return 1;
}

OrderingMatrix generate_ordering_matrix(const BoolSketch& sketch, Rng& rng) {
    const std::uint32_t total = sketch.cell_count();
    std::vector<std::uint32_t> zeros;
    std::vector<std::uint32_t> ones;
    zeros.reserve(total);
    for (std::uint32_t k = 0; k < sketch.k_count(); ++k) {
        for (std::uint32_t m = 0; m < sketch.m_size(); ++m) {
            (sketch.cell(k, m) ? ones : zeros).push_back(k * sketch.m_size() + m);
        }
    }
    rng.shuffle(zeros);
    rng.shuffle(ones);

    OrderingMatrix ordering(sketch.k_count(), sketch.m_size());
    std::uint32_t next_rank = 1;
    for (std::uint32_t idx : zeros) {
        ordering.set_rank(idx / sketch.m_size(), idx % sketch.m_size(), next_rank++);
    }
    for (std::uint32_t idx : ones) {
        ordering.set_rank(idx / sketch.m_size(), idx % sketch.m_size(), next_rank++);
    }
    return ordering;
}

std::uint32_t argmin_row(const OrderingMatrix& ordering, const HashFamily& family, ItemId item) {
    check_dims(ordering.k_count(), ordering.m_size(), family, "argmin_row");
    std::uint32_t best_k = 0;
    std::uint32_t best_rank = ordering.rank(0, family.column(0, item));
    for (std::uint32_t k = 1; k < ordering.k_count(); ++k) {
        const std::uint32_t r = ordering.rank(k, family.column(k, item));
        if (r < best_rank) {
            best_rank = r;
            best_k = k;
        }
    }
    return best_k;
}

} // namespace privsketch
