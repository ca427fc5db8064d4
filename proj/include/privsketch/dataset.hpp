#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "privsketch/types.hpp"

namespace privsketch {

/// Multi-item user data: one deduplicated, sorted item set per user over a
/// dense domain [0, domain_size). Empty sets are allowed.
struct Dataset {
    std::vector<std::vector<ItemId>> users;
    std::uint64_t domain_size = 0;

    std::size_t user_count() const { return users.size(); }
};

/// Synthetic workload: each user draws `draws_per_user` items i.i.d. from a
/// Zipf distribution with exponent `zipf_s` over [0, domain_size) and keeps
/// the distinct ones. Item 0 is the most popular rank.
Dataset gen_zipf(std::size_t n_users, std::uint64_t domain_size, double zipf_s,
                 std::uint32_t draws_per_user, std::uint64_t seed);

/// Reads a transaction file: one user per line, whitespace-separated
/// positive integer ids. Ids are remapped to a dense [0, d) domain in order
/// of first appearance. Malformed input fails with the offending line
/// number; an empty file is an error.
Dataset load_transactions(const std::filesystem::path& path);

/// Writes `dataset` in the same format (ids shifted back to 1-based). The
/// format carries no domain declaration, so reloading recovers the dataset
/// up to the first-appearance relabeling and drops never-held items; for a
/// dataset that came out of load_transactions the reload is exact.
void save_transactions(const Dataset& dataset, const std::filesystem::path& path);

/// Fraction of users holding each item of the full domain.
FrequencyTable true_frequencies(const Dataset& dataset);

struct DatasetStats {
    std::uint64_t user_count;
    std::uint64_t domain_size;
    std::uint64_t max_items;
    std::uint64_t min_items;
    std::uint64_t p90_items; // nearest-rank 90th percentile of set sizes
};

DatasetStats dataset_stats(const Dataset& dataset);

} // namespace privsketch
