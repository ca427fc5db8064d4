#pragma once

#include <cstdint>
#include <vector>

#include "privsketch/types.hpp"

namespace privsketch {

struct TopEntry {
    ItemId item;
    double value;
};

/// Mean squared error over the common domain of the two tables. The tables
/// must list the same items in the same order.
double mse(const FrequencyTable& estimates, const FrequencyTable& truth);

/// The k items with the largest values, ordered by value descending with
/// ties broken by smaller item id. Shorter than k if the table is.
std::vector<TopEntry> topk(const FrequencyTable& table, std::size_t k);

/// Squared count error averaged over the items both top-k lists share:
///   (1/|C_e ∩ C_t|) * sum (n*est - n*truth)^2.
/// Returns NaN when the intersection is empty (recorded as missing, not 0).
double var_topk(const FrequencyTable& estimates, const FrequencyTable& truth,
                std::uint64_t n_users, std::size_t k);

/// Normalized cumulative rank of the estimated top-k against the true
/// top-k: items in the true list score k+1-rank, others 0, normalized by
/// the maximum attainable sum. 1 means the lists agree as sets, 0 means
/// they are disjoint.
double ncr(const FrequencyTable& estimates, const FrequencyTable& truth, std::size_t k);

} // namespace privsketch
