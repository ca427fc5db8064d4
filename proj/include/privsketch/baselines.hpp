#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "privsketch/hashing.hpp"
#include "privsketch/ldp.hpp"
#include "privsketch/protocol.hpp"
#include "privsketch/rng.hpp"
#include "privsketch/types.hpp"

namespace privsketch {

/// One perturbed sketch row: the user picks a row uniformly, writes +1 into
/// the columns its items hash to (-1 elsewhere), then flips each entry with
/// probability 1/(e^(eps/M)+1).
struct PcmsReport {
    std::uint32_t chosen_row;
    std::vector<std::int8_t> row_values; // M entries of -1 / +1
};

PcmsReport multi_pcms_user(std::span<const ItemId> items, double epsilon,
                           const HashFamily& family, Rng& rng);

/// Test hook with the flip probability given directly.
PcmsReport multi_pcms_user(std::span<const ItemId> items, const HashFamily& family,
                           double flip_prob, Rng& rng);

/// Mean-style decoder: per-row aggregates are scaled by K (each user
/// reported one of K rows), debiased per cell, and the estimate for an item
/// averages its K debiased cells, normalized by n.
FrequencyTable multi_pcms_mean_estimate(std::span<const PcmsReport> reports,
                                        const HashFamily& family,
                                        std::span<const ItemId> domain,
                                        double epsilon);

/// Full-sketch user side for the min-style decoder: all K*M cells perturbed
/// with budget eps/(K*M) each (no ordering matrix involved).
SignMatrix multi_pcms_min_user(std::span<const ItemId> items, double epsilon,
                               const HashFamily& family, Rng& rng);

SignMatrix multi_pcms_min_user(std::span<const ItemId> items, const HashFamily& family,
                               double flip_prob, Rng& rng);

/// Min-style decoder: aggregate the perturbed sketches cell-wise, debias
/// each cell, then take the minimum over an item's K cells.
FrequencyTable multi_pcms_min_estimate(std::span<const SignMatrix> reports,
                                       const HashFamily& family,
                                       std::span<const ItemId> domain,
                                       double epsilon);

using PsOlhReport = OlhReport;

/// Padding-and-sampling user side: pad the item set with distinct dummy ids
/// (drawn from a reserved range far above any real domain) up to length
/// `pad_length`, downsample uniformly if the set is longer, then report the
/// single chosen item through the local-hashing channel with the full
/// budget.
PsOlhReport ps_olh_user(std::span<const ItemId> items, std::uint32_t pad_length,
                        double epsilon, Rng& rng);

PsOlhReport ps_olh_user(std::span<const ItemId> items, std::uint32_t pad_length,
                        const OlhParams& params, Rng& rng);

/// Frequency estimate: the support-count estimate for the item, scaled by
/// the pad length to undo the sampling, normalized by n.
FrequencyTable ps_olh_estimate(std::span<const PsOlhReport> reports,
                               std::span<const ItemId> domain,
                               std::uint32_t pad_length, double epsilon);

/// First id of the reserved dummy range used by ps_olh_user.
constexpr ItemId kPsOlhDummyBase = 1ULL << 62;

} // namespace privsketch
