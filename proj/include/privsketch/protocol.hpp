#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "privsketch/hashing.hpp"
#include "privsketch/ldp.hpp"
#include "privsketch/rng.hpp"
#include "privsketch/sketch.hpp"
#include "privsketch/types.hpp"

namespace privsketch {

/// K x M matrix of signs (-1 / +1), the shape randomized response outputs.
class SignMatrix {
public:
    SignMatrix(std::uint32_t k_count, std::uint32_t m_size)
        : k_count_(k_count), m_size_(m_size),
          values_(static_cast<std::size_t>(k_count) * m_size, -1) {}

    std::uint32_t k_count() const { return k_count_; }
    std::uint32_t m_size() const { return m_size_; }

    std::int8_t at(std::uint32_t k, std::uint32_t m) const { return values_[k * m_size_ + m]; }
    void set(std::uint32_t k, std::uint32_t m, std::int8_t v) { values_[k * m_size_ + m] = v; }

private:
    std::uint32_t k_count_;
    std::uint32_t m_size_;
    std::vector<std::int8_t> values_;
};

/// Sampled-mode user report: one perturbed counter, its position, and the
/// full ordering matrix.
struct UserReport {
    std::uint16_t sampled_row;
    std::uint16_t sampled_col;
    std::int8_t perturbed_value; // -1 or +1
    OrderingMatrix ordering;
};

/// Full-mode user report: all K*M perturbed counters plus the ordering.
struct FullReport {
    SignMatrix cells;
    OrderingMatrix ordering;
};

/// Sampled-mode user side: sketch the item set, draw the ordering matrix,
/// sample one of the K*M counters uniformly, and perturb it with the whole
/// budget epsilon. Users with empty item sets still report.
UserReport user_report_sampled(std::span<const ItemId> items, const PrivacyParams& params,
                               const HashFamily& family, Rng& rng);

/// Test hook: same as above but with the flip probability given directly.
UserReport user_report_sampled(std::span<const ItemId> items, const HashFamily& family,
                               double flip_prob, Rng& rng);

/// Full-mode user side: perturb every counter independently with budget
/// epsilon / (K*M) each.
FullReport user_report_full(std::span<const ItemId> items, const PrivacyParams& params,
                            const HashFamily& family, Rng& rng);

FullReport user_report_full(std::span<const ItemId> items, const HashFamily& family,
                            double flip_prob, Rng& rng);

/// Sampled-mode collector. For each queried item, each report is consulted
/// at the row its ordering matrix ranks lowest for that item; the report
/// contributes only if that is exactly the cell the user sampled. With
/// matched count m(x) and matched sum C(x), the calibrated estimate is
///   f(x) = 1/2 * ( (e^eps + 1)/(e^eps - 1) * C(x)/m(x) + 1 ),
/// and 1/2 (the all-noise center) if nothing matched. Estimates are not
/// clipped.
FrequencyTable collector_estimate_sampled(std::span<const UserReport> reports,
                                          const HashFamily& family,
                                          std::span<const ItemId> domain,
                                          const PrivacyParams& params);

/// Full-mode collector: every report contributes the perturbed value of its
/// lowest-ranked cell for the item, and with b = eps/(K*M) the estimate is
///   f(x) = 1/2 * ( (e^b + 1)/(e^b - 1) * C(x)/n + 1 ).
FrequencyTable collector_estimate_full(std::span<const FullReport> reports,
                                       const HashFamily& family,
                                       std::span<const ItemId> domain,
                                       const PrivacyParams& params);

/// Checks, for every item of the domain implied by `domain_size`, that
///   min_k sum_i X_i[k][H_k(x)] >= sum_i min_k X_i[k][H_k(x)] >= n * f(x),
/// i.e. that decoding per user before aggregating tightens the count-min
/// overestimate without undershooting the truth.
bool check_decode_first_inequality(const std::vector<std::vector<ItemId>>& users,
                                   std::uint64_t domain_size, const HashFamily& family);

} // namespace privsketch
