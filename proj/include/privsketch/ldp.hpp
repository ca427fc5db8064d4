#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "privsketch/rng.hpp"
#include "privsketch/types.hpp"

namespace privsketch {

/// Privacy budget plus the sketch geometry it is spread over.
struct PrivacyParams {
    double epsilon;
    std::uint32_t k_count;
    std::uint32_t m_size;

    /// Budget spent on each reported counter. Sampled mode reports a single
    /// counter with the whole budget; full mode splits it over all K*M cells
    /// (sequential composition).
    double per_counter_budget(bool sampled) const {
        return sampled ? epsilon : epsilon / (static_cast<double>(k_count) * m_size);
    }

    void validate() const;
};

/// Probability that randomized response flips a reported bit when the
/// per-counter budget is `epsilon_effective`: 1 / (e^eps + 1).
double flip_probability(double epsilon_effective);

/// Randomized response on one bit. Returns the truthful sign 2*bit-1 with
/// probability 1-q and the opposite sign with probability q.
/// Accepts 0 <= q < 0.5 (q = 0 disables the noise, used by tests).
int rr_perturb_bit(int bit, double q, Rng& rng);

/// Local-hashing channel parameters. `g` is the hash range, `keep_prob` the
/// probability of reporting the true bucket.
struct OlhParams {
    std::uint32_t g;
    double keep_prob;

    /// g = round(e^eps) + 1 (clamped to >= 2), keep = e^eps / (e^eps + g - 1).
    static OlhParams from_epsilon(double epsilon);
};

struct OlhReport {
    std::uint64_t user_seed;
    std::uint32_t bucket;
};

/// The per-user hash underlying the local-hashing reports.
std::uint32_t olh_bucket(ItemId item, std::uint64_t user_seed, std::uint32_t g);

/// Perturb `item` through the local-hashing channel: hash it into [0, g)
/// with a per-user seed, keep the bucket with `keep_prob`, otherwise report
/// a uniformly random different bucket.
OlhReport olh_perturb(ItemId item, const OlhParams& params, std::uint64_t user_seed, Rng& rng);

/// Unbiased support-count estimate for `item` from n = reports.size()
/// local-hashing reports: (C/n - 1/g) / (keep_prob - 1/g) * n.
double olh_estimate(std::span<const OlhReport> reports, ItemId item, const OlhParams& params);

} // namespace privsketch
