#include "privsketch/ldp.hpp"

#include <cmath>
#include <stdexcept>

namespace privsketch {

void PrivacyParams::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("PrivacyParams: epsilon must be positive and finite");
    }
    if (k_count < 1) throw std::invalid_argument("PrivacyParams: k_count must be >= 1");
    if (m_size < 2) throw std::invalid_argument("PrivacyParams: m_size must be >= 2");
}

double flip_probability(double epsilon_effective) {
    if (!(epsilon_effective > 0.0) || !std::isfinite(epsilon_effective)) {
        throw std::invalid_argument("flip_probability: epsilon must be positive and finite");
    }
    return 1.0 / (std::exp(epsilon_effective) + 1.0);
}

int rr_perturb_bit(int bit, double q, Rng& rng) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("rr_perturb_bit: bit must be 0 or 1");
    if (!(q >= 0.0) || q >= 0.5) throw std::invalid_argument("rr_perturb_bit: q must be in [0, 0.5)");
    const int truthful = 2 * bit - 1;
    return rng.bernoulli(q) ? -truthful : truthful;
}

OlhParams OlhParams::from_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("OlhParams: epsilon must be positive and finite");
    }
    const double e = std::exp(epsilon);
    if (!(e < 4e9)) {
        throw std::invalid_argument("OlhParams: epsilon too large for a 32-bit hash range");
    }
    std::uint32_t g = static_cast<std::uint32_t>(std::llround(e)) + 1;
    if (g < 2) g = 2;
    return OlhParams{g, e / (e + g - 1.0)};
}

std::uint32_t olh_bucket(ItemId item, std::uint64_t user_seed, std::uint32_t g) {
    return static_cast<std::uint32_t>(mix64(item ^ user_seed) % g);
}

OlhReport olh_perturb(ItemId item, const OlhParams& params, std::uint64_t user_seed, Rng& rng) {
    if (params.g < 2) throw std::invalid_argument("olh_perturb: g must be >= 2");
    const std::uint32_t truthful = olh_bucket(item, user_seed, params.g);
    if (rng.bernoulli(params.keep_prob)) return OlhReport{user_seed, truthful};
    // Uniform over the g-1 other buckets.
    std::uint32_t other = static_cast<std::uint32_t>(rng.uniform_index(params.g - 1));
    if (other >= truthful) ++other;
    return OlhReport{user_seed, other};
}

double olh_estimate(std::span<const OlhReport> reports, ItemId item, const OlhParams& params) {
    if (reports.empty()) throw std::invalid_argument("olh_estimate: no reports");
    const double n = static_cast<double>(reports.size());
    std::uint64_t support = 0;
    for (const OlhReport& r : reports) {
        if (olh_bucket(item, r.user_seed, params.g) == r.bucket) ++support;
    }
    const double inv_g = 1.0 / params.g;
    return (static_cast<double>(support) / n - inv_g) / (params.keep_prob - inv_g) * n;
}

} // namespace privsketch
