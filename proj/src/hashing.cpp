#include "privsketch/hashing.hpp"

#include <stdexcept>

#include "privsketch/rng.hpp"

namespace privsketch {

HashFamily::HashFamily(std::uint32_t k_count, std::uint32_t m_size, std::uint64_t seed)
    : k_count_(k_count), m_size_(m_size), seed_(seed) {
    if (k_count < 1) throw std::invalid_argument("HashFamily: k_count must be >= 1");
    if (m_size < 2) throw std::invalid_argument("HashFamily: m_size must be >= 2");
    keys_.reserve(k_count);
    for (std::uint32_t k = 0; k < k_count; ++k) {
        keys_.push_back(derive_seed(seed, k));
    }
}

std::uint32_t HashFamily::column(std::uint32_t k, ItemId item) const {
    if (k >= k_count_) throw std::out_of_range("HashFamily::column: k out of range");
    return static_cast<std::uint32_t>(mix64(item ^ keys_[k]) % m_size_);
}

ItemId HashFamily::canonical(std::string_view token) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : token) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace privsketch
