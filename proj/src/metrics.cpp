#include "privsketch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace privsketch {

double mse(const FrequencyTable& estimates, const FrequencyTable& truth) {
    if (estimates.items != truth.items) throw std::invalid_argument("mse: domain mismatch");
    if (estimates.items.empty()) throw std::invalid_argument("mse: empty domain");
    double sum = 0.0;
    for (std::size_t i = 0; i < estimates.values.size(); ++i) {
        const double err = estimates.values[i] - truth.values[i];
        sum += err * err;
    }
    return sum / static_cast<double>(estimates.values.size());
}

std::vector<TopEntry> topk(const FrequencyTable& table, std::size_t k) {
    std::vector<TopEntry> entries;
    entries.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        entries.push_back(TopEntry{table.items[i], table.values[i]});
    }
    std::sort(entries.begin(), entries.end(), [](const TopEntry& a, const TopEntry& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.item < b.item;
    });
    if (entries.size() > k) entries.resize(k);
    return entries;
}

double var_topk(const FrequencyTable& estimates, const FrequencyTable& truth,
                std::uint64_t n_users, std::size_t k) {
    const auto top_est = topk(estimates, k);
    const auto top_true = topk(truth, k);

    std::unordered_map<ItemId, double> truth_values;
    for (const TopEntry& e : top_true) truth_values.emplace(e.item, e.value);

    const double n = static_cast<double>(n_users);
    double sum = 0.0;
    std::size_t common = 0;
    for (const TopEntry& e : top_est) {
        const auto it = truth_values.find(e.item);
        if (it == truth_values.end()) continue;
        const double err = n * e.value - n * it->second;
        sum += err * err;
        ++common;
    }
    if (common == 0) return std::numeric_limits<double>::quiet_NaN();
    return sum / static_cast<double>(common);
}

double ncr(const FrequencyTable& estimates, const FrequencyTable& truth, std::size_t k) {
    if (k == 0) throw std::invalid_argument("ncr: k must be >= 1");
    const auto top_est = topk(estimates, k);
    const auto top_true = topk(truth, k);

    // Quality of a true top-k item at 1-based rank i is k+1-i.
    std::unordered_map<ItemId, double> quality;
    double denominator = 0.0;
    for (std::size_t i = 0; i < top_true.size(); ++i) {
        const double q = static_cast<double>(k + 1 - (i + 1));
        quality.emplace(top_true[i].item, q);
        denominator += q;
    }
    if (denominator == 0.0) throw std::invalid_argument("ncr: degenerate true top-k");

    double numerator = 0.0;
    for (const TopEntry& e : top_est) {
        const auto it = quality.find(e.item);
        if (it != quality.end()) numerator += it->second;
    }
    return numerator / denominator;
}

} // namespace privsketch
