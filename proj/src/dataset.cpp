#include "privsketch/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "privsketch/rng.hpp"

namespace privsketch {

Dataset gen_zipf(std::size_t n_users, std::uint64_t domain_size, double zipf_s,
                 std::uint32_t draws_per_user, std::uint64_t seed) {
    if (domain_size == 0) throw std::invalid_argument("gen_zipf: domain_size must be >= 1");
    if (!(zipf_s >= 0.0) || !std::isfinite(zipf_s)) {
        throw std::invalid_argument("gen_zipf: zipf_s must be finite and >= 0");
    }

    // CDF of P(rank = k+1) proportional to (k+1)^-s; sampled by bisection.
    std::vector<double> cdf(domain_size);
    double total = 0.0;
    for (std::uint64_t k = 0; k < domain_size; ++k) {
        total += std::pow(static_cast<double>(k + 1), -zipf_s);
        cdf[k] = total;
    }
    for (double& c : cdf) c /= total;

    Dataset dataset;
    dataset.domain_size = domain_size;
    dataset.users.resize(n_users);
    for (std::size_t i = 0; i < n_users; ++i) {
        Rng rng(derive_seed(seed, i));
        std::vector<ItemId>& items = dataset.users[i];
        items.reserve(draws_per_user);
        for (std::uint32_t t = 0; t < draws_per_user; ++t) {
            const double u = rng.uniform_double();
            const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
            items.push_back(static_cast<ItemId>(it - cdf.begin()));
        }
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
    }
    return dataset;
}

Dataset load_transactions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    Dataset dataset;
    std::unordered_map<std::uint64_t, ItemId> remap;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<ItemId> items;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
            if (pos >= line.size()) break;
            std::size_t end = pos;
            std::uint64_t value = 0;
            while (end < line.size() && line[end] >= '0' && line[end] <= '9') {
                value = value * 10 + static_cast<std::uint64_t>(line[end] - '0');
                ++end;
            }
            if (end == pos || (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r')) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": malformed item id");
            }
            if (value == 0) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": item ids must be positive");
            }
            const auto [it, inserted] = remap.try_emplace(value, static_cast<ItemId>(remap.size()));
            items.push_back(it->second);
            pos = end;
        }
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        dataset.users.push_back(std::move(items));
    }
    if (dataset.users.empty()) throw std::runtime_error(path.string() + ": empty dataset");
    dataset.domain_size = remap.size();
    return dataset;
}

void save_transactions(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& items : dataset.users) {
        for (std::size_t j = 0; j < items.size(); ++j) {
            if (j) out << ' ';
            out << (items[j] + 1);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

FrequencyTable true_frequencies(const Dataset& dataset) {
    if (dataset.users.empty()) throw std::invalid_argument("true_frequencies: empty dataset");
    std::vector<std::uint64_t> counts(dataset.domain_size, 0);
    for (const auto& items : dataset.users) {
        for (ItemId x : items) {
            if (x >= dataset.domain_size) throw std::invalid_argument("true_frequencies: item outside domain");
            ++counts[x];
        }
    }
    FrequencyTable table;
    table.items.resize(dataset.domain_size);
    table.values.resize(dataset.domain_size);
    const double n = static_cast<double>(dataset.user_count());
    for (std::uint64_t x = 0; x < dataset.domain_size; ++x) {
        table.items[x] = x;
        table.values[x] = static_cast<double>(counts[x]) / n;
    }
    return table;
}

DatasetStats dataset_stats(const Dataset& dataset) {
    if (dataset.users.empty()) throw std::invalid_argument("dataset_stats: empty dataset");
    std::vector<std::uint64_t> lengths;
    lengths.reserve(dataset.user_count());
    for (const auto& items : dataset.users) lengths.push_back(items.size());
    std::sort(lengths.begin(), lengths.end());

    const std::size_t n = lengths.size();
    // Nearest-rank percentile: the ceil(0.9 n)-th smallest, 1-indexed.
    const std::size_t rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(n)));
    DatasetStats stats;
    stats.user_count = n;
    stats.domain_size = dataset.domain_size;
    stats.min_items = lengths.front();
    stats.max_items = lengths.back();
    stats.p90_items = lengths[rank == 0 ? 0 : rank - 1];
    return stats;
}

} // namespace privsketch
