#include "privsketch/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace privsketch {

namespace {

void check_family(const PrivacyParams& params, const HashFamily& family) {
    params.validate();
    if (params.k_count != family.k_count() || params.m_size != family.m_size()) {
        throw std::invalid_argument("privacy params and hash family disagree on dimensions");
    }
}

/// Columns of every domain item under every hash function, laid out
/// [item][k] so the per-report scan stays cache friendly. Computed once per
/// decode; the per-user work only reads it.
std::vector<std::uint32_t> domain_columns(std::span<const ItemId> domain, const HashFamily& family) {
    const std::uint32_t kc = family.k_count();
    std::vector<std::uint32_t> cols(domain.size() * kc);
    for (std::size_t j = 0; j < domain.size(); ++j) {
        for (std::uint32_t k = 0; k < kc; ++k) {
            cols[j * kc + k] = family.column(k, domain[j]);
        }
    }
    return cols;
}

// (e^eps + 1) / (e^eps - 1), written via the flip probability so huge
// budgets do not run through inf/inf.
double calibration_scale(double epsilon_effective) {
    return 1.0 / (1.0 - 2.0 * flip_probability(epsilon_effective));
}

} // namespace

UserReport user_report_sampled(std::span<const ItemId> items, const HashFamily& family,
                               double flip_prob, Rng& rng) {
    const BoolSketch sketch = encode(items, family);
    OrderingMatrix ordering = generate_ordering_matrix(sketch, rng);
    const std::uint64_t cell = rng.uniform_index(sketch.cell_count());
    const std::uint16_t row = static_cast<std::uint16_t>(cell / sketch.m_size());
    const std::uint16_t col = static_cast<std::uint16_t>(cell % sketch.m_size());
    const int bit = sketch.cell(row, col) ? 1 : 0;
    const std::int8_t value = static_cast<std::int8_t>(rr_perturb_bit(bit, flip_prob, rng));
    return UserReport{row, col, value, std::move(ordering)};
}

UserReport user_report_sampled(std::span<const ItemId> items, const PrivacyParams& params,
                               const HashFamily& family, Rng& rng) {
    check_family(params, family);
    return user_report_sampled(items, family, flip_probability(params.per_counter_budget(true)), rng);
}

FullReport user_report_full(std::span<const ItemId> items, const HashFamily& family,
                            double flip_prob, Rng& rng) {
    const BoolSketch sketch = encode(items, family);
    OrderingMatrix ordering = generate_ordering_matrix(sketch, rng);
    SignMatrix cells(sketch.k_count(), sketch.m_size());
    for (std::uint32_t k = 0; k < sketch.k_count(); ++k) {
        for (std::uint32_t m = 0; m < sketch.m_size(); ++m) {
            const int bit = sketch.cell(k, m) ? 1 : 0;
            cells.set(k, m, static_cast<std::int8_t>(rr_perturb_bit(bit, flip_prob, rng)));
        }
    }
    return FullReport{std::move(cells), std::move(ordering)};
}

FullReport user_report_full(std::span<const ItemId> items, const PrivacyParams& params,
                            const HashFamily& family, Rng& rng) {
    check_family(params, family);
    return user_report_full(items, family, flip_probability(params.per_counter_budget(false)), rng);
}

FrequencyTable collector_estimate_sampled(std::span<const UserReport> reports,
                                          const HashFamily& family,
                                          std::span<const ItemId> domain,
                                          const PrivacyParams& params) {
    check_family(params, family);
    if (reports.empty()) throw std::invalid_argument("collector_estimate_sampled: no reports");
    const std::uint32_t kc = family.k_count();
    for (const UserReport& r : reports) {
        if (r.ordering.k_count() != kc || r.ordering.m_size() != family.m_size()) {
            throw std::invalid_argument("collector_estimate_sampled: report dimensions mismatch");
        }
    }

    const std::vector<std::uint32_t> cols = domain_columns(domain, family);
    std::vector<std::int64_t> sums(domain.size(), 0);
    std::vector<std::int64_t> matches(domain.size(), 0);

    for (const UserReport& report : reports) {
        for (std::size_t j = 0; j < domain.size(); ++j) {
            const std::uint32_t* item_cols = cols.data() + j * kc;
            std::uint32_t best_k = 0;
            std::uint32_t best_rank = report.ordering.rank(0, item_cols[0]);
            for (std::uint32_t k = 1; k < kc; ++k) {
                const std::uint32_t r = report.ordering.rank(k, item_cols[k]);
                if (r < best_rank) {
                    best_rank = r;
                    best_k = k;
                }
            }
            if (report.sampled_row == best_k && report.sampled_col == item_cols[best_k]) {
                sums[j] += report.perturbed_value;
                matches[j] += 1;
            }
        }
    }

    const double scale = calibration_scale(params.per_counter_budget(true));
    FrequencyTable table;
    table.items.assign(domain.begin(), domain.end());
    table.values.resize(domain.size());
    for (std::size_t j = 0; j < domain.size(); ++j) {
        table.values[j] = matches[j] == 0
            ? 0.5
            : 0.5 * (scale * static_cast<double>(sums[j]) / static_cast<double>(matches[j]) + 1.0);
    }
    return table;
}

FrequencyTable collector_estimate_full(std::span<const FullReport> reports,
                                       const HashFamily& family,
                                       std::span<const ItemId> domain,
                                       const PrivacyParams& params) {
    check_family(params, family);
    if (reports.empty()) throw std::invalid_argument("collector_estimate_full: no reports");
    const std::uint32_t kc = family.k_count();
    for (const FullReport& r : reports) {
        if (r.ordering.k_count() != kc || r.ordering.m_size() != family.m_size() ||
            r.cells.k_count() != kc || r.cells.m_size() != family.m_size()) {
            throw std::invalid_argument("collector_estimate_full: report dimensions mismatch");
        }
    }

    const std::vector<std::uint32_t> cols = domain_columns(domain, family);
    std::vector<std::int64_t> sums(domain.size(), 0);

    for (const FullReport& report : reports) {
        for (std::size_t j = 0; j < domain.size(); ++j) {
            const std::uint32_t* item_cols = cols.data() + j * kc;
            std::uint32_t best_k = 0;
            std::uint32_t best_rank = report.ordering.rank(0, item_cols[0]);
            for (std::uint32_t k = 1; k < kc; ++k) {
                const std::uint32_t r = report.ordering.rank(k, item_cols[k]);
                if (r < best_rank) {
                    best_rank = r;
                    best_k = k;
                }
            }
            sums[j] += report.cells.at(best_k, item_cols[best_k]);
        }
    }

    const double scale = calibration_scale(params.per_counter_budget(false));
    const double n = static_cast<double>(reports.size());
    FrequencyTable table;
    table.items.assign(domain.begin(), domain.end());
    table.values.resize(domain.size());
    for (std::size_t j = 0; j < domain.size(); ++j) {
        table.values[j] = 0.5 * (scale * static_cast<double>(sums[j]) / n + 1.0);
    }
    return table;
}

bool check_decode_first_inequality(const std::vector<std::vector<ItemId>>& users,
                                   std::uint64_t domain_size, const HashFamily& family) {
    const std::uint32_t kc = family.k_count();
    std::vector<BoolSketch> sketches;
    sketches.reserve(users.size());
    for (const auto& items : users) {
        sketches.push_back(encode(items, family));
    }

    for (ItemId x = 0; x < domain_size; ++x) {
        std::vector<std::int64_t> per_row(kc, 0);
        std::int64_t sum_of_mins = 0;
        std::int64_t truth = 0;
        for (std::size_t i = 0; i < users.size(); ++i) {
            int min_cell = 1;
            for (std::uint32_t k = 0; k < kc; ++k) {
                const int cell = sketches[i].cell(k, family.column(k, x)) ? 1 : 0;
                per_row[k] += cell;
                if (cell == 0) min_cell = 0;
            }
            sum_of_mins += min_cell;
            for (ItemId held : users[i]) {
                if (held == x) {
                    ++truth;
                    break;
                }
            }
        }
        std::int64_t min_of_sums = per_row[0];
        for (std::uint32_t k = 1; k < kc; ++k) {
            if (per_row[k] < min_of_sums) min_of_sums = per_row[k];
        }
        if (!(min_of_sums >= sum_of_mins && sum_of_mins >= truth)) return false;
    }
    return true;
}

} // namespace privsketch
