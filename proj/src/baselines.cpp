#include "privsketch/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace privsketch {

namespace {

// p - q of randomized response, written via the flip probability so huge
// budgets stay finite instead of running through inf/inf.
double debias_gap(double epsilon_effective) {
    return 1.0 - 2.0 * flip_probability(epsilon_effective);
}

} // namespace

PcmsReport multi_pcms_user(std::span<const ItemId> items, const HashFamily& family,
                           double flip_prob, Rng& rng) {
    const std::uint32_t m = family.m_size();
    PcmsReport report;
    report.chosen_row = static_cast<std::uint32_t>(rng.uniform_index(family.k_count()));
    report.row_values.assign(m, 0);

    std::vector<std::uint8_t> bits(m, 0);
    for (ItemId item : items) bits[family.column(report.chosen_row, item)] = 1;
    for (std::uint32_t c = 0; c < m; ++c) {
        report.row_values[c] = static_cast<std::int8_t>(rr_perturb_bit(bits[c], flip_prob, rng));
    }
    return report;
}

PcmsReport multi_pcms_user(std::span<const ItemId> items, double epsilon,
                           const HashFamily& family, Rng& rng) {
    return multi_pcms_user(items, family, flip_probability(epsilon / family.m_size()), rng);
}

FrequencyTable multi_pcms_mean_estimate(std::span<const PcmsReport> reports,
                                        const HashFamily& family,
                                        std::span<const ItemId> domain,
                                        double epsilon) {
    if (reports.empty()) throw std::invalid_argument("multi_pcms_mean_estimate: no reports");
    const std::uint32_t kc = family.k_count();
    const std::uint32_t m = family.m_size();
    for (const PcmsReport& r : reports) {
        if (r.chosen_row >= kc || r.row_values.size() != m) {
            throw std::invalid_argument("multi_pcms_mean_estimate: report dimensions mismatch");
        }
    }

    std::vector<std::int64_t> sums(static_cast<std::size_t>(kc) * m, 0);
    for (const PcmsReport& r : reports) {
        std::int64_t* row = sums.data() + static_cast<std::size_t>(r.chosen_row) * m;
        for (std::uint32_t c = 0; c < m; ++c) row[c] += r.row_values[c];
    }

    const double n = static_cast<double>(reports.size());
    const double gap = debias_gap(epsilon / m);
    FrequencyTable table;
    table.items.assign(domain.begin(), domain.end());
    table.values.resize(domain.size());
    for (std::size_t j = 0; j < domain.size(); ++j) {
        double acc = 0.0;
        for (std::uint32_t k = 0; k < kc; ++k) {
            // Row sums carry 1/K of the users each; scale by K, debias, and
            // turn the +-1 aggregate back into an occupancy count.
            const double scaled = static_cast<double>(kc) *
                static_cast<double>(sums[static_cast<std::size_t>(k) * m + family.column(k, domain[j])]);
            const double occupancy = 0.5 * (scaled / gap + n);
            acc += occupancy / n;
        }
        table.values[j] = acc / kc;
    }
    return table;
}

SignMatrix multi_pcms_min_user(std::span<const ItemId> items, const HashFamily& family,
                               double flip_prob, Rng& rng) {
    const std::uint32_t kc = family.k_count();
    const std::uint32_t m = family.m_size();
    SignMatrix cells(kc, m);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(kc) * m, 0);
    for (ItemId item : items) {
        for (std::uint32_t k = 0; k < kc; ++k) bits[static_cast<std::size_t>(k) * m + family.column(k, item)] = 1;
    }
    for (std::uint32_t k = 0; k < kc; ++k) {
        for (std::uint32_t c = 0; c < m; ++c) {
            cells.set(k, c, static_cast<std::int8_t>(
                rr_perturb_bit(bits[static_cast<std::size_t>(k) * m + c], flip_prob, rng)));
        }
    }
    return cells;
}

SignMatrix multi_pcms_min_user(std::span<const ItemId> items, double epsilon,
                               const HashFamily& family, Rng& rng) {
    const double budget = epsilon / (static_cast<double>(family.k_count()) * family.m_size());
    return multi_pcms_min_user(items, family, flip_probability(budget), rng);
}

FrequencyTable multi_pcms_min_estimate(std::span<const SignMatrix> reports,
                                       const HashFamily& family,
                                       std::span<const ItemId> domain,
                                       double epsilon) {
    if (reports.empty()) throw std::invalid_argument("multi_pcms_min_estimate: no reports");
    const std::uint32_t kc = family.k_count();
    const std::uint32_t m = family.m_size();
    for (const SignMatrix& r : reports) {
        if (r.k_count() != kc || r.m_size() != m) {
            throw std::invalid_argument("multi_pcms_min_estimate: report dimensions mismatch");
        }
    }

    std::vector<std::int64_t> sums(static_cast<std::size_t>(kc) * m, 0);
    for (const SignMatrix& r : reports) {
        for (std::uint32_t k = 0; k < kc; ++k) {
            for (std::uint32_t c = 0; c < m; ++c) sums[static_cast<std::size_t>(k) * m + c] += r.at(k, c);
        }
    }

    const double n = static_cast<double>(reports.size());
    const double gap = debias_gap(epsilon / (static_cast<double>(kc) * m));
    FrequencyTable table;
    table.items.assign(domain.begin(), domain.end());
    table.values.resize(domain.size());
    for (std::size_t j = 0; j < domain.size(); ++j) {
        double best = 0.0;
        for (std::uint32_t k = 0; k < kc; ++k) {
            const double aggregate =
                static_cast<double>(sums[static_cast<std::size_t>(k) * m + family.column(k, domain[j])]);
            const double occupancy = 0.5 * (aggregate / gap + n);
            const double value = occupancy / n;
            if (k == 0 || value < best) best = value;
        }
        table.values[j] = best;
    }
    return table;
}

PsOlhReport ps_olh_user(std::span<const ItemId> items, std::uint32_t pad_length,
                        const OlhParams& params, Rng& rng) {
    if (pad_length == 0) throw std::invalid_argument("ps_olh_user: pad_length must be >= 1");
    const std::uint64_t user_seed = rng.next_u64();

    ItemId chosen;
    if (items.size() >= pad_length) {
        // Sampling pad_length items without replacement and then one of
        // those uniformly is the same as sampling one item uniformly.
        chosen = items[rng.uniform_index(items.size())];
    } else {
        const std::uint64_t slot = rng.uniform_index(pad_length);
        chosen = slot < items.size() ? items[slot]
                                     : kPsOlhDummyBase + (slot - items.size());
    }
    return olh_perturb(chosen, params, user_seed, rng);
}

PsOlhReport ps_olh_user(std::span<const ItemId> items, std::uint32_t pad_length,
                        double epsilon, Rng& rng) {
    return ps_olh_user(items, pad_length, OlhParams::from_epsilon(epsilon), rng);
}

FrequencyTable ps_olh_estimate(std::span<const PsOlhReport> reports,
                               std::span<const ItemId> domain,
                               std::uint32_t pad_length, double epsilon) {
    if (reports.empty()) throw std::invalid_argument("ps_olh_estimate: no reports");
    const OlhParams params = OlhParams::from_epsilon(epsilon);
    const double n = static_cast<double>(reports.size());
    FrequencyTable table;
    table.items.assign(domain.begin(), domain.end());
    table.values.resize(domain.size());
    for (std::size_t j = 0; j < domain.size(); ++j) {
        table.values[j] = static_cast<double>(pad_length) *
                          olh_estimate(reports, domain[j], params) / n;
    }
    return table;
}

} // namespace privsketch
