#include "privsketch/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "privsketch/baselines.hpp"
#include "privsketch/hashing.hpp"
#include "privsketch/ldp.hpp"
#include "privsketch/metrics.hpp"
#include "privsketch/protocol.hpp"
#include "privsketch/rng.hpp"

namespace privsketch {

namespace {

constexpr std::uint64_t kDatasetStream = 0xDA7A5EEDULL;
constexpr std::uint64_t kFamilyStream = 0;
constexpr std::uint64_t kUserStreamBase = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct SimResult {
    FrequencyTable estimates;
    double user_seconds = 0.0;
    double collector_seconds = 0.0;
};

SimResult simulate(Protocol protocol, const Dataset& dataset, std::span<const ItemId> domain,
                   double epsilon, std::uint32_t k_count, std::uint32_t m_size,
                   std::uint32_t pad_length, std::uint64_t repeat_seed) {
    const std::size_t n = dataset.user_count();
    SimResult result;

    auto user_rng = [&](std::size_t i) { return Rng(derive_seed(repeat_seed, kUserStreamBase + i)); };

    switch (protocol) {
    case Protocol::privsketch: {
        const HashFamily family(k_count, m_size, derive_seed(repeat_seed, kFamilyStream));
        const PrivacyParams params{epsilon, k_count, m_size};
        std::vector<UserReport> reports;
        reports.reserve(n);
        auto start = Clock::now();
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = user_rng(i);
            reports.push_back(user_report_sampled(dataset.users[i], params, family, rng));
        }
        result.user_seconds = seconds_since(start);
        start = Clock::now();
        result.estimates = collector_estimate_sampled(reports, family, domain, params);
        result.collector_seconds = seconds_since(start);
        break;
    }
    case Protocol::privsketch_nosmp: {
        const HashFamily family(k_count, m_size, derive_seed(repeat_seed, kFamilyStream));
        const PrivacyParams params{epsilon, k_count, m_size};
        std::vector<FullReport> reports;
        reports.reserve(n);
        auto start = Clock::now();
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = user_rng(i);
            reports.push_back(user_report_full(dataset.users[i], params, family, rng));
        }
        result.user_seconds = seconds_since(start);
        start = Clock::now();
        result.estimates = collector_estimate_full(reports, family, domain, params);
        result.collector_seconds = seconds_since(start);
        break;
    }
    case Protocol::multi_pcms_mean: {
        const HashFamily family(k_count, m_size, derive_seed(repeat_seed, kFamilyStream));
        std::vector<PcmsReport> reports;
        reports.reserve(n);
        auto start = Clock::now();
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = user_rng(i);
            reports.push_back(multi_pcms_user(dataset.users[i], epsilon, family, rng));
        }
        result.user_seconds = seconds_since(start);
        start = Clock::now();
        result.estimates = multi_pcms_mean_estimate(reports, family, domain, epsilon);
        result.collector_seconds = seconds_since(start);
        break;
    }
    case Protocol::multi_pcms_min: {
        const HashFamily family(k_count, m_size, derive_seed(repeat_seed, kFamilyStream));
        std::vector<SignMatrix> reports;
        reports.reserve(n);
        auto start = Clock::now();
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = user_rng(i);
            reports.push_back(multi_pcms_min_user(dataset.users[i], epsilon, family, rng));
        }
        result.user_seconds = seconds_since(start);
        start = Clock::now();
        result.estimates = multi_pcms_min_estimate(reports, family, domain, epsilon);
        result.collector_seconds = seconds_since(start);
        break;
    }
    case Protocol::ps_olh: {
        const OlhParams params = OlhParams::from_epsilon(epsilon);
        std::vector<PsOlhReport> reports;
        reports.reserve(n);
        auto start = Clock::now();
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = user_rng(i);
            reports.push_back(ps_olh_user(dataset.users[i], pad_length, params, rng));
        }
        result.user_seconds = seconds_since(start);
        start = Clock::now();
        result.estimates = ps_olh_estimate(reports, domain, pad_length, epsilon);
        result.collector_seconds = seconds_since(start);
        break;
    }
    }
    return result;
}

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        sum += v;
        ++count;
    }
    if (count == 0) return std::numeric_limits<double>::quiet_NaN();
    return sum / static_cast<double>(count);
}

double stddev_of(const std::vector<double>& values) {
    const double mean = mean_of(values);
    if (std::isnan(mean)) return std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        sum += (v - mean) * (v - mean);
        ++count;
    }
    if (count < 2) return 0.0;
    return std::sqrt(sum / static_cast<double>(count - 1));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return buffer;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

double parse_double_field(const std::string& field) {
    if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::stod(field);
}

} // namespace

const char* protocol_name(Protocol p) {
    switch (p) {
    case Protocol::privsketch: return "privsketch";
    case Protocol::privsketch_nosmp: return "privsketch-nosmp";
    case Protocol::multi_pcms_mean: return "multi-pcms-mean";
    case Protocol::multi_pcms_min: return "multi-pcms-min";
    case Protocol::ps_olh: return "ps-olh";
    }
    return "unknown";
}

Protocol parse_protocol(const std::string& name) {
    if (name == "privsketch") return Protocol::privsketch;
    if (name == "privsketch-nosmp") return Protocol::privsketch_nosmp;
    if (name == "multi-pcms-mean") return Protocol::multi_pcms_mean;
    if (name == "multi-pcms-min") return Protocol::multi_pcms_min;
    if (name == "ps-olh") return Protocol::ps_olh;
    throw std::invalid_argument("unknown protocol: " + name);
}

void ExperimentConfig::validate() const {
    if (protocols.empty()) throw std::invalid_argument("config: no protocols");
    if (epsilons.empty()) throw std::invalid_argument("config: no epsilon values");
    for (double e : epsilons) {
        if (!(e > 0.0) || !std::isfinite(e)) throw std::invalid_argument("config: epsilon must be positive");
    }
    if (k_counts.empty()) throw std::invalid_argument("config: no k values");
    for (std::uint32_t k : k_counts) {
        if (k < 1 || k > 65535) throw std::invalid_argument("config: k must be in [1, 65535]");
    }
    if (m_sizes.empty()) throw std::invalid_argument("config: no m values");
    for (std::uint32_t m : m_sizes) {
        if (m < 2 || m > 65535) throw std::invalid_argument("config: m must be in [2, 65535]");
    }
    if (domain_sizes.empty()) throw std::invalid_argument("config: no d values");
    for (std::uint64_t d : domain_sizes) {
        if (d < 1) throw std::invalid_argument("config: d must be >= 1");
    }
    if (topks.empty()) throw std::invalid_argument("config: no topk values");
    for (std::uint32_t t : topks) {
        if (t < 1) throw std::invalid_argument("config: topk must be >= 1");
    }
    if (repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
    if (!dataset_path && synthetic.n_users < 1) throw std::invalid_argument("config: n must be >= 1");
    if (dataset_path && domain_sizes.size() > 1) {
        throw std::invalid_argument("config: a domain sweep needs synthetic data");
    }
}

ResultTable run_experiment(const ExperimentConfig& config) {
    config.validate();

    // Datasets are fixed across repeats; only the protocol randomness varies.
    std::map<std::uint64_t, Dataset> datasets;
    if (config.dataset_path) {
        Dataset ds = load_transactions(*config.dataset_path);
        datasets.emplace(ds.domain_size, std::move(ds));
    } else {
        for (std::uint64_t d : config.domain_sizes) {
            if (datasets.count(d)) continue;
            const std::uint64_t seed = derive_seed(derive_seed(config.master_seed, kDatasetStream), d);
            datasets.emplace(d, gen_zipf(config.synthetic.n_users, d, config.synthetic.zipf_s,
                                         config.synthetic.draws_per_user, seed));
        }
    }

    std::optional<std::vector<ItemId>> candidates;
    if (config.candidates_path) {
        std::ifstream in(*config.candidates_path);
        if (!in) throw std::runtime_error("cannot open " + *config.candidates_path);
        std::vector<ItemId> ids;
        std::uint64_t id;
        while (in >> id) ids.push_back(id);
        if (ids.empty()) throw std::runtime_error(*config.candidates_path + ": no candidate items");
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        candidates = std::move(ids);
    }

    std::vector<std::uint64_t> effective_domains;
    for (const auto& [d, ds] : datasets) effective_domains.push_back(d);
    if (config.dataset_path) {
        // Single file-backed dataset; its own domain size applies.
    } else {
        effective_domains = config.domain_sizes;
    }

    ResultTable table;
    for (Protocol protocol : config.protocols) {
        for (double epsilon : config.epsilons) {
            for (std::uint32_t k_count : config.k_counts) {
                for (std::uint32_t m_size : config.m_sizes) {
                    for (std::uint64_t d : effective_domains) {
                        const Dataset& dataset = config.dataset_path
                            ? datasets.begin()->second
                            : datasets.at(d);
                        const std::uint64_t domain_size = dataset.domain_size;

                        std::vector<ItemId> domain;
                        if (candidates) {
                            for (ItemId x : *candidates) {
                                if (x >= domain_size) {
                                    throw std::runtime_error("candidate item outside the domain");
                                }
                            }
                            domain = *candidates;
                        } else {
                            domain.resize(domain_size);
                            for (std::uint64_t x = 0; x < domain_size; ++x) domain[x] = x;
                        }

                        const FrequencyTable truth_full = true_frequencies(dataset);
                        FrequencyTable truth;
                        truth.items = domain;
                        truth.values.reserve(domain.size());
                        for (ItemId x : domain) truth.values.push_back(truth_full.values[x]);

                        const DatasetStats stats = dataset_stats(dataset);
                        const std::uint32_t pad_length =
                            static_cast<std::uint32_t>(std::max<std::uint64_t>(1, stats.p90_items));

                        struct RepeatMetrics {
                            std::vector<double> mse, var, ncr, user_s, collector_s;
                        };
                        std::map<std::uint32_t, RepeatMetrics> per_topk;

                        for (std::uint32_t repeat = 0; repeat < config.repeats; ++repeat) {
                            const std::uint64_t repeat_seed = derive_seed(config.master_seed, repeat);
                            SimResult sim = simulate(protocol, dataset, domain, epsilon, k_count,
                                                     m_size, pad_length, repeat_seed);
                            if (config.clip_estimates) clip_to_unit(sim.estimates);
                            for (std::uint32_t tk : config.topks) {
                                RepeatMetrics& bucket = per_topk[tk];
                                bucket.mse.push_back(mse(sim.estimates, truth));
                                bucket.var.push_back(var_topk(sim.estimates, truth,
                                                              dataset.user_count(), tk));
                                bucket.ncr.push_back(ncr(sim.estimates, truth, tk));
                                bucket.user_s.push_back(sim.user_seconds);
                                bucket.collector_s.push_back(sim.collector_seconds);
                            }
                        }

                        for (std::uint32_t tk : config.topks) {
                            const RepeatMetrics& bucket = per_topk.at(tk);
                            for (std::uint32_t repeat = 0; repeat < config.repeats; ++repeat) {
                                table.rows.push_back(ResultRow{
                                    protocol, epsilon, k_count, m_size, dataset.user_count(),
                                    domain_size, tk, static_cast<std::int32_t>(repeat), "",
                                    bucket.mse[repeat], bucket.var[repeat], bucket.ncr[repeat],
                                    bucket.user_s[repeat], bucket.collector_s[repeat]});
                            }
                            table.rows.push_back(ResultRow{
                                protocol, epsilon, k_count, m_size, dataset.user_count(),
                                domain_size, tk, -1, "mean", mean_of(bucket.mse),
                                mean_of(bucket.var), mean_of(bucket.ncr), mean_of(bucket.user_s),
                                mean_of(bucket.collector_s)});
                            table.rows.push_back(ResultRow{
                                protocol, epsilon, k_count, m_size, dataset.user_count(),
                                domain_size, tk, -1, "stddev", stddev_of(bucket.mse),
                                stddev_of(bucket.var), stddev_of(bucket.ncr),
                                stddev_of(bucket.user_s), stddev_of(bucket.collector_s)});
                        }
                    }
                }
            }
        }
    }
    return table;
}

void write_result_csv(const ResultTable& table, std::ostream& out, bool include_times) {
    out << "protocol,epsilon,k,m,n,d,topk,repeat,summary,mse,var,ncr";
    if (include_times) out << ",user_seconds,collector_seconds";
    out << '\n';
    for (const ResultRow& row : table.rows) {
        out << protocol_name(row.protocol) << ',' << format_double(row.epsilon) << ','
            << row.k_count << ',' << row.m_size << ',' << row.n_users << ',' << row.domain_size
            << ',' << row.topk << ',';
        if (row.repeat >= 0) out << row.repeat;
        out << ',' << row.summary << ',' << format_double(row.mse_value) << ','
            << format_double(row.var_topk_value) << ',' << format_double(row.ncr_value);
        if (include_times) {
            out << ',' << format_double(row.user_seconds) << ','
                << format_double(row.collector_seconds);
        }
        out << '\n';
    }
}

ResultTable read_result_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("result csv: empty input");
    const std::vector<std::string> header = split_csv_line(line);
    const std::vector<std::string> base = {"protocol", "epsilon", "k", "m", "n", "d",
                                           "topk", "repeat", "summary", "mse", "var", "ncr"};
    if (header.size() < base.size()) throw std::runtime_error("result csv: bad header");
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (header[i] != base[i]) {
            throw std::runtime_error("result csv: missing column " + base[i]);
        }
    }
    const bool has_times = header.size() >= base.size() + 2 && header[12] == "user_seconds" &&
                           header[13] == "collector_seconds";

    ResultTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < base.size()) {
            throw std::runtime_error("result csv: line " + std::to_string(line_no) + ": too few fields");
        }
        ResultRow row;
        row.protocol = parse_protocol(fields[0]);
        row.epsilon = std::stod(fields[1]);
        row.k_count = static_cast<std::uint32_t>(std::stoul(fields[2]));
        row.m_size = static_cast<std::uint32_t>(std::stoul(fields[3]));
        row.n_users = std::stoull(fields[4]);
        row.domain_size = std::stoull(fields[5]);
        row.topk = static_cast<std::uint32_t>(std::stoul(fields[6]));
        row.repeat = fields[7].empty() ? -1 : static_cast<std::int32_t>(std::stol(fields[7]));
        row.summary = fields[8];
        row.mse_value = parse_double_field(fields[9]);
        row.var_topk_value = parse_double_field(fields[10]);
        row.ncr_value = parse_double_field(fields[11]);
        row.user_seconds = has_times ? parse_double_field(fields[12]) : 0.0;
        row.collector_seconds = has_times ? parse_double_field(fields[13]) : 0.0;
        table.rows.push_back(std::move(row));
    }
    return table;
}

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "epsilon") return SweepAxis::epsilon;
    if (name == "k") return SweepAxis::k;
    if (name == "m") return SweepAxis::m;
    if (name == "d") return SweepAxis::d;
    if (name == "topk") return SweepAxis::topk;
    throw std::invalid_argument("unknown sweep axis: " + name);
}

PlotMetric parse_plot_metric(const std::string& name) {
    if (name == "mse") return PlotMetric::mse;
    if (name == "var") return PlotMetric::var;
    if (name == "ncr") return PlotMetric::ncr;
    if (name == "user_seconds") return PlotMetric::user_seconds;
    if (name == "collector_seconds") return PlotMetric::collector_seconds;
    throw std::invalid_argument("unknown plot metric: " + name);
}

void emit_plot_data(const ResultTable& table, SweepAxis axis, PlotMetric metric,
                    std::ostream& out) {
    auto axis_value = [axis](const ResultRow& row) -> double {
        switch (axis) {
        case SweepAxis::epsilon: return row.epsilon;
        case SweepAxis::k: return static_cast<double>(row.k_count);
        case SweepAxis::m: return static_cast<double>(row.m_size);
        case SweepAxis::d: return static_cast<double>(row.domain_size);
        case SweepAxis::topk: return static_cast<double>(row.topk);
        }
        return 0.0;
    };
    auto axis_name = [axis]() {
        switch (axis) {
        case SweepAxis::epsilon: return "epsilon";
        case SweepAxis::k: return "k";
        case SweepAxis::m: return "m";
        case SweepAxis::d: return "d";
        case SweepAxis::topk: return "topk";
        }
        return "x";
    };
    auto metric_value = [metric](const ResultRow& row) -> double {
        switch (metric) {
        case PlotMetric::mse: return row.mse_value;
        case PlotMetric::var: return row.var_topk_value;
        case PlotMetric::ncr: return row.ncr_value;
        case PlotMetric::user_seconds: return row.user_seconds;
        case PlotMetric::collector_seconds: return row.collector_seconds;
        }
        return 0.0;
    };

    std::vector<double> xs;
    std::vector<Protocol> protocols;
    std::map<std::pair<double, Protocol>, double> points;
    for (const ResultRow& row : table.rows) {
        if (row.summary != "mean") continue;
        const double x = axis_value(row);
        if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
        if (std::find(protocols.begin(), protocols.end(), row.protocol) == protocols.end()) {
            protocols.push_back(row.protocol);
        }
        const auto key = std::make_pair(x, row.protocol);
        if (points.count(key)) {
            throw std::runtime_error("plot: several mean rows per grid point; fix the other axes");
        }
        points.emplace(key, metric_value(row));
    }
    if (points.empty()) throw std::runtime_error("plot: no summary rows in the result table");
    std::sort(xs.begin(), xs.end());
    std::sort(protocols.begin(), protocols.end());

    bool any_finite = false;
    std::ostringstream body;
    body << axis_name();
    for (Protocol p : protocols) {
        std::string column = protocol_name(p);
        std::replace(column.begin(), column.end(), '-', '_');
        body << ',' << column << '_';
        switch (metric) {
        case PlotMetric::mse: body << "mse"; break;
        case PlotMetric::var: body << "var"; break;
        case PlotMetric::ncr: body << "ncr"; break;
        case PlotMetric::user_seconds: body << "user_seconds"; break;
        case PlotMetric::collector_seconds: body << "collector_seconds"; break;
        }
    }
    body << '\n';
    for (double x : xs) {
        body << format_double(x);
        for (Protocol p : protocols) {
            const auto it = points.find(std::make_pair(x, p));
            if (it == points.end()) {
                throw std::runtime_error(std::string("plot: protocol ") + protocol_name(p) +
                                         " is missing a grid point");
            }
            body << ',' << format_double(it->second);
            if (!std::isnan(it->second)) any_finite = true;
        }
        body << '\n';
    }
    if (!any_finite) throw std::runtime_error("plot: metric missing everywhere");
    out << body.str();
}

} // namespace privsketch
