#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "privsketch/dataset.hpp"
#include "privsketch/types.hpp"

namespace privsketch {

enum class Protocol {
    privsketch,
    privsketch_nosmp,
    multi_pcms_mean,
    multi_pcms_min,
    ps_olh,
};

const char* protocol_name(Protocol p);
Protocol parse_protocol(const std::string& name);

/// Synthetic dataset knobs (used when no transaction file is given).
struct SyntheticSpec {
    std::uint64_t n_users = 10000;
    double zipf_s = 1.1;
    std::uint32_t draws_per_user = 100;
};

/// A full experiment grid. Every list is swept; the cartesian product of
/// (protocol, epsilon, k, m, d, topk) defines the parameter combinations,
/// each run `repeats` times with seeds derived from `master_seed`.
struct ExperimentConfig {
    std::vector<Protocol> protocols = {Protocol::privsketch};
    std::vector<double> epsilons = {3.0};
    std::vector<std::uint32_t> k_counts = {4};
    std::vector<std::uint32_t> m_sizes = {128};
    std::vector<std::uint64_t> domain_sizes = {1000}; // synthetic only
    std::vector<std::uint32_t> topks = {32};
    std::uint32_t repeats = 10;
    std::uint64_t master_seed = 1;
    SyntheticSpec synthetic;
    std::optional<std::string> dataset_path; // transaction file overrides synthetic
    std::optional<std::string> candidates_path; // restrict the query domain
    bool clip_estimates = false;

    void validate() const;
};

/// One result line. Per-repeat rows have summary == "" and a repeat index;
/// aggregated rows carry summary == "mean" or "stddev" and repeat == -1.
struct ResultRow {
    Protocol protocol;
    double epsilon;
    std::uint32_t k_count;
    std::uint32_t m_size;
    std::uint64_t n_users;
    std::uint64_t domain_size;
    std::uint32_t topk;
    std::int32_t repeat;
    std::string summary;
    double mse_value;
    double var_topk_value; // NaN = missing
    double ncr_value;
    double user_seconds;
    double collector_seconds;
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

/// Runs the whole grid. Deterministic: the same config and seed produce the
/// same rows (wall-clock fields excepted; the CSV writer omits them unless
/// asked).
ResultTable run_experiment(const ExperimentConfig& config);

/// CSV with one header row, one row per (combination, repeat) and two
/// summary rows (mean, stddev) per combination. Timing columns only appear
/// when `include_times` is set; without them the bytes are a pure function
/// of (config, master_seed).
void write_result_csv(const ResultTable& table, std::ostream& out, bool include_times = false);

/// Parses a CSV produced by write_result_csv (either flavour).
ResultTable read_result_csv(std::istream& in);

enum class SweepAxis { epsilon, k, m, d, topk };
enum class PlotMetric { mse, var, ncr, user_seconds, collector_seconds };

SweepAxis parse_sweep_axis(const std::string& name);
PlotMetric parse_plot_metric(const std::string& name);

/// Pivots the mean rows of a result table into figure-ready CSV: one x
/// column for the swept axis and one column per protocol. Fails if the
/// table has no mean rows, a protocol is missing a point of the grid, or
/// the metric is missing everywhere.
void emit_plot_data(const ResultTable& table, SweepAxis axis, PlotMetric metric,
                    std::ostream& out);

} // namespace privsketch
