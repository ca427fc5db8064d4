#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "privsketch/baselines.hpp"
#include "privsketch/dataset.hpp"
#include "privsketch/harness.hpp"
#include "privsketch/hashing.hpp"
#include "privsketch/protocol.hpp"
#include "privsketch/rng.hpp"
#include "privsketch/wire.hpp"

namespace {

using namespace privsketch;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, ',')) {
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> values;
    for (const std::string& p : split_list(text)) values.push_back(std::stod(p));
    return values;
}

std::vector<std::uint32_t> parse_u32s(const std::string& text) {
    std::vector<std::uint32_t> values;
    for (const std::string& p : split_list(text)) {
        values.push_back(static_cast<std::uint32_t>(std::stoul(p)));
    }
    return values;
}

std::vector<std::uint64_t> parse_u64s(const std::string& text) {
    std::vector<std::uint64_t> values;
    for (const std::string& p : split_list(text)) values.push_back(std::stoull(p));
    return values;
}

void write_text_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

struct RunArgs {
    std::string config_path;
    std::string protocols = "privsketch";
    std::string epsilons = "3";
    std::string k_counts = "4";
    std::string m_sizes = "128";
    std::string domains = "1000";
    std::string topks = "32";
    std::uint64_t n_users = 10000;
    double zipf_s = 1.1;
    std::uint32_t draws = 100;
    std::uint32_t repeats = 10;
    std::uint64_t seed = 1;
    std::string dataset_path;
    std::string candidates_path;
    std::string out_path;
    std::string times_path;
    bool clip = false;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value) {
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    throw std::invalid_argument("expected true/false");
}

/// Applies a flat key=value file to `args`. Keys match the run flags. Values
/// given on the command line win, so a key is skipped when its flag was set.
void apply_config_file(RunArgs& args, const CLI::App& run) {
    std::ifstream in(args.config_path);
    if (!in) throw std::runtime_error("cannot open config " + args.config_path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(args.config_path + ":" + std::to_string(line_no) +
                                     ": expected key=value");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        try {
            if (run.count("--" + key) > 0) continue;
            if (key == "protocol") args.protocols = value;
            else if (key == "epsilon") args.epsilons = value;
            else if (key == "k") args.k_counts = value;
            else if (key == "m") args.m_sizes = value;
            else if (key == "d") args.domains = value;
            else if (key == "topk") args.topks = value;
            else if (key == "n") args.n_users = std::stoull(value);
            else if (key == "zipf-s") args.zipf_s = std::stod(value);
            else if (key == "draws") args.draws = static_cast<std::uint32_t>(std::stoul(value));
            else if (key == "repeats") args.repeats = static_cast<std::uint32_t>(std::stoul(value));
            else if (key == "seed") args.seed = std::stoull(value);
            else if (key == "dataset") args.dataset_path = value;
            else if (key == "candidates") args.candidates_path = value;
            else if (key == "out") args.out_path = value;
            else if (key == "times") args.times_path = value;
            else if (key == "clip") args.clip = parse_bool(value);
            else throw std::invalid_argument("unknown key");
        } catch (const std::exception& err) {
            throw std::runtime_error(args.config_path + ":" + std::to_string(line_no) + ": " +
                                     key + ": " + err.what());
        }
    }
}

int cmd_run(const RunArgs& args) {
    ExperimentConfig config;
    config.protocols.clear();
    for (const std::string& name : split_list(args.protocols)) {
        config.protocols.push_back(parse_protocol(name));
    }
    config.epsilons = parse_doubles(args.epsilons);
    config.k_counts = parse_u32s(args.k_counts);
    config.m_sizes = parse_u32s(args.m_sizes);
    config.domain_sizes = parse_u64s(args.domains);
    config.topks = parse_u32s(args.topks);
    config.repeats = args.repeats;
    config.master_seed = args.seed;
    config.synthetic.n_users = args.n_users;
    config.synthetic.zipf_s = args.zipf_s;
    config.synthetic.draws_per_user = args.draws;
    if (!args.dataset_path.empty()) config.dataset_path = args.dataset_path;
    if (!args.candidates_path.empty()) config.candidates_path = args.candidates_path;
    config.clip_estimates = args.clip;

    const ResultTable table = run_experiment(config);

    std::ostringstream csv;
    write_result_csv(table, csv);
    write_text_output(args.out_path, csv.str());

    if (!args.times_path.empty()) {
        std::ostringstream timed;
        write_result_csv(table, timed, true);
        write_text_output(args.times_path, timed.str());
    }
    return 0;
}

int cmd_stats(const std::string& dataset_path, std::uint64_t n, std::uint64_t d, double zipf_s,
              std::uint32_t draws, std::uint64_t seed) {
    Dataset dataset = dataset_path.empty()
        ? gen_zipf(n, d, zipf_s, draws, derive_seed(derive_seed(seed, 0xDA7A5EEDULL), d))
        : load_transactions(dataset_path);
    const DatasetStats stats = dataset_stats(dataset);
    std::cout << "n,d,max,min,p90\n";
    std::cout << stats.user_count << ',' << stats.domain_size << ',' << stats.max_items << ','
              << stats.min_items << ',' << stats.p90_items << '\n';
    return 0;
}

int cmd_gen(std::uint64_t n, std::uint64_t d, double zipf_s, std::uint32_t draws,
            std::uint64_t seed, const std::string& out_path) {
    const Dataset dataset = gen_zipf(n, d, zipf_s, draws, derive_seed(derive_seed(seed, 0xDA7A5EEDULL), d));
    save_transactions(dataset, out_path);
    return 0;
}

std::string encode_batch_to_string(const ReportBatch& batch) {
    std::ostringstream out(std::ios::binary);
    if (batch.mode == ReportMode::sampled) {
        write_reports(out, batch.sampled, batch.k_count, batch.m_size);
    } else {
        write_reports(out, batch.full, batch.k_count, batch.m_size);
    }
    return out.str();
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int report_io_roundtrip(const std::string& path) {
    const ReportBatch batch = read_reports_file(path);
    const std::string reencoded = encode_batch_to_string(batch);
    if (reencoded != read_file_bytes(path)) {
        std::cerr << "roundtrip mismatch: " << path << '\n';
        return 1;
    }
    const std::uint64_t n = batch.mode == ReportMode::sampled ? batch.sampled.size()
                                                              : batch.full.size();
    std::cout << "roundtrip OK: mode="
              << (batch.mode == ReportMode::sampled ? "sampled" : "full") << " k=" << batch.k_count
              << " m=" << batch.m_size << " n=" << n << " bytes=" << reencoded.size() << '\n';
    return 0;
}

int cmd_report_io(const std::string& mode, std::uint32_t k, std::uint32_t m, std::uint64_t count,
                  std::uint64_t seed, const std::string& out_path, const std::string& inspect_path) {
    if (!inspect_path.empty()) {
        const ReportBatch batch = read_reports_file(inspect_path);
        const std::uint64_t n = batch.mode == ReportMode::sampled ? batch.sampled.size()
                                                                  : batch.full.size();
        std::cout << "mode=" << (batch.mode == ReportMode::sampled ? "sampled" : "full")
                  << " k=" << batch.k_count << " m=" << batch.m_size << " n=" << n << '\n';
        return 0;
    }
    if (out_path.empty()) throw CLI::ValidationError("report-io", "--out or --inspect is required");

    const HashFamily family(k, m, derive_seed(seed, 0));
    const PrivacyParams params{3.0, k, m};
    Rng rng(derive_seed(seed, 1));

    auto random_items = [&]() {
        std::vector<ItemId> items(rng.uniform_index(5));
        for (ItemId& x : items) x = rng.next_u64() % 1000;
        return items;
    };

    if (mode == "sampled") {
        std::vector<UserReport> reports;
        reports.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto items = random_items();
            reports.push_back(user_report_sampled(items, params, family, rng));
        }
        write_reports_file(out_path, reports, static_cast<std::uint16_t>(k),
                           static_cast<std::uint16_t>(m));
    } else if (mode == "full") {
        std::vector<FullReport> reports;
        reports.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto items = random_items();
            reports.push_back(user_report_full(items, params, family, rng));
        }
        write_reports_file(out_path, reports, static_cast<std::uint16_t>(k),
                           static_cast<std::uint16_t>(m));
    } else {
        throw CLI::ValidationError("report-io", "--mode must be sampled or full");
    }
    return report_io_roundtrip(out_path);
}

int cmd_plot(const std::vector<std::string>& inputs, const std::string& axis,
             const std::string& metric, const std::string& out_path) {
    ResultTable merged;
    for (const std::string& path : inputs) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        ResultTable table = read_result_csv(in);
        merged.rows.insert(merged.rows.end(), table.rows.begin(), table.rows.end());
    }
    std::ostringstream out;
    emit_plot_data(merged, parse_sweep_axis(axis), parse_plot_metric(metric), out);
    write_text_output(out_path, out.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Locally private frequency estimation simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Run an experiment grid and write a result CSV");
    run->add_option("--config", run_args.config_path,
                    "Flat key=value config file; command-line flags win");
    run->add_option("--protocol", run_args.protocols,
                    "Comma list of privsketch, privsketch-nosmp, multi-pcms-mean, multi-pcms-min, ps-olh");
    run->add_option("--epsilon", run_args.epsilons, "Comma list of privacy budgets");
    run->add_option("--k", run_args.k_counts, "Comma list of hash-function counts");
    run->add_option("--m", run_args.m_sizes, "Comma list of sketch widths");
    run->add_option("--d", run_args.domains, "Comma list of synthetic domain sizes");
    run->add_option("--topk", run_args.topks, "Comma list of top-k sizes for Var/NCR");
    run->add_option("--n", run_args.n_users, "Synthetic user count");
    run->add_option("--zipf-s", run_args.zipf_s, "Synthetic Zipf exponent");
    run->add_option("--draws", run_args.draws, "Synthetic draws per user");
    run->add_option("--repeats", run_args.repeats, "Repeats per parameter combination");
    run->add_option("--seed", run_args.seed, "Master seed");
    run->add_option("--dataset", run_args.dataset_path, "Transaction file (overrides synthetic data)");
    run->add_option("--candidates", run_args.candidates_path, "File of item ids to query");
    run->add_option("--out", run_args.out_path, "Result CSV path (default stdout)");
    run->add_option("--times", run_args.times_path, "Also write a CSV with timing columns");
    run->add_flag("--clip", run_args.clip, "Clip estimates to [0, 1] before metrics");

    std::string stats_dataset;
    std::uint64_t stats_n = 10000, stats_d = 1000, stats_seed = 1;
    double stats_zipf = 1.1;
    std::uint32_t stats_draws = 100;
    CLI::App* stats = app.add_subcommand("stats", "Print dataset stats as one CSV row: n,d,max,min,p90");
    stats->add_option("--dataset", stats_dataset, "Transaction file (otherwise synthetic)");
    stats->add_option("--n", stats_n, "Synthetic user count");
    stats->add_option("--d", stats_d, "Synthetic domain size");
    stats->add_option("--zipf-s", stats_zipf, "Synthetic Zipf exponent");
    stats->add_option("--draws", stats_draws, "Synthetic draws per user");
    stats->add_option("--seed", stats_seed, "Master seed");

    std::uint64_t gen_n = 10000, gen_d = 1000, gen_seed = 1;
    double gen_zipf_s = 1.1;
    std::uint32_t gen_draws = 100;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "Write a synthetic Zipf transaction file");
    gen->add_option("--n", gen_n, "User count");
    gen->add_option("--d", gen_d, "Domain size");
    gen->add_option("--zipf-s", gen_zipf_s, "Zipf exponent");
    gen->add_option("--draws", gen_draws, "Draws per user");
    gen->add_option("--seed", gen_seed, "Master seed");
    gen->add_option("--out", gen_out, "Output path")->required();

    std::string rio_mode = "sampled", rio_out, rio_inspect;
    std::uint32_t rio_k = 2, rio_m = 8;
    std::uint64_t rio_count = 100, rio_seed = 1;
    CLI::App* rio = app.add_subcommand("report-io", "Write and verify report batches on disk");
    rio->add_option("--mode", rio_mode, "sampled or full");
    rio->add_option("--k", rio_k, "Hash-function count");
    rio->add_option("--m", rio_m, "Sketch width");
    rio->add_option("--count", rio_count, "Number of reports");
    rio->add_option("--seed", rio_seed, "Master seed");
    rio->add_option("--out", rio_out, "Write a batch here and verify the roundtrip");
    rio->add_option("--inspect", rio_inspect, "Print the header of an existing batch");

    std::vector<std::string> plot_inputs;
    std::string plot_axis = "epsilon", plot_metric = "mse", plot_out;
    CLI::App* plot = app.add_subcommand("plot", "Pivot result CSVs into figure-ready columns");
    plot->add_option("--in", plot_inputs, "Result CSV (repeatable)")->required();
    plot->add_option("--x", plot_axis, "Sweep axis: epsilon, k, m, d or topk");
    plot->add_option("--metric", plot_metric, "mse, var, ncr, user_seconds or collector_seconds");
    plot->add_option("--out", plot_out, "Output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (!run_args.config_path.empty()) apply_config_file(run_args, *run);
            return cmd_run(run_args);
        }
        if (stats->parsed()) {
            return cmd_stats(stats_dataset, stats_n, stats_d, stats_zipf, stats_draws, stats_seed);
        }
        if (gen->parsed()) return cmd_gen(gen_n, gen_d, gen_zipf_s, gen_draws, gen_seed, gen_out);
        if (rio->parsed()) {
            return cmd_report_io(rio_mode, rio_k, rio_m, rio_count, rio_seed, rio_out, rio_inspect);
        }
        if (plot->parsed()) return cmd_plot(plot_inputs, plot_axis, plot_metric, plot_out);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
