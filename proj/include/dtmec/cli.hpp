#pragma once

#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dtmec/experiments.hpp"
#include "dtmec/verify.hpp"

namespace dtmec {

namespace detail {

inline std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        values.push_back(parse_double("value list", trim(item)));
    return values;
}

inline std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        seeds.push_back(
            static_cast<std::uint64_t>(parse_int("seed list", trim(item))));
    return seeds;
}

inline std::vector<DesignId> parse_design_list(const std::string& text) {
    std::vector<DesignId> designs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto id = parse_design(trim(item));
        if (!id) throw ModelError("unknown design: " + trim(item) +
                                  " (expected one of proposed, dqn, "
                                  "no_f_opt, local_only, greedy_devices, "
                                  "no_dt)");
        designs.push_back(*id);
    }
    return designs;
}

} // namespace detail

// Command driver shared by the binary and the tests. Argument order matches
// main(): the program name is not included.
inline int run_cli(const std::vector<std::string>& args,
                   std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"digital-twin UAV edge offloading simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string design_name_arg = "proposed";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int episodes = 0;
    bool literal_eq7 = false;
    bool retrain_policy = false;
    bool dump_trace = false;
    bool dump_trajectory = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config file");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "override the config seed")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--episodes", episodes,
                        "override the training episode count");
        cmd->add_flag("--literal-eq7", literal_eq7,
                      "use the printed direction recursion");
        cmd->add_flag("--retrain-policy", retrain_policy,
                      "retrain the policy after the first joint pass");
    };

    CLI::App* train_cmd =
        app.add_subcommand("train", "train one design and emit artifacts");
    add_common(train_cmd);
    train_cmd->add_option("--design", design_name_arg, "design to run");
    train_cmd->add_flag("--trace", dump_trace, "dump the evaluation trace");
    train_cmd->add_flag("--trajectory", dump_trajectory,
                        "dump an MTU mobility trace");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run a (value x design x seed) grid");
    add_common(sweep_cmd);
    std::string variable = "L";
    std::string values_arg;
    std::string seeds_arg = "1,2,3,4,5";
    std::string designs_arg = "proposed";
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    sweep_cmd->add_option("--variable", variable,
                          "L | M | deviation_delta | f_max_mtu | "
                          "learning_rate");
    sweep_cmd->add_option("--values", values_arg, "comma-separated values")
        ->required();
    sweep_cmd->add_option("--seeds", seeds_arg, "comma-separated seeds");
    sweep_cmd->add_option("--designs", designs_arg,
                          "comma-separated design names");
    sweep_cmd->add_option("--jobs", jobs, "worker pool size");

    CLI::App* report_cmd =
        app.add_subcommand("report", "summarize a sweep's summary.csv");
    std::string summary_path;
    report_cmd->add_option("--summary", summary_path,
                           "summary.csv path (default <out>/summary.csv)");
    report_cmd->add_option("--out", out_dir, "sweep output directory");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the model's property oracles");
    (void)verify_cmd;

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        ScenarioConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed_set) cfg.seed = seed;
        if (episodes > 0) cfg.episodes = episodes;
        if (literal_eq7) cfg.literal_eq7 = true;
        if (retrain_policy) cfg.retrain_policy = true;
        cfg.validate();

        if (train_cmd->parsed()) {
            const auto id = parse_design(design_name_arg);
            if (!id) {
                err << "error: unknown design '" << design_name_arg
                    << "'\n" << app.help();
                return 2;
            }
            const std::filesystem::path dir =
                std::filesystem::path(out_dir) / design_name(*id) /
                std::to_string(cfg.seed);
            CellArtifacts artifacts;
            artifacts.dump_trace = dump_trace;
            artifacts.dump_trajectory = dump_trajectory;
            const DesignRun run = run_cell(cfg, *id, dir, artifacts);
            out << "design " << design_name(*id) << " seed " << cfg.seed
                << ": total " << csv_num(run.metrics.total_energy)
                << " J, MTU " << csv_num(run.metrics.mtu_energy)
                << " J, UAV " << csv_num(run.metrics.uav_energy)
                << " J, violations " << csv_num(run.metrics.violations)
                << "\n";
            out << "artifacts in " << dir.string() << "\n";
            return 0;
        }

        if (sweep_cmd->parsed()) {
            SweepSpec spec;
            spec.variable = variable;
            spec.values = detail::parse_value_list(values_arg);
            spec.seeds = detail::parse_seed_list(seeds_arg);
            spec.designs = detail::parse_design_list(designs_arg);
            const SweepResult result =
                run_sweep(cfg, spec, out_dir, std::max(1, jobs));
            out << render_summary(result.summary);
            out << "summary in "
                << (std::filesystem::path(out_dir) / "summary.csv").string()
                << "\n";
            return 0;
        }

        if (report_cmd->parsed()) {
            const std::filesystem::path path =
                summary_path.empty()
                    ? std::filesystem::path(out_dir) / "summary.csv"
                    : std::filesystem::path(summary_path);
            out << render_report(read_csv(path));
            return 0;
        }

        // verify
        bool all = true;
        for (const CheckResult& c : run_property_checks()) {
            out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": "
                << c.detail << "\n";
            all = all && c.pass;
        }
        return all ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace dtmec
