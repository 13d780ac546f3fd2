#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include "dtmec/baselines.hpp"
#include "dtmec/csv.hpp"

namespace dtmec {

inline std::string render_learning_curve(
    const std::vector<EpisodeStats>& curve) {
    std::ostringstream out;
    out << "episode,total_reward,epsilon,loss\n";
    for (const EpisodeStats& row : curve)
        out << row.episode << ',' << csv_num(row.total_reward) << ','
            << csv_num(row.epsilon) << ',' << csv_num(row.mean_loss) << '\n';
    return out.str();
}

inline std::string render_convergence(const std::vector<ConvergenceRow>& log) {
    std::ostringstream out;
    out << "iteration,objective,frac_decrease\n";
    for (const ConvergenceRow& row : log)
        out << row.iteration << ',' << csv_num(row.objective) << ','
            << csv_num(row.frac_decrease) << '\n';
    return out.str();
}

inline std::string render_metrics(DesignId design, std::uint64_t seed,
                                  const DesignMetrics& m) {
    std::ostringstream out;
    out << "design,seed,total_energy,mtu_energy,uav_energy,violations\n";
    out << design_name(design) << ',' << seed << ','
        << csv_num(m.total_energy) << ',' << csv_num(m.mtu_energy) << ','
        << csv_num(m.uav_energy) << ',' << csv_num(m.violations) << '\n';
    return out.str();
}

inline std::string render_trace(int episode,
                                const std::vector<TraceRecord>& trace) {
    std::ostringstream out;
    out << "episode,slot,mtu,action,latency,energy,violation\n";
    for (const TraceRecord& rec : trace)
        out << episode << ',' << rec.slot << ',' << rec.mtu << ','
            << rec.action << ',' << csv_num(rec.outcome.total_latency) << ','
            << csv_num(rec.outcome.total_energy) << ',' << rec.violations
            << '\n';
    return out.str();
}

inline std::string render_trajectory(const std::vector<TrajectoryRow>& rows) {
    std::ostringstream out;
    out << "slot,mtu,x,y,v,theta\n";
    for (const TrajectoryRow& r : rows)
        out << r.slot << ',' << r.mtu << ',' << csv_num(r.x) << ','
            << csv_num(r.y) << ',' << csv_num(r.v) << ',' << csv_num(r.theta)
            << '\n';
    return out.str();
}

struct CellArtifacts {
    bool dump_trace = false;
    bool dump_trajectory = false;
};

// Runs one (config, design) cell and writes its artifacts. The directory
// layout and file contents depend only on config, seed, and design.
inline DesignRun run_cell(const ScenarioConfig& cfg, DesignId design,
                          const std::filesystem::path& dir,
                          const CellArtifacts& artifacts = {}) {
    const WorldLayout world = build_world(cfg);
    DesignRun run = run_design(design, cfg, world);
    if (!dir.empty()) {
        write_text_file(dir / "config.cfg", serialize_config(cfg));
        write_text_file(dir / "metrics.csv",
                        render_metrics(design, cfg.seed, run.metrics));
        write_text_file(dir / "convergence.csv",
                        render_convergence(run.convergence));
        if (!run.curve.empty())
            write_text_file(dir / "curve.csv",
                            render_learning_curve(run.curve));
        if (run.policy) {
            std::ostringstream net;
            run.policy->save(net);
            write_text_file(dir / "checkpoint.qnet", net.str());
        }
        if (artifacts.dump_trace)
            write_text_file(dir / "trace.csv",
                            render_trace(cfg.episodes, run.eval_trace));
        if (artifacts.dump_trajectory) {
            Environment env(cfg, world, design_plan(design));
            env.reset(cfg.episodes);
            while (!env.done()) env.apply(0);
            write_text_file(dir / "trajectory.csv",
                            render_trajectory(env.trajectory()));
        }
    }
    return run;
}

struct SweepSpec {
    std::string variable; // L | M | deviation_delta | f_max_mtu | learning_rate
    std::vector<double> values;
    std::vector<std::uint64_t> seeds;
    std::vector<DesignId> designs;
};

inline ScenarioConfig apply_sweep_value(ScenarioConfig cfg,
                                        const std::string& variable,
                                        double value) {
    if (variable == "L") {
        cfg.task_bits_min = value;
        cfg.task_bits_max = value;
    } else if (variable == "M") {
        cfg.mtu_count = static_cast<int>(value);
    } else if (variable == "deviation_delta") {
        // The deviation experiment sweeps the edge servers' twin error as a
        // uniform positive fraction.
        cfg.server_deviation_delta = value;
        cfg.deviation_positive = true;
    } else if (variable == "f_max_mtu") {
        cfg.mtu_f_max_hz = value;
    } else if (variable == "learning_rate") {
        cfg.learning_rate = value;
    } else {
        throw ModelError("unknown sweep variable: " + variable);
    }
    cfg.validate();
    return cfg;
}

struct SummaryRow {
    std::string variable;
    double value = 0.0;
    std::string design;
    int seeds = 0;
    double mean_total_energy = 0.0;
    double std_total_energy = 0.0;
    double mean_mtu_energy = 0.0;
    double mean_uav_energy = 0.0;
    double mean_violations = 0.0;
};

inline std::string render_summary(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "variable,value,design,seeds,mean_total_energy,std_total_energy,"
           "mean_mtu_energy,mean_uav_energy,mean_violations\n";
    for (const SummaryRow& r : rows)
        out << r.variable << ',' << csv_num(r.value) << ',' << r.design << ','
            << r.seeds << ',' << csv_num(r.mean_total_energy) << ','
            << csv_num(r.std_total_energy) << ','
            << csv_num(r.mean_mtu_energy) << ','
            << csv_num(r.mean_uav_energy) << ','
            << csv_num(r.mean_violations) << '\n';
    return out.str();
}

struct SweepResult {
    std::vector<SummaryRow> summary;
    // Per-seed totals keyed by (value, design), in spec order.
    std::map<std::pair<double, std::string>, std::vector<double>> totals;
    std::map<std::pair<double, std::string>, std::vector<double>> violations;
};

// Grid of (value x design x seed) cells on a bounded worker pool. Cells are
// independent; artifacts land under out/<variable>_<value>/<design>/<seed>/.
inline SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec,
                             const std::filesystem::path& out_dir, int jobs) {
    if (spec.values.empty() || spec.seeds.empty() || spec.designs.empty())
        throw ModelError("sweep needs values, seeds, and designs");

    struct Cell {
        double value;
        DesignId design;
        std::uint64_t seed;
        DesignMetrics metrics;
        std::string error;
    };
    std::vector<Cell> cells;
    for (double value : spec.values)
        for (DesignId design : spec.designs)
            for (std::uint64_t seed : spec.seeds)
                cells.push_back({value, design, seed, {}, {}});

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            Cell& cell = cells[i];
            try {
                ScenarioConfig cfg =
                    apply_sweep_value(base, spec.variable, cell.value);
                cfg.seed = cell.seed;
                std::filesystem::path dir;
                if (!out_dir.empty())
                    dir = out_dir /
                          (spec.variable + "_" + csv_num(cell.value)) /
                          design_name(cell.design) /
                          std::to_string(cell.seed);
                cell.metrics = run_cell(cfg, cell.design, dir).metrics;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };
    const int n_workers = std::max(
        1, std::min<int>(jobs, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    for (const Cell& c : cells)
        if (!c.error.empty()) throw ModelError("sweep cell failed: " + c.error);

    SweepResult result;
    for (double value : spec.values) {
        for (DesignId design : spec.designs) {
            SummaryRow row;
            row.variable = spec.variable;
            row.value = value;
            row.design = design_name(design);
            std::vector<double> totals;
            for (const Cell& c : cells) {
                if (c.value != value || c.design != design) continue;
                ++row.seeds;
                totals.push_back(c.metrics.total_energy);
                row.mean_total_energy += c.metrics.total_energy;
                row.mean_mtu_energy += c.metrics.mtu_energy;
                row.mean_uav_energy += c.metrics.uav_energy;
                row.mean_violations += c.metrics.violations;
                result.totals[{value, row.design}].push_back(
                    c.metrics.total_energy);
                result.violations[{value, row.design}].push_back(
                    c.metrics.violations);
            }
            row.mean_total_energy /= row.seeds;
            row.mean_mtu_energy /= row.seeds;
            row.mean_uav_energy /= row.seeds;
            row.mean_violations /= row.seeds;
            double var = 0.0;
            for (double t : totals) var += sq(t - row.mean_total_energy);
            row.std_total_energy =
                totals.size() > 1 ? std::sqrt(var / (totals.size() - 1)) : 0.0;
            result.summary.push_back(row);
        }
    }
    if (!out_dir.empty())
        write_text_file(out_dir / "summary.csv",
                        render_summary(result.summary));
    return result;
}

// Human-readable digest of a sweep summary: per-cell means and, where the
// proposed design is present, signed percentage gaps (E_base - E_prop) /
// E_base against every other design.
inline std::string render_report(const CsvTable& summary) {
    if (summary.rows.empty()) throw ModelError("report: summary has no rows");
    const int c_var = summary.column("variable");
    const int c_val = summary.column("value");
    const int c_design = summary.column("design");
    const int c_mean = summary.column("mean_total_energy");
    const int c_std = summary.column("std_total_energy");
    const int c_viol = summary.column("mean_violations");

    std::map<std::pair<std::string, std::string>,
             std::vector<std::vector<std::string>>>
        groups;
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto& row : summary.rows) {
        const auto key = std::make_pair(row[c_var], row[c_val]);
        if (groups.find(key) == groups.end()) order.push_back(key);
        groups[key].push_back(row);
    }

    std::ostringstream out;
    for (const auto& key : order) {
        out << key.first << " = " << key.second << "\n";
        double proposed = 0.0;
        bool has_proposed = false;
        for (const auto& row : groups[key]) {
            if (row[c_design] == "proposed") {
                proposed = std::stod(row[c_mean]);
                has_proposed = true;
            }
        }
        for (const auto& row : groups[key]) {
            out << "  " << row[c_design] << ": total "
                << csv_num(std::stod(row[c_mean])) << " J (std "
                << csv_num(std::stod(row[c_std])) << "), violations "
                << csv_num(std::stod(row[c_viol]));
            if (has_proposed && row[c_design] != "proposed") {
                const double base = std::stod(row[c_mean]);
                const double gap =
                    base != 0.0 ? (base - proposed) / base * 100.0 : 0.0;
                out << ", saving vs proposed " << csv_num(gap) << "%";
            }
            out << "\n";
        }
    }
    return out.str();
}

} // namespace dtmec
