/*
 * Copyright 2026 The destloc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "destloc/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "destloc/cachesim.hpp"
#include "destloc/csv.hpp"
#include "destloc/error.hpp"
#include "destloc/locality.hpp"
#include "destloc/searchcost.hpp"
#include "destloc/trace.hpp"

namespace destloc::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

const std::vector<std::size_t> kDefaultWindows = {5, 10, 20, 50, 100, 200};
const std::vector<double> kConcentrationQuantiles = {0.5, 0.9};
const std::vector<std::size_t> kStackLevels = {1, 2, 5, 10, 20, 50};

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& emit) {
    std::ofstream file(path);
    if (!file) throw Error("cannot open '" + path.string() + "' for writing");
    emit(file);
    file.flush();
    if (!file) throw Error("write failure on '" + path.string() + "'");
}

/// Writes to `path`, or to `fallback` when the path is empty or "-".
void with_output(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& emit) {
    if (path.empty() || path == "-") {
        emit(fallback);
        return;
    }
    write_file(path, emit);
}

struct SweepOptions {
    std::vector<std::string> policies = {"MIN", "LRU", "FIFO", "RAND"};
    std::vector<std::size_t> capacities;
    std::uint64_t seed = 1;
    std::size_t database_size = 0;
    std::string cost = "binary";

    void attach(CLI::App& cmd) {
        cmd.add_option("--policies", policies, "Comma-separated subset of MIN,LRU,FIFO,RAND")
            ->delimiter(',')
            ->capture_default_str();
        cmd.add_option("--capacities", capacities,
                       "Comma-separated cache sizes (default 1,2,4,...,256 below the destination "
                       "count, then the destination count)")
            ->delimiter(',');
        cmd.add_option("--seed", seed, "Seed for the RAND policy")->capture_default_str();
    }

    void attach_cost(CLI::App& cmd) {
        cmd.add_option("--database-size", database_size,
                       "Full table size n (default: distinct destinations)");
        cmd.add_option("--cost", cost, "Lookup cost model: binary | linear | constant")
            ->capture_default_str();
    }

    std::vector<std::size_t> resolved_capacities(std::size_t distinct) const {
        return capacities.empty() ? cachesim::default_capacities(distinct) : capacities;
    }

    std::vector<cachesim::MissCurve> run(std::span<const AddressId> dsts,
                                         std::size_t distinct) const {
        const auto caps = resolved_capacities(distinct);
        std::vector<cachesim::MissCurve> curves;
        for (const auto& name : policies) {
            const auto policy = cachesim::parse_policy(name, seed);
            if (!policy) throw ParameterError("unknown policy '" + name + "'");
            curves.push_back(cachesim::sweep(dsts, *policy, caps));
        }
        return curves;
    }

    std::vector<searchcost::SearchTimeCurve> search_times(
        const std::vector<cachesim::MissCurve>& curves, std::size_t distinct) const {
        const auto model = searchcost::cost_model_by_name(cost);
        if (!model) throw ParameterError("unknown cost model '" + cost + "'");
        const auto n = database_size == 0 ? distinct : database_size;
        std::vector<searchcost::SearchTimeCurve> out;
        for (const auto& c : curves) out.push_back(searchcost::search_time_curve(c, n, *model));
        return out;
    }
};

std::string summary_line(const TraceSummary& s) {
    return "frames=" + std::to_string(s.frame_count) +
           " addresses=" + std::to_string(s.distinct_addresses) +
           " destinations=" + std::to_string(s.distinct_destinations) +
           " hours=" + format_double(s.duration_hours);
}

std::vector<std::string> default_or_explicit_stack(const json& j, std::size_t depth) {
    if (j.contains("stack")) return j.at("stack").get<std::vector<std::string>>();
    return synth::default_stack(j.value("stack_size", depth));
}

synth::GeneratorSpec spec_from(const json& j) {
    synth::GeneratorSpec spec;
    spec.length = j.value("length", std::size_t{0});
    spec.seed = j.value("seed", std::uint64_t{0});
    const auto model = j.at("model").get<std::string>();
    if (model == "uniform") {
        spec.model = synth::UniformIrm{j.at("addresses").get<std::size_t>()};
    } else if (model == "irm") {
        spec.model = synth::Irm{j.at("pmf").get<std::vector<double>>()};
    } else if (model == "cyclic") {
        spec.model = synth::Cyclic{j.at("period").get<std::size_t>()};
    } else if (model == "lsm") {
        std::vector<double> pmf;
        if (j.contains("geometric")) {
            pmf = synth::geometric_pmf(j.at("geometric").get<double>(),
                                       j.at("depth").get<std::size_t>());
        } else {
            pmf = j.at("pmf").get<std::vector<double>>();
        }
        auto stack = default_or_explicit_stack(j, pmf.size());
        spec.model = synth::LruStackModel{std::move(pmf), std::move(stack)};
    } else if (model == "interleave") {
        synth::Interleave mix;
        for (const auto& s : j.at("streams")) {
            mix.streams.push_back(
                {spec_from(s.at("spec")), s.value("weight", std::size_t{1}), s.value("proto", "")});
        }
        spec.model = std::move(mix);
    } else {
        throw SpecError("unknown generator model '" + model + "'");
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void run_report(const Trace& trace, const fs::path& dir, const SweepOptions& sweep,
                std::vector<std::size_t> windows, locality::WindowMode mode) {
    fs::create_directories(dir);
    const auto dsts = trace.destinations();
    const auto summary = summarize(trace);
    const auto distinct = summary.distinct_destinations;

    const auto concentration = locality::concentration_curve(dsts);
    write_file(dir / "concentration.csv",
               [&](std::ostream& o) { locality::write_concentration_csv(concentration, o); });
    write_file(dir / "concentration_quantiles.csv", [&](std::ostream& o) {
        o << "frame_fraction,dest_fraction\n";
        for (auto q : kConcentrationQuantiles) {
            o << format_double(q) << ',' << format_double(concentration.quantile(q)) << '\n';
        }
    });

    const auto runs = locality::run_lengths(dsts);
    write_file(dir / "run_lengths.csv",
               [&](std::ostream& o) { locality::write_run_length_csv(runs, o); });

    std::vector<locality::WorkingSetReport> wss;
    for (auto w : windows) {
        if (w <= dsts.size()) wss.push_back(locality::working_set(dsts, w, mode));
    }
    write_file(dir / "working_set.csv",
               [&](std::ostream& o) { locality::write_working_set_csv(wss, o); });

    const auto stack = locality::stack_distances(dsts).histogram;
    write_file(dir / "stack_distance.csv",
               [&](std::ostream& o) { locality::write_stack_distance_csv(stack, o); });
    write_file(dir / "stack_levels.csv", [&](std::ostream& o) {
        o << "level,cdf\n";
        for (auto level : kStackLevels) o << level << ',' << format_double(stack.cdf(level)) << '\n';
    });

    const auto curves = sweep.run(dsts, distinct);
    write_file(dir / "miss_ratio.csv",
               [&](std::ostream& o) { cachesim::write_miss_ratio_csv(curves, o); });
    write_file(dir / "interfault.csv",
               [&](std::ostream& o) { cachesim::write_interfault_csv(curves, o); });
    const auto times = sweep.search_times(curves, distinct);
    write_file(dir / "search_time.csv",
               [&](std::ostream& o) { searchcost::write_search_time_csv(times, o); });

    write_file(dir / "summary.txt", [&](std::ostream& o) {
        o << summary_line(summary) << '\n';
        for (auto q : kConcentrationQuantiles) {
            o << "top destinations covering " << format_double(q)
              << " of frames: " << format_double(concentration.quantile(q)) << '\n';
        }
        o << "run length 1 frequency: " << format_double(runs.frequency(1)) << '\n';
        o << "first references: " << stack.infinite_count() << '\n';
        for (const auto& t : times) {
            const auto best = searchcost::optimal_cache_size(t);
            o << "optimal cache size " << t.policy << ": " << best.capacity
              << " (normalized search time " << format_double(best.normalized_time) << ")\n";
        }
    });
}

}  // namespace

synth::GeneratorSpec spec_from_json(const std::string& text) {
    try {
        return spec_from(json::parse(text));
    } catch (const json::exception& e) {
        throw SpecError(std::string("generator spec: ") + e.what());
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Locality analysis and cache replacement simulation for address traces",
                 "destloc"};
    app.require_subcommand(1);

    std::string trace_path;
    std::string out_path;

    // summarize
    auto* summarize_cmd = app.add_subcommand("summarize", "Frame, address and duration counts");
    summarize_cmd->add_option("trace", trace_path, "Trace file")->required();
    summarize_cmd->add_option("--out", out_path, "Output file (default stdout)");

    // gen
    synth::GeneratorSpec gen_spec;
    std::size_t uniform_n = 0, cyclic_k = 0, depth = 0, stack_size = 0;
    std::vector<double> irm_pmf, lsm_pmf;
    double geometric = 0.0;
    std::string spec_path;
    auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic trace");
    auto* model_group = gen_cmd->add_option_group("model");
    model_group->add_option("--uniform", uniform_n, "Uniform IRM over N addresses");
    model_group->add_option("--irm-pmf", irm_pmf, "IRM with this per-address pmf")
        ->delimiter(',');
    model_group->add_option("--cyclic", cyclic_k, "Round-robin over K addresses");
    model_group->add_option("--lsm-pmf", lsm_pmf, "LRU stack model, pmf over distances 1..D")
        ->delimiter(',');
    model_group->add_option("--lsm-geometric", geometric,
                            "LRU stack model, pmf proportional to R^(d-1) over 1..--depth");
    model_group->add_option("--spec", spec_path, "JSON generator spec file");
    model_group->require_option(1);
    gen_cmd->add_option("--depth", depth, "Deepest distance for --lsm-geometric");
    gen_cmd->add_option("--stack-size", stack_size,
                        "Initial LRU stack size (default: pmf length)");
    auto* length_opt = gen_cmd->add_option("--length", gen_spec.length, "Reference count");
    auto* seed_opt = gen_cmd->add_option("--seed", gen_spec.seed, "Generator seed");
    gen_cmd->add_option("--out", out_path, "Output trace (default stdout)");

    // split
    std::string proto, match_out, rest_out;
    auto* split_cmd = app.add_subcommand("split", "Split a trace on its protocol field");
    split_cmd->add_option("trace", trace_path, "Trace file")->required();
    split_cmd->add_option("--proto", proto, "Protocol token that selects the first half")
        ->required();
    split_cmd->add_option("--match-out", match_out, "Trace of matching frames")->required();
    split_cmd->add_option("--rest-out", rest_out, "Trace of all other frames")->required();

    // concentration
    auto* conc_cmd =
        app.add_subcommand("concentration", "CSV dest_fraction,frame_fraction");
    conc_cmd->add_option("trace", trace_path, "Trace file")->required();
    conc_cmd->add_option("--out", out_path, "Output file (default stdout)");

    // wss
    std::vector<std::size_t> windows = kDefaultWindows;
    std::string mode_name = "disjoint";
    auto* wss_cmd = app.add_subcommand("wss", "CSV window,mode,avg_wss");
    wss_cmd->add_option("trace", trace_path, "Trace file")->required();
    wss_cmd->add_option("--windows", windows, "Comma-separated window sizes")
        ->delimiter(',')
        ->capture_default_str();
    wss_cmd->add_option("--mode", mode_name, "disjoint | sliding")->capture_default_str();
    wss_cmd->add_option("--out", out_path, "Output file (default stdout)");

    // stackdist
    bool naive = false;
    auto* stack_cmd = app.add_subcommand(
        "stackdist", "CSV distance,count,pdf,cdf; final 'inf' row holds first references");
    stack_cmd->add_option("trace", trace_path, "Trace file")->required();
    stack_cmd->add_flag("--naive", naive, "Use the O(N*D) linear stack walk");
    stack_cmd->add_option("--out", out_path, "Output file (default stdout)");

    // runs
    auto* runs_cmd = app.add_subcommand("runs", "CSV length,count,frequency");
    runs_cmd->add_option("trace", trace_path, "Trace file")->required();
    runs_cmd->add_option("--out", out_path, "Output file (default stdout)");

    // simulate
    SweepOptions sweep;
    std::string out_dir = ".";
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Write miss_ratio.csv and interfault.csv (capacity,<policy>...)");
    sim_cmd->add_option("trace", trace_path, "Trace file")->required();
    sweep.attach(*sim_cmd);
    sim_cmd->add_option("--out-dir", out_dir, "Directory for the CSVs")->capture_default_str();

    // searchtime
    auto* st_cmd = app.add_subcommand("searchtime", "CSV capacity,<policy>... of normalized time");
    st_cmd->add_option("trace", trace_path, "Trace file")->required();
    sweep.attach(*st_cmd);
    sweep.attach_cost(*st_cmd);
    st_cmd->add_option("--out", out_path, "Output file (default stdout)");

    // report
    std::string split_proto;
    auto* report_cmd = app.add_subcommand("report", "Run every analysis into one directory");
    report_cmd->add_option("trace", trace_path, "Trace file")->required();
    sweep.attach(*report_cmd);
    sweep.attach_cost(*report_cmd);
    report_cmd->add_option("--windows", windows, "Working-set window sizes")
        ->delimiter(',')
        ->capture_default_str();
    report_cmd->add_option("--mode", mode_name, "disjoint | sliding")->capture_default_str();
    report_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
    report_cmd->add_option("--split-proto", split_proto,
                           "Also report matching/ and rest/ sub-traces for this protocol");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const auto window_mode = [&] {
        const auto m = locality::parse_window_mode(mode_name);
        if (!m) throw ParameterError("unknown working-set mode '" + mode_name + "'");
        return *m;
    };

    try {
        if (summarize_cmd->parsed()) {
            const auto trace = parse_trace_file(trace_path);
            with_output(out_path, out,
                        [&](std::ostream& o) { o << summary_line(summarize(trace)) << '\n'; });
        } else if (gen_cmd->parsed()) {
            synth::GeneratorSpec spec = gen_spec;
            if (!spec_path.empty()) {
                std::ifstream in(spec_path);
                if (!in) throw Error("cannot open spec file '" + spec_path + "'");
                std::stringstream buf;
                buf << in.rdbuf();
                spec = spec_from_json(buf.str());
                if (length_opt->count() > 0) spec.length = gen_spec.length;
                if (seed_opt->count() > 0) spec.seed = gen_spec.seed;
            } else if (uniform_n > 0) {
                spec.model = synth::UniformIrm{uniform_n};
            } else if (!irm_pmf.empty()) {
                spec.model = synth::Irm{irm_pmf};
            } else if (cyclic_k > 0) {
                spec.model = synth::Cyclic{cyclic_k};
            } else {
                auto pmf = lsm_pmf.empty() ? synth::geometric_pmf(geometric, depth) : lsm_pmf;
                auto stack = synth::default_stack(stack_size == 0 ? pmf.size() : stack_size);
                spec.model = synth::LruStackModel{std::move(pmf), std::move(stack)};
            }
            const auto trace = synth::generate(spec);
            with_output(out_path, out, [&](std::ostream& o) { write_trace(trace, o); });
        } else if (split_cmd->parsed()) {
            const auto trace = parse_trace_file(trace_path);
            const auto [hit, rest] = split_by_protocol(trace, protocol_equals(proto));
            write_trace_file(hit, match_out);
            write_trace_file(rest, rest_out);
        } else if (conc_cmd->parsed()) {
            const auto curve = locality::concentration_curve(parse_trace_file(trace_path).destinations());
            with_output(out_path, out,
                        [&](std::ostream& o) { locality::write_concentration_csv(curve, o); });
        } else if (wss_cmd->parsed()) {
            const auto dsts = parse_trace_file(trace_path).destinations();
            const auto mode = window_mode();
            std::vector<locality::WorkingSetReport> reports;
            for (auto w : windows) reports.push_back(locality::working_set(dsts, w, mode));
            with_output(out_path, out,
                        [&](std::ostream& o) { locality::write_working_set_csv(reports, o); });
        } else if (stack_cmd->parsed()) {
            const auto dsts = parse_trace_file(trace_path).destinations();
            const auto result = locality::stack_distances(
                dsts, naive ? locality::StackAlgorithm::kNaive : locality::StackAlgorithm::kFenwick);
            with_output(out_path, out, [&](std::ostream& o) {
                locality::write_stack_distance_csv(result.histogram, o);
            });
        } else if (runs_cmd->parsed()) {
            const auto runs = locality::run_lengths(parse_trace_file(trace_path).destinations());
            with_output(out_path, out,
                        [&](std::ostream& o) { locality::write_run_length_csv(runs, o); });
        } else if (sim_cmd->parsed()) {
            const auto trace = parse_trace_file(trace_path);
            const auto distinct = summarize(trace).distinct_destinations;
            const auto curves = sweep.run(trace.destinations(), distinct);
            const fs::path dir(out_dir);
            fs::create_directories(dir);
            write_file(dir / "miss_ratio.csv",
                       [&](std::ostream& o) { cachesim::write_miss_ratio_csv(curves, o); });
            write_file(dir / "interfault.csv",
                       [&](std::ostream& o) { cachesim::write_interfault_csv(curves, o); });
        } else if (st_cmd->parsed()) {
            const auto trace = parse_trace_file(trace_path);
            const auto distinct = summarize(trace).distinct_destinations;
            const auto curves = sweep.run(trace.destinations(), distinct);
            const auto times = sweep.search_times(curves, distinct);
            with_output(out_path, out,
                        [&](std::ostream& o) { searchcost::write_search_time_csv(times, o); });
        } else if (report_cmd->parsed()) {
            const auto trace = parse_trace_file(trace_path);
            const auto mode = window_mode();
            const fs::path dir(out_dir);
            run_report(trace, dir, sweep, windows, mode);
            if (!split_proto.empty()) {
                const auto [hit, rest] = split_by_protocol(trace, protocol_equals(split_proto));
                if (!hit.empty()) run_report(hit, dir / "matching", sweep, windows, mode);
                if (!rest.empty()) run_report(rest, dir / "rest", sweep, windows, mode);
            }
        }
    } catch (const std::exception& e) {
        err << "destloc: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}

}  // namespace destloc::cli
