// Copyright 2026 The wbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: plan, carve, run-1d, run-2d, master-eq, sweep.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wbqc/beam.hpp"
#include "wbqc/carving.hpp"
#include "wbqc/errors.hpp"
#include "wbqc/harness.hpp"
#include "wbqc/master_equation.hpp"

using namespace wbqc;
using namespace wbqc::harness;

namespace {

constexpr int kUsageError = 2;
constexpr int kCapacityError = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// unreadable inputs are the caller's problem, so they map to the usage exit code
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Global {
    std::uint64_t seed = 0;
    std::size_t trials = 1;
    unsigned jobs = 1;
    std::string out = "-";
    std::string format;
    std::string summary;
};

class Output {
  public:
    explicit Output(const std::string &path) : path_(path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw IoError("cannot open " + path + " for writing");
        }
    }
    std::ostream &stream() { return path_ == "-" ? std::cout : file_; }
    void line(const std::string &s) { stream() << s << '\n'; }
    void close() {
        stream().flush();
        if (!stream()) throw IoError("write failed on " + (path_ == "-" ? std::string("stdout") : path_));
    }

  private:
    std::string path_;
    std::ofstream file_;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Format format_or(const Global &g, Format fallback) { return g.format.empty() ? fallback : parse_format(g.format); }

void write_summary(const Global &g, const std::string &json) {
    if (g.summary.empty()) {
        std::cerr << json << '\n';
        return;
    }
    Output o(g.summary);
    o.line(json);
    o.close();
}

PfModel parse_pf_model(const std::string &s) {
    if (s == "exact") return PfModel::exact;
    if (s == "uniform") return PfModel::uniform;
    throw InvalidArgument("unknown p_f model '" + s + "' (exact or uniform)");
}

/// Turns key=value lines into --key=value arguments appended after the
/// command line, so file entries take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::vector<std::string> extra, kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file name");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            kept.push_back(args[i]);
            continue;
        }
        std::istringstream in(read_file(path));
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw CLI::ConversionError(path + ":" + std::to_string(lineno) + ": expected key=value");
            std::string key = trim(line.substr(0, eq));
            while (!key.empty() && key.front() == '-') key.erase(key.begin());
            extra.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
        }
    }
    kept.insert(kept.end(), extra.begin(), extra.end());
    return kept;
}

template <class T>
std::string join_rows(const std::vector<T> &rows, Format f, const std::string &header,
                      std::string (*csv)(const T &), std::string (*json)(const T &)) {
    std::string s;
    if (f == Format::csv) s += header + '\n';
    for (const auto &r : rows) s += (f == Format::csv ? csv(r) : json(r)) + '\n';
    return s;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Beam-addressed one-way quantum computing simulator"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Global g;
    std::string config_path;
    app.add_option("--seed", g.seed, "Master seed; trial i uses seed xor i");
    app.add_option("--trials", g.trials, "Number of trials");
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--out", g.out, "Output path, - for stdout");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--summary", g.summary, "Write run statistics here instead of stderr");
    app.add_option("--config", config_path, "key=value file; entries override flags");

    // plan
    auto *plan = app.add_subcommand("plan", "Beam offset and chain separation table");
    std::vector<double> plan_r{4.0, 10.0};
    double plan_pt = 0.99, plan_pf = 0.01, plan_pm = 1e-10;
    plan->add_option("--r", plan_r, "Beam radius in lattice spacings (repeatable)");
    plan->add_option("--pt", plan_pt, "Target projection probability");
    plan->add_option("--pf", plan_pf, "First-neighbour projection probability");
    plan->add_option("--pm", plan_pm, "Adjacent-chain projection probability");

    // sweep
    auto *sweep = app.add_subcommand("sweep", "Cartesian sweep over planner or run parameters");
    std::string sweep_scenario = "plan";
    std::vector<double> sw_r{4.0, 10.0}, sw_pt{0.99}, sw_pf{0.01}, sw_pm{1e-10};
    sweep->add_option("--scenario", sweep_scenario, "plan, run-1d or run-2d")
        ->check(CLI::IsMember({"plan", "run-1d", "run-2d"}));
    auto *sweep_r = sweep->add_option("--r", sw_r, "Beam radii (run scenarios default to 1.5)")->delimiter(',');
    auto *sweep_pt = sweep->add_option("--pt", sw_pt, "Target probabilities (run scenarios default to 0.999)")->delimiter(',');
    sweep->add_option("--pf", sw_pf, "Neighbour probabilities")->delimiter(',');
    sweep->add_option("--pm", sw_pm, "Adjacent-chain probabilities (plan only)")->delimiter(',');

    // carve
    auto *carve = app.add_subcommand("carve", "Carving pulse plan for a #/. grid");
    std::string carve_grid, carve_report;
    double carve_r = 1.5;
    bool carve_no_verify = false;
    carve->add_option("grid", carve_grid, "Grid file ('#' keep, '.' drop)")->required();
    carve->add_option("--r", carve_r, "Beam radius");
    carve->add_option("--report", carve_report, "Verification report path (default stderr)");
    carve->add_flag("--no-verify", carve_no_verify, "Skip the state-vector verification");

    // run-1d
    auto *run1 = app.add_subcommand("run-1d", "Single-qubit rotation on a chain");
    Run1DConfig c1;
    std::string pf_model1 = "exact", input1 = "random";
    bool uniform_pf = false, reveal1 = false;
    run1->add_option("--alpha1", c1.target.alpha1, "First Euler angle (radians)");
    run1->add_option("--alpha2", c1.target.alpha2, "Second Euler angle (radians)");
    run1->add_option("--alpha3", c1.target.alpha3, "Third Euler angle (radians)");
    run1->add_option("--r", c1.protocol.r, "Beam radius");
    run1->add_option("--offset-n", c1.protocol.offset_n, "Beam offset in spacings");
    run1->add_option("--pt", c1.protocol.p_t, "Target projection probability");
    run1->add_option("--pf-model", pf_model1, "exact or uniform")->check(CLI::IsMember({"exact", "uniform"}));
    run1->add_flag("--uniform-pf", uniform_pf, "Same as --pf-model uniform");
    run1->add_option("--pf", c1.protocol.p_f, "Uniform-model neighbour probability");
    run1->add_option("--reach", c1.protocol.reach, "Uniform-model reach (default: --protect)");
    run1->add_option("--protect", c1.protocol.m_protect, "Protected neighbours m");
    run1->add_option("--chain-len", c1.protocol.chain_length, "Chain length including the output");
    run1->add_option("--input", input1, "random, plus or zero");
    run1->add_flag("--reveal-hidden", reveal1, "Include hidden projections in the records");

    // run-2d
    auto *run2 = app.add_subcommand("run-2d", "CZ between two chains through a zig-zag link");
    Run2DConfig c2;
    std::string pf_model2 = "uniform", input2 = "random", layout_file;
    bool reveal2 = false;
    run2->add_option("--m-sep", c2.m_sep, "Chain separation in rows");
    run2->add_option("--link-shape", c2.link_shape, "D/R moves from the junction");
    run2->add_option("--junction", c2.junction, "Junction column");
    run2->add_option("--width", c2.width, "Columns");
    run2->add_option("--layout", layout_file, "Grid file instead of --m-sep/--link-shape");
    run2->add_option("--r", c2.protocol.r, "Beam radius");
    run2->add_option("--offset-n", c2.protocol.offset_n, "Beam offset in spacings");
    run2->add_option("--pt", c2.protocol.p_t, "Target projection probability");
    run2->add_option("--pf-model", pf_model2, "exact or uniform")->check(CLI::IsMember({"exact", "uniform"}));
    run2->add_option("--pf", c2.protocol.p_f, "Uniform-model neighbour probability");
    run2->add_flag("--ambiguous-signal", c2.protocol.ambiguous_signal, "Only zero/nonzero fluorescence");
    run2->add_flag("--beam-on-group", c2.protocol.beam_on_group, "Centre beams on the group's mean row");
    run2->add_option("--input", input2, "random, plus or zero");
    run2->add_flag("--reveal-hidden", reveal2, "Include hidden projections in the records");

    // master-eq
    auto *meq = app.add_subcommand("master-eq", "Coherence decay of a weakly driven three-level atom");
    std::vector<double> ratios{0.005, 0.01, 0.02};
    double s_final = 4.0;
    int samples = 200;
    meq->add_option("--ratio", ratios, "Omega/gamma values")->delimiter(',');
    meq->add_option("--s-final", s_final, "Final Omega^2 t / (2 gamma)");
    meq->add_option("--samples", samples, "Sample points");

    for (auto *sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
    try {
        std::vector<std::string> fwd(args.rbegin(), args.rend());
        fwd = expand_config(std::move(fwd));
        args.assign(fwd.rbegin(), fwd.rend());
        app.parse(args);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsageError;
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (*plan) {
            std::vector<PlanRow> rows;
            for (double r : plan_r) rows.push_back(plan_row(r, plan_pt, plan_pf, plan_pm));
            Output o(g.out);
            o.stream() << join_rows<PlanRow>(rows, format_or(g, Format::csv), csv_header_plan(), row_csv, row_json);
            o.close();
        } else if (*sweep) {
            const Format f = format_or(g, Format::csv);
            Output o(g.out);
            if (sweep_scenario == "plan") {
                std::vector<PlanRow> rows;
                for (double r : sw_r)
                    for (double pt : sw_pt)
                        for (double pf : sw_pf)
                            for (double pm : sw_pm) rows.push_back(plan_row(r, pt, pf, pm));
                o.stream() << join_rows<PlanRow>(rows, f, csv_header_plan(), row_csv, row_json);
            } else {
                if (sweep_r->count() == 0) sw_r = {1.5};
                if (sweep_pt->count() == 0) sw_pt = {0.999};
                if (f == Format::csv) o.line("r,p_t,p_f,trials,completed,target_miss,mean_fidelity,min_fidelity,error");
                for (double r : sw_r)
                    for (double pt : sw_pt)
                        for (double pf : sw_pf) {
                            std::size_t done = 0, miss = 0;
                            double mean = 0, worst = 0;
                            std::string stats, error;
                            try {
                            if (sweep_scenario == "run-1d") {
                                Run1DConfig c;
                                c.protocol.r = r;
                                c.protocol.p_t = pt;
                                c.protocol.p_f = pf;
                                c.protocol.pf_model = PfModel::uniform;
                                c.protocol.chain_length = 20;
                                c.seed = g.seed;
                                c.trials = g.trials;
                                c.jobs = g.jobs;
                                const auto s = summarize_1d(run_1d(c));
                                done = s.completed, miss = s.target_miss, mean = s.mean_fidelity, worst = s.min_fidelity;
                                stats = statistics_json(s);
                            } else {
                                Run2DConfig c;
                                c.protocol.r = r;
                                c.protocol.p_t = pt;
                                c.protocol.p_f = pf;
                                c.seed = g.seed;
                                c.trials = g.trials;
                                c.jobs = g.jobs;
                                const auto s = summarize_2d(run_2d(c));
                                done = s.completed, miss = s.target_miss, mean = s.mean_fidelity, worst = s.min_fidelity;
                                stats = statistics_json(s);
                            }
                            } catch (const IllConditioned &e) {
                                error = e.what();
                            }
                            if (f == Format::csv) {
                                o.line(format_double(r) + ',' + format_double(pt) + ',' + format_double(pf) + ',' +
                                       std::to_string(g.trials) + ',' + std::to_string(done) + ',' +
                                       std::to_string(miss) + ',' + format_double(mean) + ',' + format_double(worst) + ',' +
                                       json_string(error));
                            } else {
                                JsonLine row;
                                row.add("r", r).add("p_t", pt).add("p_f", pf);
                                if (error.empty())
                                    row.add_raw("statistics", stats);
                                else
                                    row.add("error", error);
                                o.line(row.str());
                            }
                        }
            }
            o.close();
        } else if (*carve) {
            const auto [geometry, spec] = parse_grid(read_file(carve_grid));
            const auto cp = plan_carve(geometry, spec, carve_r);
            const Format f = format_or(g, Format::csv);
            Output o(g.out);
            if (f == Format::csv) o.line("site_x,site_y,theta");
            for (const auto &p : cp.pulses) {
                const auto &s = geometry.site(p.center);
                if (f == Format::csv)
                    o.line(std::to_string(s.x) + ',' + std::to_string(s.y) + ',' + format_double(p.theta));
                else
                    o.line(JsonLine().add("site_x", s.x).add("site_y", s.y).add("theta", p.theta).str());
            }
            o.close();
            JsonLine report;
            report.add("sites", static_cast<unsigned long long>(geometry.size()))
                .add("r", carve_r)
                .add("condition_number", cp.condition_number);
            double worst = 0.0;
            const auto net = replay_carve(cp, geometry);
            for (std::size_t i = 0; i < net.size(); ++i) worst = std::max(worst, std::abs(net[i] - cp.target_net[i]));
            report.add("max_net_angle_error", worst);
            if (!carve_no_verify) {
                const auto state = entangle(apply_carve(cp, geometry), geometry);
                const auto rep = verify_cluster(state, spec, geometry);
                report.add("fidelity", rep.fidelity)
                    .add("stabilizer_violations", static_cast<unsigned long long>(rep.stabilizer_violations))
                    .add("drop_violations", static_cast<unsigned long long>(rep.drop_violations))
                    .add("stabilizer_expectations", rep.stabilizer_expectations);
            }
            if (carve_report.empty()) {
                std::cerr << report.str() << '\n';
            } else {
                Output r(carve_report);
                r.line(report.str());
                r.close();
            }
        } else if (*run1) {
            c1.protocol.pf_model = uniform_pf ? PfModel::uniform : parse_pf_model(pf_model1);
            c1.input = parse_input(input1);
            c1.seed = g.seed;
            c1.trials = g.trials;
            c1.jobs = g.jobs;
            const auto results = run_1d(c1);
            const Format f = format_or(g, Format::json);
            Output o(g.out);
            if (f == Format::csv) o.line(csv_header_1d());
            for (const auto &r : results) o.line(f == Format::csv ? record_csv(r) : record_json(r, reveal1));
            o.close();
            write_summary(g, statistics_json(summarize_1d(results)));
        } else if (*run2) {
            c2.protocol.pf_model = parse_pf_model(pf_model2);
            c2.input = parse_input(input2);
            if (!layout_file.empty()) c2.grid = read_file(layout_file);
            c2.seed = g.seed;
            c2.trials = g.trials;
            c2.jobs = g.jobs;
            const auto results = run_2d(c2);
            const Format f = format_or(g, Format::json);
            Output o(g.out);
            if (f == Format::csv) o.line(csv_header_2d());
            for (const auto &r : results) o.line(f == Format::csv ? record_csv(r) : record_json(r, reveal2));
            o.close();
            write_summary(g, statistics_json(summarize_2d(results)));
        } else if (*meq) {
            const Format f = format_or(g, Format::csv);
            Output o(g.out);
            if (f == Format::csv)
                o.line("ratio,rate,predicted_rate,relative_error,max_population_drift,max_probability_error,"
                       "max_trace_error,min_eigenvalue");
            for (double ratio : ratios) {
                if (!(ratio > 0)) throw InvalidArgument("Omega/gamma must be positive");
                const auto fit = fit_coherence_decay(ratio, 1.0, s_final, samples);
                const double rel = std::abs(fit.rate - fit.predicted_rate) / fit.predicted_rate;
                if (f == Format::csv) {
                    o.line(format_double(ratio) + ',' + format_double(fit.rate) + ',' + format_double(fit.predicted_rate) +
                           ',' + format_double(rel) + ',' + format_double(fit.max_population_drift) + ',' +
                           format_double(fit.max_probability_error) + ',' + format_double(fit.max_trace_error) + ',' +
                           format_double(fit.min_eigenvalue));
                } else {
                    o.line(JsonLine()
                               .add("ratio", ratio)
                               .add("rate", fit.rate)
                               .add("predicted_rate", fit.predicted_rate)
                               .add("relative_error", rel)
                               .add("max_population_drift", fit.max_population_drift)
                               .add("max_probability_error", fit.max_probability_error)
                               .add("max_trace_error", fit.max_trace_error)
                               .add("min_eigenvalue", fit.min_eigenvalue)
                               .str());
                }
            }
            o.close();
        }
    } catch (const CapacityError &e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kCapacityError;
    } catch (const std::invalid_argument &e) {  // InvalidArgument, InvalidLayout
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
