// sphere_dubins: plan, certify and sample shortest curvature-constrained
// paths on the unit sphere with free terminal heading.
//
//   sphere_dubins plan   [instance.json] --r 0.4 --target x,y,z [--r0 9 entries] [--samples N] [--text]
//   sphere_dubins oracle [instance.json] ... [--grid-step h] [--max-segments k]
//   sphere_dubins verify [--dl-samples N] [--tol t] [--json]
//   sphere_dubins sample [instance.json] ... --samples N [--out path]
//
// Exit codes: 0 success, 1 verification failure, 2 input or domain error,
// 3 internal consistency failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sphere_dubins/io.hpp"
#include "sphere_dubins/sphere_dubins.hpp"

namespace sd = sphere_dubins;

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct CommonArgs {
    std::string instance_path;
    std::optional<double> r;
    std::string target;
    std::string r0;
    std::optional<int> samples;
    std::optional<double> grid_step;
    std::optional<int> max_segments;
    bool json = false;
    bool text = false;
    std::string out;
};

void add_instance_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("instance", a.instance_path, "Instance file (JSON, format 1)");
    cmd->add_option("--r", a.r, "Tight-turn radius (0 < r <= 0.5)");
    cmd->add_option("--target", a.target, "Final location x,y,z (unit vector)");
    cmd->add_option("--r0", a.r0, "Initial frame, 9 comma-separated entries, row-major (default identity)");
    cmd->add_option("--samples", a.samples, "Number of waypoints to emit");
    auto* json = cmd->add_flag("--json", a.json, "Machine-readable JSON output (default)");
    auto* text = cmd->add_flag("--text", a.text, "Human-readable output");
    json->excludes(text);
}

sd::io::Instance load_instance(const CommonArgs& a) {
    sd::io::Instance inst;
    bool have_r = false;
    bool have_target = false;
    if (!a.instance_path.empty()) {
        std::ifstream in(a.instance_path);
        if (!in) throw sd::io::InputError("cannot open instance file '" + a.instance_path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        inst = sd::io::parse_instance_text(ss.str());
        have_r = have_target = true;
    }
    if (a.r) {
        inst.r = *a.r;
        have_r = true;
    }
    if (!a.target.empty()) {
        const auto v = sd::io::parse_list(a.target, 3, "--target");
        inst.target = sd::io::normalize_target({v[0], v[1], v[2]});
        have_target = true;
    }
    if (!a.r0.empty()) {
        const auto v = sd::io::parse_list(a.r0, 9, "--r0");
        for (int i = 0; i < 9; ++i) inst.r0(i / 3, i % 3) = v[i];
    }
    if (a.samples) inst.options.samples = a.samples;
    if (a.grid_step) inst.options.grid_step = a.grid_step;
    if (a.max_segments) inst.options.max_segments = a.max_segments;
    if (!have_r) throw sd::io::InputError("missing --r (or an instance file)");
    if (!have_target) throw sd::io::InputError("missing --target (or an instance file)");
    if (inst.r > sd::kMaxPlanningRadius) throw sd::io::InputError("r must be ≤ 0.5, got " + sd::io::format_number(inst.r));
    return inst;
}

struct Solved {
    sd::io::Instance inst;
    sd::Configuration start;
    sd::TurnRadius radius;
    sd::Plan plan;
};

Solved solve(const CommonArgs& a) {
    auto inst = load_instance(a);
    const auto start = sd::Configuration::from_matrix(inst.r0);
    const sd::TurnRadius radius(inst.r);
    auto p = sd::plan(start, inst.target, radius);
    return {std::move(inst), start, radius, std::move(p)};
}

nlohmann::ordered_json waypoints_json(const Solved& s, int n) {
    const auto& segs = s.plan.best().segments;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& w : sd::sample_path(s.start, segs, s.radius, static_cast<std::size_t>(n))) {
        const sd::Vec3 x = w.frame.position();
        const sd::Vec3 t = w.frame.tangent();
        rows.push_back({{"s", w.arc},
                        {"position", {x.x(), x.y(), x.z()}},
                        {"tangent", {t.x(), t.y(), t.z()}},
                        {"segment", w.segment}});
    }
    return rows;
}

int cmd_plan(const CommonArgs& a) {
    const auto s = solve(a);
    if (a.text) {
        std::cout << sd::io::plan_text(s.inst, s.plan);
        return 0;
    }
    auto report = sd::io::plan_report(s.inst, s.plan);
    if (s.inst.options.samples) {
        if (*s.inst.options.samples < 2) throw sd::io::InputError("--samples must be at least 2");
        report["waypoints"] = waypoints_json(s, *s.inst.options.samples);
    }
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_oracle(const CommonArgs& a) {
    const auto s = solve(a);
    sd::GridSpec grid;
    if (s.inst.options.grid_step) grid.angle_step = *s.inst.options.grid_step;
    if (s.inst.options.max_segments) grid.max_segments = *s.inst.options.max_segments;
    grid.validate();
    const auto o = sd::oracle_search(s.start, s.inst.target, s.radius, grid);
    const double planner_length = s.plan.best().length;
    if (a.text) {
        std::cout << sd::io::plan_text(s.inst, s.plan);
        if (!o.feasible) {
            std::cout << "oracle: infeasible at this resolution\n";
        } else {
            std::cout << "oracle: " << (o.word.empty() ? "TRIVIAL" : o.word) << "  length = "
                      << sd::io::format_number(o.length) << "  bound = " << sd::io::format_number(o.resolution_bound)
                      << "  gap = " << sd::io::format_number(planner_length - o.length) << "\n";
        }
        return 0;
    }
    auto report = sd::io::plan_report(s.inst, s.plan);
    report["oracle"] = sd::io::to_json(o, planner_length);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_sample(const CommonArgs& a) {
    const auto s = solve(a);
    const int n = s.inst.options.samples.value_or(100);
    if (n < 2) throw sd::io::InputError("--samples must be at least 2");
    const auto& segs = s.plan.best().segments;
    const auto samples = sd::sample_path(s.start, segs, s.radius, static_cast<std::size_t>(n));
    if (a.out.empty()) {
        sd::io::write_waypoints(std::cout, samples, segs);
    } else {
        std::ofstream out(a.out);
        if (!out) throw sd::io::InputError("cannot write '" + a.out + "'");
        sd::io::write_waypoints(out, samples, segs);
    }
    return 0;
}

int cmd_verify(int dl_samples, std::optional<double> tol, bool json) {
    sd::analysis::VerifyOptions opts;
    opts.dl_samples = dl_samples;
    opts.tolerance = tol;
    const auto report = sd::analysis::run_verification(opts);
    if (json) {
        nlohmann::ordered_json j;
        j["format"] = sd::io::kFormatVersion;
        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        for (const auto& c : report.checks) {
            checks.push_back({{"name", c.name},
                              {"passed", c.passed},
                              {"measured", c.measured},
                              {"threshold", c.threshold},
                              {"detail", c.detail}});
        }
        j["checks"] = checks;
        j["all_passed"] = report.all_passed();
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& c : report.checks) {
            std::cout << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  measured="
                      << sd::io::format_number(c.measured) << "  threshold=" << sd::io::format_number(c.threshold);
            if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
            std::cout << "\n";
        }
    }
    return report.all_passed() ? 0 : kExitVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shortest geodesic-curvature-constrained paths on the unit sphere (free terminal heading)"};
    app.require_subcommand(1);

    CommonArgs plan_args;
    auto* plan = app.add_subcommand("plan", "Enumerate candidate paths and select the shortest");
    add_instance_flags(plan, plan_args);

    CommonArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "Plan and certify against the brute-force search");
    add_instance_flags(oracle, oracle_args);
    oracle->add_option("--grid-step", oracle_args.grid_step, "Oracle angle grid step (radians)");
    oracle->add_option("--max-segments", oracle_args.max_segments, "Longest word searched by the oracle");

    int dl_samples = 1000;
    std::optional<double> tol;
    bool verify_json = false;
    auto* verify = app.add_subcommand("verify", "Check the extremal-analysis identities");
    verify->add_option("--dl-samples", dl_samples, "Number of radius samples for the delta_l sweeps");
    verify->add_option("--tol", tol, "Override every drift threshold");
    verify->add_flag("--json", verify_json, "JSON report");

    CommonArgs sample_args;
    auto* sample = app.add_subcommand("sample", "Write waypoints along the shortest path");
    add_instance_flags(sample, sample_args);
    sample->add_option("--out", sample_args.out, "Output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*plan) return cmd_plan(plan_args);
        if (*oracle) return cmd_oracle(oracle_args);
        if (*sample) return cmd_sample(sample_args);
        if (*verify) return cmd_verify(dl_samples, tol, verify_json);
    } catch (const sd::EmptyCandidateSet& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const sd::io::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInput;
}
