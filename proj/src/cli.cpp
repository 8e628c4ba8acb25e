#include "shrinker/cli.hpp"

#include "shrinker/curve_io.hpp"
#include "shrinker/errors.hpp"
#include "shrinker/mesh.hpp"
#include "shrinker/run_config.hpp"
#include "shrinker/shooting.hpp"
#include "shrinker/svg_plot.hpp"
#include "shrinker/verify.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>

namespace shrinker {

namespace fs = std::filesystem;

namespace {

struct Flags {
    std::string config_path;
    double b = 0.0;
    int n = 0;
    double rel_tol = 0.0;
    double abs_tol = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::string out;
    int segments = 0;
    int samples = 0;
    std::string target;
    std::map<std::string, CLI::Option*> given;
};

void add_flags(CLI::App* cmd, Flags& f) {
    f.given["config"] = cmd->add_option("--config", f.config_path, "key = value config file");
    f.given["b"] = cmd->add_option("--b", f.b, "initial height on the axis");
    f.given["n"] = cmd->add_option("--n", f.n, "dimension of the rotating sphere factor");
    f.given["rel_tol"] = cmd->add_option("--rel-tol", f.rel_tol, "relative step tolerance");
    f.given["abs_tol"] = cmd->add_option("--abs-tol", f.abs_tol, "absolute step tolerance");
    f.given["bracket_lo"] = cmd->add_option("--bracket-lo", f.bracket_lo, "lower search bracket");
    f.given["bracket_hi"] = cmd->add_option("--bracket-hi", f.bracket_hi, "upper search bracket");
    f.given["out"] = cmd->add_option("--out", f.out, "output directory");
    f.given["segments"] = cmd->add_option("--segments", f.segments, "azimuthal mesh segments");
    f.given["samples"] = cmd->add_option("--samples", f.samples, "profile samples for the mesh");
    f.given["target"] = cmd->add_option("--target", f.target, "sphere, torus or round");
}

RunConfig resolve_config(const Flags& f) {
    RunConfig cfg;
    if (f.given.at("config")->count() > 0) {
        cfg = load_run_config(f.config_path);
    }
    auto override_with = [&](const char* key, const std::string& text) {
        if (f.given.at(key)->count() > 0) {
            set_config_value(cfg, key, text);
        }
    };
    override_with("b", format_double(f.b));
    override_with("n", std::to_string(f.n));
    override_with("rel_tol", format_double(f.rel_tol));
    override_with("abs_tol", format_double(f.abs_tol));
    override_with("bracket_lo", format_double(f.bracket_lo));
    override_with("bracket_hi", format_double(f.bracket_hi));
    override_with("out", f.out);
    override_with("segments", std::to_string(f.segments));
    override_with("samples", std::to_string(f.samples));
    override_with("target", f.target);
    if (cfg.out_dir.empty()) {
        const char* env = std::getenv(kOutDirEnv);
        cfg.out_dir = env != nullptr && *env != '\0' ? env : "shrinker_out";
    }
    try {
        cfg.params().validate();
        cfg.stepper().validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::pair<double, double> bracket_or(const RunConfig& cfg, std::pair<double, double> fallback) {
    return {cfg.bracket_lo.value_or(fallback.first), cfg.bracket_hi.value_or(fallback.second)};
}

struct Profile {
    ClosedCurve curve;
    std::vector<Crossing> crossings;
    std::string label;
};

Profile target_profile(const RunConfig& cfg, std::ostream& err) {
    const auto params = cfg.params();
    const auto stepper = cfg.stepper();
    const ShootingOptions opts;
    if (cfg.target == "sphere") {
        auto report = find_sphere_height(params, stepper, bracket_or(cfg, {1e-3, 2.0}), opts);
        err << "immersed sphere: b0 = " << format_double(report.root) << "\n";
        return {std::move(report.closed_curve), std::move(report.self_intersections),
                "immersed sphere profile"};
    }
    if (cfg.target == "torus") {
        auto report = find_torus_radius(params, stepper, bracket_or(cfg, {3.0, 3.5}), opts);
        err << "torus: r = " << format_double(report.root) << "\n";
        return {std::move(report.closed_curve), std::move(report.self_intersections),
                "torus profile"};
    }
    const auto d = trace_profile(params.sphere_radius(), params, stepper, opts);
    Profile p{assemble_closed_curve(d, opts.closure_tol), {}, "round sphere profile"};
    p.crossings = count_self_intersections(p.curve);
    return p;
}

void plot_profile(const RunConfig& cfg, const Profile& p, const fs::path& path) {
    PlotOptions po;
    po.width = cfg.plot_width;
    po.height = cfg.plot_height;
    po.title = p.label;
    write_svg_plot({PlotCurve{p.curve.points}}, curve_markers(p.curve, p.crossings), po, path);
}

int run_trace(const RunConfig& cfg, std::ostream& err) {
    const auto d = trace_profile(cfg.b, cfg.params(), cfg.stepper());
    std::vector<CurvePoint> points = tag_states(d.seed_segment, Branch::Gamma);
    auto append = [&points](const std::vector<PlanarState>& states, Branch br) {
        for (const auto& p : tag_states(states, br)) {
            if (points.empty() || p.s > points.back().s) {
                points.push_back(p);
            }
        }
    };
    append(d.gamma_branch.states, Branch::Gamma);
    append(d.beta_branch.states, Branch::Beta);

    const fs::path out = cfg.out_dir;
    write_curve_csv(points, out / "curve.csv");
    auto doc = to_json(d);
    std::vector<Event> events = d.gamma_branch.events;
    events.insert(events.end(), d.beta_branch.events.begin(), d.beta_branch.events.end());
    doc["events"] = to_json(events);
    write_json(doc, out / "events.json");
    err << "trace b = " << format_double(cfg.b) << ": " << to_string(classify(d)) << "\n";
    return kExitOk;
}

int run_shoot(const RunConfig& cfg, ShootTarget target, std::ostream& err) {
    const auto params = cfg.params();
    const auto stepper = cfg.stepper();
    const ShootReport report =
        target == ShootTarget::Sphere
            ? find_sphere_height(params, stepper, bracket_or(cfg, {1e-3, 2.0}))
            : find_torus_radius(params, stepper, bracket_or(cfg, {3.0, 3.5}));
    const fs::path out = cfg.out_dir;
    write_json(to_json(report), out / "report.json");
    write_curve_csv(report.closed_curve, out / "curve.csv");
    const Profile p{report.closed_curve, report.self_intersections,
                    target == ShootTarget::Sphere ? "immersed sphere profile" : "torus profile"};
    plot_profile(cfg, p, out / "profile.svg");
    err << to_string(target) << ": root = " << format_double(report.root)
        << ", closure residual = " << report.closure_residual
        << ", self-intersections = " << report.self_intersections.size() << "\n";
    return kExitOk;
}

int run_verify(const RunConfig& cfg, std::ostream& err) {
    const auto reports = verify_height(cfg.b, cfg.params(), cfg.stepper());
    int pass = 0, fail = 0, na = 0, unexpected = 0;
    for (const auto& r : reports) {
        switch (r.verdict) {
        case Verdict::Pass: ++pass; break;
        case Verdict::NotApplicable: ++na; break;
        case Verdict::Fail:
            ++fail;
            if (!r.expected_fail) {
                ++unexpected;
                err << "failed: " << r.claim_id << " (margin " << r.margin << ")\n";
            }
            break;
        }
    }
    nlohmann::json doc;
    doc["b"] = cfg.b;
    doc["n"] = cfg.n;
    doc["small_height_threshold"] = small_height_threshold();
    doc["reports"] = to_json(reports);
    doc["summary"] = {{"pass", pass}, {"fail", fail}, {"not_applicable", na},
                      {"unexpected_fail", unexpected}};
    write_json(doc, fs::path(cfg.out_dir) / "verify.json");
    err << "verify b = " << format_double(cfg.b) << ": " << pass << " pass, " << fail
        << " fail, " << na << " not applicable\n";
    return unexpected == 0 ? kExitOk : kExitFailure;
}

int run_mesh(const RunConfig& cfg, std::ostream& err) {
    const Profile p = target_profile(cfg, err);
    MeshOptions mo;
    mo.azimuthal_segments = cfg.segments;
    mo.profile_samples = cfg.samples;
    const auto mesh = build_mesh(p.curve, mo);
    write_mesh(mesh, fs::path(cfg.out_dir) / "mesh.obj");
    err << "mesh: " << mesh.vertices.size() << " vertices, " << mesh.faces.size()
        << " faces, Euler characteristic " << euler_characteristic(mesh) << "\n";
    return kExitOk;
}

int run_plot(const RunConfig& cfg, std::ostream& err) {
    const Profile p = target_profile(cfg, err);
    plot_profile(cfg, p, fs::path(cfg.out_dir) / "profile.svg");
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& err) {
    CLI::App app{"Profile curves of rotationally symmetric self-shrinkers"};
    app.require_subcommand(1);

    struct Command {
        CLI::App* app;
        Flags flags;
        std::function<int(const RunConfig&, std::ostream&)> run;
    };
    std::vector<std::unique_ptr<Command>> commands;
    auto add = [&](const char* name, const char* help,
                   std::function<int(const RunConfig&, std::ostream&)> run) {
        auto c = std::make_unique<Command>();
        c->app = app.add_subcommand(name, help);
        add_flags(c->app, c->flags);
        c->run = std::move(run);
        commands.push_back(std::move(c));
    };
    add("trace", "integrate one profile from height b", run_trace);
    add("shoot-sphere", "search for the immersed sphere height",
        [](const RunConfig& c, std::ostream& e) { return run_shoot(c, ShootTarget::Sphere, e); });
    add("shoot-torus", "search for the torus radius",
        [](const RunConfig& c, std::ostream& e) { return run_shoot(c, ShootTarget::Torus, e); });
    add("verify", "evaluate the proved inequalities at height b", run_verify);
    add("mesh", "write a surface-of-revolution mesh", run_mesh);
    add("plot", "write an SVG of a profile", run_plot);

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, err, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    for (auto& c : commands) {
        if (!c->app->parsed()) {
            continue;
        }
        try {
            const RunConfig cfg = resolve_config(c->flags);
            return c->run(cfg, err);
        } catch (const ConfigError& e) {
            err << "config error: " << e.what() << "\n";
            return kExitUsage;
        } catch (const BracketInvalid& e) {
            err << "invalid bracket: " << e.what() << "\n";
            return kExitUsage;
        } catch (const SeedRangeError& e) {
            err << "height out of range: " << e.what() << "\n";
            return kExitUsage;
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitFailure;
        }
    }
    return kExitUsage;
}

}  // namespace shrinker
