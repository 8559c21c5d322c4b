#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "aerofit/error.hpp"
#include "aerofit/evaluation.hpp"
#include "aerofit/http_api.hpp"
#include "aerofit/png_io.hpp"
#include "aerofit/session.hpp"
#include "aerofit/similarity.hpp"
#include "aerofit/synthetic.hpp"
#include "aerofit/template_store.hpp"

namespace aerofit::cli {

namespace fs = std::filesystem;

namespace {

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

struct Globals {
    std::string store = "store";
    bool verbose = false;
};

struct SubtractArgs {
    std::string background, frame, out;
    int diff_threshold = kDefaultDiffThreshold;
    int clean_radius = kDefaultCleanRadius;
};

struct MatchArgs {
    std::string attempt;
    double threshold = 0.8;
};

struct EvaluateArgs {
    std::string labels, scored, out;
    std::string sweep = "0.0:1.0:0.1";
};

struct SynthArgs {
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    SyntheticParams params;
    double verify_at = -1.0;
};

struct InitStoreArgs {
    std::string out;
    int canvas = kDefaultCanvas;
};

struct ServeArgs {
    std::string listen = "127.0.0.1:8080";
    EngineConfig engine;
    std::string session_log;
};

void check_threshold(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "threshold must lie in [0, 1]");
    }
}

void check_readable(const std::string& path, std::string_view what) {
    if (!fs::is_regular_file(path)) {
        throw Error(ErrorCode::Io, std::string(what) + " '" + path + "' is not a readable file");
    }
}

int cmd_subtract(const SubtractArgs& a, std::ostream& out) {
    check_readable(a.background, "background");
    check_readable(a.frame, "frame");
    const GrayImage bg = png::read_gray(a.background);
    const GrayImage fr = png::read_gray(a.frame);
    const BinaryMask mask = clean_mask(subtract_background(bg, fr, a.diff_threshold), a.clean_radius);
    png::write_mask(a.out, mask);
    out << "foreground_pixels " << mask.foreground_count() << '\n';
    return 0;
}

int cmd_match(const Globals& g, const MatchArgs& a, std::ostream& out) {
    check_threshold(a.threshold);
    check_readable(a.attempt, "attempt");
    const TemplateStore store = load_store(g.store);
    const BinaryMask attempt = png::read_mask(a.attempt);
    const Classification c = classify(attempt, store.refs(), a.threshold);
    out << "template " << c.match.template_id << '\n'
        << "alpha " << fixed6(c.match.alpha.value()) << '\n'
        << "accepted " << (c.accepted ? "true" : "false") << '\n';
    return 0;
}

int cmd_evaluate(const Globals& g, const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
    if (a.labels.empty() == a.scored.empty()) {
        throw Error(ErrorCode::InvalidArgument, "pass exactly one of --labels or --scored");
    }
    const std::vector<double> thresholds = parse_sweep(a.sweep);
    std::vector<ScoredAttempt> scored;
    if (!a.scored.empty()) {
        check_readable(a.scored, "scored file");
        scored = read_scored(a.scored);
    } else {
        check_readable(a.labels, "labels file");
        const TemplateStore store = load_store(g.store);
        const auto attempts = load_dataset(a.labels);
        for (const auto& at : attempts) {
            if (!store.find_template(at.target_template_id)) {
                throw Error(ErrorCode::UnknownTemplate,
                            at.id + " targets unknown template " + at.target_template_id);
            }
        }
        scored = score_attempts(store, attempts);
        if (g.verbose) err << "scored " << scored.size() << " attempts\n";
    }
    const auto rows = evaluate(scored, thresholds);
    std::vector<RocPoint> curve;
    for (const auto& r : rows) curve.push_back({r.threshold, r.sensitivity, r.false_positive_rate});
    const double optimal = optimal_threshold(curve);
    write_summary(out, rows, optimal);
    const auto best = std::find_if(rows.begin(), rows.end(),
                                   [&](const EvaluationRow& r) { return r.threshold == optimal; });
    out << "accuracy_at_optimal " << fixed6(best->accuracy) << '\n';

    if (!a.out.empty()) {
        fs::create_directories(a.out);
        std::ofstream csv(fs::path(a.out) / "roc.csv");
        write_report_csv(csv, rows);
        std::ofstream summary(fs::path(a.out) / "summary.txt");
        write_summary(summary, rows, optimal);
        std::ofstream scores(fs::path(a.out) / "scored.tsv");
        write_scored(scores, scored);
        if (!csv || !summary || !scores) {
            throw Error(ErrorCode::Io, "failed writing reports under " + a.out);
        }
    }
    return 0;
}

int cmd_synth(const Globals& g, SynthArgs a, std::ostream& out) {
    if (a.verify_at >= 0.0) {
        check_threshold(a.verify_at);
        a.params.verify_correct_at = a.verify_at;
    }
    const TemplateStore store = load_store(g.store);
    const auto attempts = generate_synthetic_dataset(a.seed, store, a.params);
    write_dataset(a.out, attempts);
    out << "attempts " << attempts.size() << '\n'
        << "labels " << (fs::path(a.out) / "labels.tsv").string() << '\n';
    return 0;
}

int cmd_init_store(const InitStoreArgs& a, std::ostream& out) {
    const TemplateStore store = builtin_store(a.canvas);
    save_store(store, a.out);
    out << "templates " << store.template_count() << '\n';
    return 0;
}

int cmd_serve(const Globals& g, ServeArgs a, std::ostream& out, std::ostream& err,
              ServeControl* control) {
    const auto colon = a.listen.rfind(':');
    if (colon == std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "listen address must be host:port");
    }
    const std::string host = a.listen.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(a.listen.substr(colon + 1));
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "bad port in '" + a.listen + "'");
    }
    check_threshold(a.engine.defaults.pass_threshold);
    if (!a.session_log.empty()) a.engine.log_dir = a.session_log;

    SessionEngine engine(std::make_shared<const TemplateStore>(load_store(g.store)), a.engine);
    httplib::Server server;
    // httplib defaults to SO_REUSEPORT, which would let two servers share a port silently.
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    http::install_routes(server, engine, [&err](const std::string& line) { err << line << '\n'; });
    if (g.verbose) {
        err << "store " << g.store << ": " << engine.store().template_count() << " templates, canvas "
            << engine.canvas_width() << 'x' << engine.canvas_height() << '\n';
    }

    if (port == 0) {
        port = server.bind_to_any_port(host);
        if (port < 0) throw Error(ErrorCode::Io, "cannot bind " + host);
    } else if (!server.bind_to_port(host, port)) {
        throw Error(ErrorCode::Io, "cannot bind " + a.listen);
    }
    out << "listening " << host << ':' << port << std::endl;
    if (control) {
        control->port = port;
        control->server = &server;
    }
    const bool ok = server.listen_after_bind();
    if (control) control->server = nullptr;
    return ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        ServeControl* control) {
    CLI::App app{"Silhouette pose scoring: background subtraction, template matching, evaluation", "aerofit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Globals g;
    app.add_option("--store", g.store, "Template store root")->envname("AEROFIT_STORE");
    app.add_flag("--verbose,-v", g.verbose, "Extra diagnostics on stderr");

    SubtractArgs sub;
    auto* subtract = app.add_subcommand("subtract", "Background-subtract one frame into a mask PNG");
    subtract->add_option("--background", sub.background)->required();
    subtract->add_option("--frame", sub.frame)->required();
    subtract->add_option("--out", sub.out)->required();
    subtract->add_option("--diff-threshold", sub.diff_threshold)->check(CLI::Range(0, 255));
    subtract->add_option("--clean-radius", sub.clean_radius)->check(CLI::NonNegativeNumber);

    MatchArgs m;
    auto* match = app.add_subcommand("match", "Nearest-template match of one attempt mask");
    match->add_option("attempt", m.attempt)->required();
    match->add_option("--threshold", m.threshold);

    EvaluateArgs ev;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "ROC sweep over a labelled dataset");
    evaluate_cmd->add_option("--labels", ev.labels, "labels.tsv from synth");
    evaluate_cmd->add_option("--scored", ev.scored, "Pre-scored attempts file");
    evaluate_cmd->add_option("--sweep", ev.sweep, "start:stop:step, inclusive");
    evaluate_cmd->add_option("--out", ev.out, "Directory for roc.csv, summary.txt, scored.tsv");

    SynthArgs sy;
    auto* synth = app.add_subcommand("synth", "Generate a labelled synthetic attempt dataset");
    synth->add_option("--seed", sy.seed);
    synth->add_option("--out", sy.out)->required();
    synth->add_option("--attempts", sy.params.attempts_per_template)->check(CLI::NonNegativeNumber);
    synth->add_option("--dilate", sy.params.perturbation.dilate_px)->check(CLI::NonNegativeNumber);
    synth->add_option("--erode", sy.params.perturbation.erode_px)->check(CLI::NonNegativeNumber);
    synth->add_option("--translate", sy.params.perturbation.translate_px)->check(CLI::NonNegativeNumber);
    synth->add_option("--incorrect-shift", sy.params.incorrect_shift_px)->check(CLI::NonNegativeNumber);
    synth->add_option("--verify-at", sy.verify_at,
                      "Fail unless every correct attempt matches its target at this score");

    InitStoreArgs init;
    auto* init_store = app.add_subcommand("init-store", "Write the built-in template store");
    init_store->add_option("--out", init.out)->required();
    init_store->add_option("--canvas", init.canvas)->check(CLI::Range(64, 4096));

    ServeArgs sv;
    auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
    serve->add_option("--listen", sv.listen, "host:port (port 0 picks a free port)")
        ->envname("AEROFIT_LISTEN");
    serve->add_option("--pass-threshold", sv.engine.defaults.pass_threshold)
        ->envname("AEROFIT_PASS_THRESHOLD");
    serve->add_option("--max-attempts", sv.engine.defaults.max_attempts_per_template)
        ->envname("AEROFIT_MAX_ATTEMPTS")
        ->check(CLI::PositiveNumber);
    serve->add_option("--diff-threshold", sv.engine.pipeline.diff_threshold)->check(CLI::Range(0, 255));
    serve->add_option("--clean-radius", sv.engine.pipeline.clean_radius)->check(CLI::NonNegativeNumber);
    serve->add_option("--canvas-width", sv.engine.canvas_width);
    serve->add_option("--canvas-height", sv.engine.canvas_height);
    serve->add_option("--session-log", sv.session_log, "Directory for append-only session logs");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*subtract) return cmd_subtract(sub, out);
        if (*match) return cmd_match(g, m, out);
        if (*evaluate_cmd) return cmd_evaluate(g, ev, out, err);
        if (*synth) return cmd_synth(g, sy, out);
        if (*init_store) return cmd_init_store(init, out);
        if (*serve) return cmd_serve(g, sv, out, err, control);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace aerofit::cli
