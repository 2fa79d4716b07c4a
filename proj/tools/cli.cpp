#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

namespace qdiel::cli {

namespace {

struct Options {
    PlasmaPoint point;
    std::vector<std::string> methods;
    std::string want   = "both";
    bool json          = false;
    std::string out;
    std::string format = "csv";
    std::string report;
    double rel_tol     = QuadratureConfig{}.rel_tol;
    double abs_tol     = QuadratureConfig{}.abs_tol;
    unsigned jobs      = std::max(1u, std::thread::hardware_concurrency());
    std::string config;
    std::string grid   = "small";
    std::string vary   = "q";
    double start       = 1e-3;
    double stop        = 1.0;
    int steps          = 20;
    std::string scale  = "log";
};

// 64-bit FNV-1a, stable across platforms.
std::string fnv1a_hex(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

QuadratureConfig make_config(const Options& o)
{
    QuadratureConfig cfg;
    cfg.rel_tol = o.rel_tol;
    cfg.abs_tol = o.abs_tol;
    cfg.validate();
    return cfg;
}

Method require_method(const std::string& name)
{
    if (auto m = parse_method(name))
        return *m;
    throw DomainError("unknown method '" + name + "' (expected bgk, bgk_alt, mermin, lindhard, classical)");
}

// Applies keys of a JSON config document to options the user did not pass on
// the command line.
void apply_config(CLI::App& sub, Options& o)
{
    if (o.config.empty())
        return;
    std::ifstream in(o.config);
    if (!in)
        throw DomainError("cannot read config file '" + o.config + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw DomainError("config file must contain a JSON object");

    auto unset = [&](const std::string& flag) {
        const CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option("--" + flag);
        } catch (const CLI::OptionNotFound&) {
            return false;
        }
        return opt->count() == 0;
    };

    const std::map<std::string, double*> reals = {
        {"alpha", &o.point.alpha}, {"q", &o.point.q},         {"x", &o.point.x},
        {"y", &o.point.y},         {"xp", &o.point.xp},       {"rel-tol", &o.rel_tol},
        {"abs-tol", &o.abs_tol},   {"start", &o.start},       {"stop", &o.stop}};
    const std::map<std::string, std::string*> strings = {
        {"out", &o.out},   {"format", &o.format}, {"grid", &o.grid},
        {"vary", &o.vary}, {"scale", &o.scale},   {"want", &o.want}, {"report", &o.report}};

    for (const auto& [key, value] : doc.items()) {
        try {
            if (auto it = reals.find(key); it != reals.end()) {
                if (unset(key))
                    *it->second = value.get<double>();
            } else if (auto is = strings.find(key); is != strings.end()) {
                if (unset(key))
                    *is->second = value.get<std::string>();
            } else if (key == "jobs") {
                if (unset(key))
                    o.jobs = value.get<unsigned>();
            } else if (key == "steps") {
                if (unset(key))
                    o.steps = value.get<int>();
            } else if (key == "method") {
                if (unset(key))
                    o.methods = value.is_array() ? value.get<std::vector<std::string>>()
                                                 : std::vector<std::string>{value.get<std::string>()};
            } else if (key == "json") {
                if (unset(key))
                    o.json = value.get<bool>();
            } else {
                throw DomainError("unknown config key '" + key + "'");
            }
        } catch (const nlohmann::json::exception&) {
            throw DomainError("config key '" + key + "' has the wrong type");
        }
    }
}

void add_point_flags(CLI::App& sub, Options& o)
{
    sub.add_option("--alpha", o.point.alpha, "degeneracy mu/(k_B T)");
    sub.add_option("--q", o.point.q, "wave number k/k0");
    sub.add_option("--x", o.point.x, "frequency omega/(k0 v0)");
    sub.add_option("--y", o.point.y, "collision frequency nu/(k0 v0)");
    sub.add_option("--xp", o.point.xp, "plasma frequency omega_p/(k0 v0)");
}

void add_numeric_flags(CLI::App& sub, Options& o)
{
    sub.add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    sub.add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance");
    sub.add_option("--config", o.config, "JSON file with defaults for any flag");
}

int cmd_eval(Options& o, std::ostream& out)
{
    const QuadratureConfig cfg = make_config(o);
    if (o.methods.size() > 1)
        throw DomainError("eval takes a single --method");
    const Method m = require_method(o.methods.empty() ? "bgk" : o.methods.front());
    if (o.want != "eps" && o.want != "sigma" && o.want != "both")
        throw DomainError("--want must be eps, sigma or both");

    const PlasmaPoint p = point_for(m, o.point);
    if (m == Method::lindhard)
        p.validate_collisionless();
    else
        p.validate();
    if (o.want == "sigma" && !(p.x > 0.0 && p.y > 0.0))
        throw DomainError("sigma/sigma0 requires x > 0 and y > 0 (conductivity carries factors omega and 1/nu)");

    Row row;
    row.point  = p;
    row.result = evaluate(m, p, cfg);

    if (o.json) {
        out << render_json_row(row) << '\n';
        return ok;
    }
    const auto& r = row.result;
    out << "method    " << to_string(r.method) << '\n'
        << "alpha     " << format_double(p.alpha) << '\n'
        << "q         " << format_double(p.q) << '\n'
        << "x         " << format_double(p.x) << '\n'
        << "y         " << format_double(p.y) << '\n'
        << "xp        " << format_double(p.xp) << '\n';
    if (o.want != "sigma")
        out << "Re eps    " << format_double(r.epsilon.real()) << '\n'
            << "Im eps    " << format_double(r.epsilon.imag()) << '\n';
    if (o.want != "eps") {
        if (r.sigma_ratio)
            out << "Re sigma  " << format_double(r.sigma_ratio->real()) << '\n'
                << "Im sigma  " << format_double(r.sigma_ratio->imag()) << '\n';
        else
            out << "sigma     undefined (x = 0 or y = 0)\n";
    }
    out << "err_est   " << format_double(r.err_estimate) << '\n';
    return ok;
}

int cmd_sweep(Options& o, std::ostream& out, std::ostream& err)
{
    const QuadratureConfig cfg = make_config(o);
    if (o.out.empty())
        throw DomainError("sweep requires --out");
    if (o.format != "csv" && o.format != "json")
        throw DomainError("--format must be csv or json");
    if (o.scale != "linear" && o.scale != "log")
        throw DomainError("--scale must be linear or log");

    SweepSpec spec;
    spec.vary  = o.vary;
    spec.start = o.start;
    spec.stop  = o.stop;
    spec.steps = o.steps;
    spec.scale = o.scale == "log" ? Scale::log : Scale::linear;
    spec.fixed = o.point;
    spec.methods.clear();
    for (const auto& name : o.methods.empty() ? std::vector<std::string>{"bgk"} : o.methods)
        spec.methods.push_back(require_method(name));
    spec.validate();

    const std::filesystem::path target(o.out);
    const std::filesystem::path partial = target.string() + ".partial";
    RunReport report;
    try {
        report = run_sweep(spec, cfg, o.jobs);
        std::ofstream file(partial, std::ios::binary | std::ios::trunc);
        if (!file)
            throw DomainError("cannot write '" + partial.string() + "'");
        file << (o.format == "csv" ? render_csv(report.rows) : render_json(report.rows));
        file.close();
        if (!file)
            throw DomainError("write to '" + partial.string() + "' failed");
        std::filesystem::rename(partial, target);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(partial, ec);
        throw;
    }

    std::ostringstream canon;
    canon << "vary=" << spec.vary << ";start=" << format_double(spec.start) << ";stop="
          << format_double(spec.stop) << ";steps=" << spec.steps << ";scale=" << o.scale
          << ";alpha=" << format_double(o.point.alpha) << ";q=" << format_double(o.point.q)
          << ";x=" << format_double(o.point.x) << ";y=" << format_double(o.point.y)
          << ";xp=" << format_double(o.point.xp) << ";rel_tol=" << format_double(cfg.rel_tol)
          << ";abs_tol=" << format_double(cfg.abs_tol) << ";methods=";
    for (Method m : spec.methods)
        canon << to_string(m) << ' ';
    report.timestamp   = utc_timestamp();
    report.config_hash = fnv1a_hex(canon.str());

    std::size_t flagged = 0;
    for (std::size_t i = 0; i < report.rows.size(); ++i)
        if (report.rows[i].flagged) {
            ++flagged;
            err << "warning: row " << i << " err_est above tolerance\n";
        }

    if (!o.report.empty()) {
        nlohmann::ordered_json meta;
        meta["version"]     = kVersion;
        meta["timestamp"]   = report.timestamp;
        meta["config_hash"] = report.config_hash;
        meta["rel_tol"]     = cfg.rel_tol;
        meta["abs_tol"]     = cfg.abs_tol;
        meta["max_depth"]   = cfg.max_depth;
        meta["tail_eps"]    = cfg.tail_eps;
        meta["pv_gap"]      = cfg.pv_gap;
        meta["rows"]        = report.rows.size();
        meta["flagged"]     = flagged;
        std::ofstream(o.report) << meta.dump(2) << '\n';
    }
    out << "wrote " << report.rows.size() << " rows to " << o.out << " (config " << report.config_hash
        << ", " << flagged << " flagged)\n";
    return ok;
}

int cmd_verify(Options& o, std::ostream& out)
{
    const QuadratureConfig cfg = make_config(o);
    GridPreset preset;
    if (o.grid == "small")
        preset = GridPreset::small;
    else if (o.grid == "full")
        preset = GridPreset::full;
    else
        throw DomainError("--grid must be small or full");

    const auto start   = std::chrono::steady_clock::now();
    const auto reports = run_verify(preset, cfg, o.jobs);
    const double secs  = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << render_verify(reports);
    std::size_t failed = 0;
    for (const auto& r : reports)
        failed += r.pass() ? 0 : 1;
    char line[128];
    std::snprintf(line, sizeof line, "%zu identities, %zu failed, %.2f s\n", reports.size(), failed, secs);
    out << line;
    return failed == 0 ? ok : verify_failed;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Longitudinal permittivity and conductivity of a collisional quantum electron plasma"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CLI::App* eval = app.add_subcommand("eval", "evaluate one point");
    add_point_flags(*eval, o);
    add_numeric_flags(*eval, o);
    eval->add_option("--method", o.methods, "bgk | bgk_alt | mermin | lindhard | classical");
    eval->add_option("--want", o.want, "eps | sigma | both");
    eval->add_flag("--json", o.json, "print one line of JSON");

    CLI::App* sweep = app.add_subcommand("sweep", "evaluate a one-parameter sweep to CSV or JSON");
    add_point_flags(*sweep, o);
    add_numeric_flags(*sweep, o);
    sweep->add_option("--method", o.methods, "methods to evaluate (repeatable)");
    sweep->add_option("--vary", o.vary, "q | x | y | alpha");
    sweep->add_option("--start", o.start);
    sweep->add_option("--stop", o.stop);
    sweep->add_option("--steps", o.steps);
    sweep->add_option("--scale", o.scale, "linear | log");
    sweep->add_option("--out", o.out, "output path");
    sweep->add_option("--format", o.format, "csv | json");
    sweep->add_option("--jobs", o.jobs, "worker threads");
    sweep->add_option("--report", o.report, "optional metadata JSON path");

    CLI::App* verify = app.add_subcommand("verify", "check the limiting identities");
    add_numeric_flags(*verify, o);
    verify->add_option("--grid", o.grid, "small | full");
    verify->add_option("--jobs", o.jobs, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }

    try {
        CLI::App* active = eval->parsed() ? eval : sweep->parsed() ? sweep : verify;
        apply_config(*active, o);
        if (o.jobs == 0)
            throw DomainError("--jobs must be >= 1");
        if (eval->parsed())
            return cmd_eval(o, out);
        if (sweep->parsed())
            return cmd_sweep(o, out, err);
        return cmd_verify(o, out);
    } catch (const QuadratureFailure& e) {
        err << "numerical failure: " << e.what() << " (partial err_est "
            << format_double(e.partial().err_estimate) << ")\n";
        return numerical_failure;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return bad_input;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }
}

} // namespace qdiel::cli
