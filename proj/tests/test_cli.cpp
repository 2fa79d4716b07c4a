#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "check.hpp"
#include "cli.hpp"
#include "qdiel/fermi.hpp"

using namespace qdiel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "qdiel");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch_dir()
{
    auto dir = fs::temp_directory_path() / ("qdiel_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("format_double is shortest round-trip")
{
    CHECK(cli::format_double(0.1) == "0.1");
    CHECK(cli::format_double(1.0) == "1");
    CHECK(cli::format_double(-0.40635208027535197) == "-0.40635208027535197");
    CHECK(cli::format_double(1e-300) == "1e-300");
    for (double v : {M_PI, 1.0 / 3.0, 6.02214076e23, -2.5e-17})
        CHECK(std::stod(cli::format_double(v)) == v);
}

TEST_CASE("eval prints one record")
{
    const auto r = run({"eval", "--method", "bgk", "--alpha", "0", "--q", "0.5", "--x", "1", "--y", "0.1", "--xp", "1"});
    CHECK(r.code == cli::ok);
    CHECK(r.out.find("Re eps") != std::string::npos);
    CHECK(r.out.find("Im sigma") != std::string::npos);

    const auto j = run({"eval", "--alpha", "0", "--q", "0.5", "--x", "1", "--y", "0.1", "--json"});
    REQUIRE(j.code == cli::ok);
    const auto obj = nlohmann::json::parse(j.out);
    CHECK(rel(Complex(obj["re_eps"].get<double>(), obj["im_eps"].get<double>()),
              Complex(-0.406352080275352, 0.79136441170001)) < 1e-11);
    CHECK(obj["method"] == "bgk");
}

TEST_CASE("eval classical static value")
{
    const auto r = run({"eval", "--method", "classical", "--alpha", "0", "--q", "0.5", "--x", "0", "--y", "0.1",
                        "--xp", "1", "--json"});
    REQUIRE(r.code == cli::ok);
    const auto obj      = nlohmann::json::parse(r.out);
    const DegeneracyParam a{0.0};
    CHECK(obj["im_eps"].get<double>() == 0.0);
    CHECK(rel(obj["re_eps"].get<double>(), 1.0 + 4.0 * phi0(a) / phi2(a)) < 1e-12);
    CHECK(obj["re_sigma"].is_null());
}

TEST_CASE("eval errors map to exit codes")
{
    CHECK(run({"eval", "--method", "bgk", "--x", "0", "--y", "0.1", "--want", "sigma"}).code == cli::bad_input);
    CHECK(run({"eval", "--q", "-1"}).code == cli::bad_input);
    CHECK(run({"eval", "--y", "0"}).code == cli::bad_input);
    CHECK(run({"eval", "--method", "nonsense"}).code == cli::bad_input);
    CHECK(run({"eval", "--alpha", "abc"}).code == cli::bad_input);
    CHECK(run({"frobnicate"}).code == cli::bad_input);
    const auto r = run({"eval", "--q", "-1"});
    CHECK(r.err.find("q must be") != std::string::npos);
    // A quadrature budget too small for the integrand.
    CHECK(run({"eval", "--rel-tol", "1e-15", "--abs-tol", "1e-300", "--x", "1", "--y", "1e-9", "--q", "0.5"}).code ==
          cli::numerical_failure);
}

TEST_CASE("lindhard through eval runs at y = 0")
{
    const auto r = run({"eval", "--method", "lindhard", "--x", "1", "--q", "0.5", "--json"});
    REQUIRE(r.code == cli::ok);
    const auto obj = nlohmann::json::parse(r.out);
    CHECK(obj["y"].get<double>() == 0.0);
    CHECK(obj["im_eps"].get<double>() > 0.0);
}

TEST_CASE("config file supplies defaults, flags win")
{
    const auto dir = scratch_dir();
    const auto cfg = dir / "c.json";
    std::ofstream(cfg) << R"({"alpha": 2, "q": 0.7, "x": 1.0})";
    const auto a = run({"eval", "--config", cfg.string(), "--json"});
    REQUIRE(a.code == cli::ok);
    auto obj = nlohmann::json::parse(a.out);
    CHECK(obj["alpha"].get<double>() == 2.0);
    CHECK(obj["q"].get<double>() == 0.7);

    const auto b = run({"eval", "--config", cfg.string(), "--q", "0.3", "--json"});
    REQUIRE(b.code == cli::ok);
    obj = nlohmann::json::parse(b.out);
    CHECK(obj["q"].get<double>() == 0.3);
    CHECK(obj["alpha"].get<double>() == 2.0);

    std::ofstream(cfg) << R"({"alpha": 2, "bogus": 1})";
    CHECK(run({"eval", "--config", cfg.string()}).code == cli::bad_input);
    std::ofstream(cfg) << "{not json";
    CHECK(run({"eval", "--config", cfg.string()}).code == cli::bad_input);
    CHECK(run({"eval", "--config", (dir / "missing.json").string()}).code == cli::bad_input);
    fs::remove_all(dir);
}

TEST_CASE("sweep writes the CSV schema")
{
    const auto dir = scratch_dir();
    const auto out = dir / "s.csv";
    const auto r   = run({"sweep", "--vary", "q", "--start", "1e-3", "--stop", "1", "--steps", "20", "--scale", "log",
                          "--method", "bgk", "--method", "classical", "--x", "0", "--y", "0.1", "--out", out.string()});
    REQUIRE(r.code == cli::ok);
    const auto rows = lines(slurp(out));
    REQUIRE(rows.size() == 41);
    CHECK(rows[0] == cli::kCsvHeader);
    // Rows ordered by value then method; static rows have empty sigma columns.
    CHECK(rows[1].find(",bgk,") != std::string::npos);
    CHECK(rows[2].find(",classical,") != std::string::npos);
    CHECK(rows[1].find(",,,") != std::string::npos);

    auto field = [](const std::string& row, int k) {
        std::istringstream in(row);
        std::string f;
        for (int i = 0; i <= k; ++i)
            std::getline(in, f, ',');
        return f;
    };
    const Complex b(std::stod(field(rows[1], 6)), std::stod(field(rows[1], 7)));
    const Complex c(std::stod(field(rows[2], 6)), std::stod(field(rows[2], 7)));
    CHECK(rel(b, c) <= 5e-4);
    CHECK(field(rows[1], 1) == "0.001");
    CHECK(field(rows[39], 1) == "1");
    CHECK(!fs::exists(dir / "s.csv.partial"));
    fs::remove_all(dir);
}

TEST_CASE("sweep cardinality, json round trip and determinism")
{
    const auto dir = scratch_dir();
    const auto a   = dir / "a.json";
    const auto b   = dir / "b.json";
    std::vector<std::string> args = {"sweep", "--vary", "x", "--start", "0.2", "--stop", "2", "--steps", "2",
                                     "--scale", "linear", "--format", "json", "--out"};
    auto args_a = args, args_b = args;
    args_a.push_back(a.string());
    args_b.push_back(b.string());
    args_b.insert(args_b.end(), {"--jobs", "1"});
    REQUIRE(run(args_a).code == cli::ok);
    REQUIRE(run(args_b).code == cli::ok);
    const std::string text = slurp(a);
    CHECK(text == slurp(b));
    const auto arr = nlohmann::ordered_json::parse(text);
    REQUIRE(arr.size() == 2);
    CHECK(arr.dump(1) + "\n" == text);
    std::vector<std::string> keys;
    for (auto it = arr[0].begin(); it != arr[0].end(); ++it)
        keys.push_back(it.key());
    std::string joined;
    for (const auto& k : keys)
        joined += (joined.empty() ? "" : ",") + k;
    CHECK(joined == cli::kCsvHeader);
    fs::remove_all(dir);
}

TEST_CASE("sweep with lindhard evaluates at y = 0")
{
    cli::SweepSpec spec;
    spec.vary    = "x";
    spec.start   = 0.5;
    spec.stop    = 1.5;
    spec.steps   = 3;
    spec.scale   = cli::Scale::linear;
    spec.fixed   = {0.0, 0.5, 0.0, 0.1, 1.0};
    spec.methods = {Method::lindhard, Method::bgk};
    const auto report = cli::run_sweep(spec, {}, 2);
    REQUIRE(report.rows.size() == 6);
    CHECK(report.rows[0].result.method == Method::bgk);
    CHECK(report.rows[1].result.method == Method::lindhard);
    CHECK(report.rows[1].point.y == 0.0);
    CHECK(report.rows[0].point.y == 0.1);
    for (const auto& row : report.rows)
        CHECK_FALSE(row.flagged);
}

TEST_CASE("sweep validation")
{
    const auto dir = scratch_dir();
    const auto out = (dir / "bad.csv").string();
    CHECK(run({"sweep", "--vary", "z", "--out", out}).code == cli::bad_input);
    CHECK(run({"sweep", "--steps", "1", "--out", out}).code == cli::bad_input);
    CHECK(run({"sweep", "--scale", "log", "--start", "0", "--out", out}).code == cli::bad_input);
    CHECK(run({"sweep", "--vary", "y", "--scale", "linear", "--start", "0", "--stop", "1", "--out", out}).code ==
          cli::bad_input);
    CHECK(run({"sweep"}).code == cli::bad_input);
    CHECK(!fs::exists(out));

    // Numerical failure removes the partial file.
    CHECK(run({"sweep", "--vary", "y", "--start", "1e-9", "--stop", "1e-8", "--steps", "2", "--x", "1", "--q", "0.5",
               "--rel-tol", "1e-15", "--abs-tol", "1e-300", "--out", out})
              .code == cli::numerical_failure);
    CHECK(!fs::exists(out));
    CHECK(!fs::exists(out + ".partial"));
    fs::remove_all(dir);
}

TEST_CASE("sweep report sidecar")
{
    const auto dir = scratch_dir();
    const auto out = dir / "s.csv";
    const auto rep = dir / "s.report.json";
    REQUIRE(run({"sweep", "--steps", "2", "--out", out.string(), "--report", rep.string()}).code == cli::ok);
    const auto meta = nlohmann::json::parse(slurp(rep));
    CHECK(meta.contains("version"));
    CHECK(meta.contains("timestamp"));
    CHECK(meta.contains("config_hash"));
    fs::remove_all(dir);
}

TEST_CASE("verify exit code matches the report")
{
    const auto r = run({"verify", "--grid", "small"});
    CHECK(r.code == cli::ok);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);

    // Looser tolerances still pass.
    const auto loose = run({"verify", "--grid", "small", "--rel-tol", "1e-8"});
    CHECK((loose.code == cli::ok) == (loose.out.find("FAIL") == std::string::npos));

    std::vector<cli::IdentityReport> reports = {{"a", 0.5, 1.0}, {"b", 2.0, 1.0}};
    const std::string text = cli::render_verify(reports);
    std::size_t fails = 0;
    for (std::size_t at = text.find("FAIL"); at != std::string::npos; at = text.find("FAIL", at + 1))
        ++fails;
    CHECK(fails == 1);
}

TEST_CASE("the installed executable behaves like run()")
{
    CHECK(std::system(QDIEL_CLI_PATH " eval --x 1 > /dev/null") == 0);
    CHECK(WEXITSTATUS(std::system(QDIEL_CLI_PATH " eval --q 0 2> /dev/null")) == cli::bad_input);
}
