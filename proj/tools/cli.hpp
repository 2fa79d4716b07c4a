#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdiel/quadrature.hpp"
#include "qdiel/response.hpp"

namespace qdiel::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Exit codes of the command-line tool.
enum ExitCode : int { ok = 0, verify_failed = 1, bad_input = 2, numerical_failure = 3 };

/// Shortest round-trip decimal representation (at most 17 significant digits).
std::string format_double(double v);

enum class Scale { linear, log };

struct SweepSpec {
    std::string vary = "q"; // one of q, x, y, alpha
    double start     = 1e-3;
    double stop      = 1.0;
    int steps        = 20;
    Scale scale      = Scale::log;
    PlasmaPoint fixed;
    std::vector<Method> methods{Method::bgk};

    /// Throws DomainError naming the violated constraint.
    void validate() const;
    [[nodiscard]] std::vector<double> values() const;
};

struct Row {
    PlasmaPoint point;
    ResponseResult result;
    bool flagged = false; // err_estimate above the row tolerance
};

struct RunReport {
    std::vector<Row> rows;
    QuadratureConfig cfg;
    std::string timestamp;
    std::string config_hash;
};

/// Point actually evaluated for a method: the collisionless branch runs at y = 0.
PlasmaPoint point_for(Method m, PlasmaPoint p);

/// Evaluates every (value, method) pair; rows ordered by varied value then
/// method. Throws the first failure in row order.
RunReport run_sweep(const SweepSpec& spec, const QuadratureConfig& cfg, unsigned jobs);

inline constexpr const char* kCsvHeader = "alpha,q,x,y,xp,method,re_eps,im_eps,re_sigma,im_sigma,err_est";

std::string render_csv(const std::vector<Row>& rows);
std::string render_json(const std::vector<Row>& rows);
/// Single-line JSON object for one row (keys in CSV column order).
std::string render_json_row(const Row& row);

struct IdentityReport {
    std::string name;
    double max_deviation = 0.0;
    double tolerance     = 0.0;
    [[nodiscard]] bool pass() const { return max_deviation <= tolerance; }
};

enum class GridPreset { small, full };

/// Runs the limiting-identity suite; throws QuadratureFailure on breakdown.
std::vector<IdentityReport> run_verify(GridPreset preset, const QuadratureConfig& cfg, unsigned jobs);

/// Renders the identity table; the returned text contains one FAIL line per
/// failing identity and nothing else matching "FAIL".
std::string render_verify(const std::vector<IdentityReport>& reports);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qdiel::cli
