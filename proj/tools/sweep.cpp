#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <thread>

#include <json.hpp>

#include "cli.hpp"

namespace qdiel::cli {

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

void SweepSpec::validate() const
{
    if (vary != "q" && vary != "x" && vary != "y" && vary != "alpha")
        throw DomainError("vary must be one of q, x, y, alpha");
    if (steps < 2)
        throw DomainError("steps must be >= 2");
    if (!std::isfinite(start) || !std::isfinite(stop))
        throw DomainError("sweep range must be finite");
    if (scale == Scale::log && !(start > 0.0 && stop > 0.0))
        throw DomainError("log scale requires start > 0 and stop > 0");
    if (methods.empty())
        throw DomainError("at least one method is required");
    for (double v : values()) {
        PlasmaPoint p = fixed;
        if (vary == "q") p.q = v;
        else if (vary == "x") p.x = v;
        else if (vary == "y") p.y = v;
        else p.alpha = v;
        for (Method m : methods) {
            if (m == Method::lindhard)
                point_for(m, p).validate_collisionless();
            else
                p.validate();
        }
    }
}

std::vector<double> SweepSpec::values() const
{
    std::vector<double> out(static_cast<std::size_t>(std::max(steps, 0)));
    for (int i = 0; i < steps; ++i) {
        const double f = steps > 1 ? static_cast<double>(i) / (steps - 1) : 0.0;
        if (scale == Scale::linear)
            out[i] = start + (stop - start) * f;
        else
            out[i] = start * std::pow(stop / start, f);
    }
    if (steps > 1)
        out.back() = stop;
    return out;
}

PlasmaPoint point_for(Method m, PlasmaPoint p)
{
    if (m == Method::lindhard)
        p.y = 0.0;
    return p;
}

namespace {

bool row_flagged(const ResponseResult& r, const QuadratureConfig& cfg)
{
    // Each integral meets rel_tol; the assembled value combines up to four.
    const double tol = 4.0 * cfg.rel_tol * std::max(std::abs(r.epsilon), 1.0) + cfg.abs_tol;
    return !(r.err_estimate <= tol);
}

} // namespace

RunReport run_sweep(const SweepSpec& spec, const QuadratureConfig& cfg, unsigned jobs)
{
    spec.validate();
    cfg.validate();

    std::vector<Method> methods = spec.methods;
    std::sort(methods.begin(), methods.end());
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

    std::vector<PlasmaPoint> points;
    std::vector<Method> tags;
    for (double v : spec.values()) {
        PlasmaPoint p = spec.fixed;
        if (spec.vary == "q") p.q = v;
        else if (spec.vary == "x") p.x = v;
        else if (spec.vary == "y") p.y = v;
        else p.alpha = v;
        for (Method m : methods) {
            points.push_back(point_for(m, p));
            tags.push_back(m);
        }
    }

    RunReport report;
    report.cfg = cfg;
    report.rows.resize(points.size());
    std::vector<std::exception_ptr> failures(points.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                Row& row   = report.rows[i];
                row.point  = points[i];
                row.result = evaluate(tags[i], points[i], cfg);
                row.flagged = row_flagged(row.result, cfg);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(points.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    for (const auto& f : failures)
        if (f)
            std::rethrow_exception(f);
    return report;
}

namespace {

nlohmann::ordered_json row_object(const Row& row)
{
    nlohmann::ordered_json o;
    o["alpha"]  = row.point.alpha;
    o["q"]      = row.point.q;
    o["x"]      = row.point.x;
    o["y"]      = row.point.y;
    o["xp"]     = row.point.xp;
    o["method"] = std::string(to_string(row.result.method));
    o["re_eps"] = row.result.epsilon.real();
    o["im_eps"] = row.result.epsilon.imag();
    if (row.result.sigma_ratio) {
        o["re_sigma"] = row.result.sigma_ratio->real();
        o["im_sigma"] = row.result.sigma_ratio->imag();
    } else {
        o["re_sigma"] = nullptr;
        o["im_sigma"] = nullptr;
    }
    o["err_est"] = row.result.err_estimate;
    return o;
}

} // namespace

std::string render_csv(const std::vector<Row>& rows)
{
    std::string out = kCsvHeader;
    out += '\n';
    for (const Row& row : rows) {
        const auto& p = row.point;
        const auto& r = row.result;
        out += format_double(p.alpha) + ',' + format_double(p.q) + ',' + format_double(p.x) + ',' +
               format_double(p.y) + ',' + format_double(p.xp) + ',' + std::string(to_string(r.method)) +
               ',' + format_double(r.epsilon.real()) + ',' + format_double(r.epsilon.imag()) + ',';
        if (r.sigma_ratio)
            out += format_double(r.sigma_ratio->real()) + ',' + format_double(r.sigma_ratio->imag());
        else
            out += ',';
        out += ',' + format_double(r.err_estimate) + '\n';
    }
    return out;
}

std::string render_json_row(const Row& row)
{
    return row_object(row).dump();
}

std::string render_json(const std::vector<Row>& rows)
{
    auto arr = nlohmann::ordered_json::array();
    for (const Row& row : rows)
        arr.push_back(row_object(row));
    return arr.dump(1) + '\n';
}

} // namespace qdiel::cli
