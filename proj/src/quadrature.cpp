#include "qdiel/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace qdiel {

namespace {

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule
// (Gauss nodes are the odd-indexed Kronrod nodes).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a = 0.0;
    double b = 0.0;
    Complex value{};
    double err = 0.0;
    int depth  = 0;
};

struct ByError {
    bool operator()(const Segment& lhs, const Segment& rhs) const { return lhs.err < rhs.err; }
};

Segment gauss_kronrod(const Integrand& f, double a, double b, int depth)
{
    const double center = 0.5 * (a + b);
    const double half   = 0.5 * (b - a);

    const Complex fc = f(center);
    Complex kronrod  = fc * kWgk[7];
    Complex gauss    = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx   = half * kXgk[j];
        const Complex sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1)
            gauss += kWg[j / 2] * sum;
    }
    Segment s;
    s.a     = a;
    s.b     = b;
    s.value = kronrod * half;
    s.err   = std::abs((kronrod - gauss) * half);
    s.depth = depth;
    return s;
}

double tolerance(const QuadratureConfig& cfg, Complex value)
{
    return std::max(cfg.rel_tol * std::abs(value), cfg.abs_tol);
}

} // namespace

void QuadratureConfig::validate() const
{
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw DomainError("rel_tol must lie in (0, 1)");
    if (!(abs_tol > 0.0 && abs_tol < 1.0))
        throw DomainError("abs_tol must lie in (0, 1)");
    if (max_depth < 1)
        throw DomainError("max_depth must be >= 1");
    if (!(tail_eps > 0.0 && tail_eps < 1.0))
        throw DomainError("tail_eps must lie in (0, 1)");
    if (!(pv_gap > 0.0) || !std::isfinite(pv_gap))
        throw DomainError("pv_gap must be > 0");
    if (max_intervals < 1)
        throw DomainError("max_intervals must be >= 1");
}

IntegralResult integrate_interval(const Integrand& f, double a, double b,
                                  const QuadratureConfig& cfg,
                                  std::span<const double> breakpoints)
{
    cfg.validate();
    if (!(a < b))
        throw DomainError("integration bounds must satisfy a < b");

    std::vector<double> edges{a};
    for (double p : breakpoints)
        if (p > a && p < b)
            edges.push_back(p);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<Segment, std::vector<Segment>, ByError> active;
    std::vector<Segment> frozen; // segments at max_depth
    long evaluations = 0;
    Complex total{};
    double total_err  = 0.0;
    double frozen_err = 0.0;

    auto admit = [&](const Segment& s) {
        total += s.value;
        total_err += s.err;
        if (s.depth >= cfg.max_depth) {
            frozen.push_back(s);
            frozen_err += s.err;
        } else {
            active.push(s);
        }
    };

    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        admit(gauss_kronrod(f, edges[i], edges[i + 1], 0));
        evaluations += 15;
    }

    // Incremental sums drift; resum exactly before every decision that ends
    // the loop.
    auto resum = [&] {
        auto copy = active;
        total     = Complex{};
        total_err = 0.0;
        while (!copy.empty()) {
            total += copy.top().value;
            total_err += copy.top().err;
            copy.pop();
        }
        frozen_err = 0.0;
        for (const auto& s : frozen) {
            total += s.value;
            total_err += s.err;
            frozen_err += s.err;
        }
    };

    auto segments = static_cast<long>(edges.size() - 1);
    for (;;) {
        if (total_err <= tolerance(cfg, total)) {
            resum();
            if (total_err <= tolerance(cfg, total))
                return {total, total_err, evaluations};
        }
        const bool exhausted = active.empty() || segments >= cfg.max_intervals ||
                               frozen_err > tolerance(cfg, total);
        if (exhausted) {
            resum();
            IntegralResult partial{total, total_err, evaluations};
            if (total_err <= tolerance(cfg, total))
                return partial;
            throw QuadratureFailure("adaptive quadrature did not reach tolerance", partial);
        }

        Segment worst = active.top();
        active.pop();
        total -= worst.value;
        total_err -= worst.err;

        const double mid = 0.5 * (worst.a + worst.b);
        admit(gauss_kronrod(f, worst.a, mid, worst.depth + 1));
        admit(gauss_kronrod(f, mid, worst.b, worst.depth + 1));
        evaluations += 30;
        ++segments;
    }
}

QuadratureConfig scaled_for(const QuadratureConfig& cfg, DegeneracyParam alpha, double reach)
{
    // Kernels peak at ln(1 + e^alpha) ~ e^alpha for alpha -> -inf, and Cauchy
    // integrals decay like 1/|pole|^2 at most; abs_tol is applied in those units.
    QuadratureConfig scaled = cfg;
    const double peak       = std::log1p(std::exp(std::min(alpha.value(), 0.0)));
    const double decay      = std::max(1.0, reach);
    scaled.abs_tol          = cfg.abs_tol * std::min(1.0, peak) / (decay * decay);
    return scaled;
}

double tail_cut(DegeneracyParam alpha, double tail_eps, double pole_distance)
{
    if (!(tail_eps > 0.0 && tail_eps < 1.0))
        throw DomainError("tail_eps must lie in (0, 1)");
    if (!(pole_distance > 0.0))
        throw DomainError("pole_distance must be > 0");
    double cut = std::sqrt(std::max(alpha.value(), 0.0) + std::log(1.0 / tail_eps));
    if (pole_distance < 1.0)
        cut += std::log(1.0 / pole_distance);
    return cut;
}

IntegralResult integrate_line(const Integrand& f, DegeneracyParam alpha,
                              const QuadratureConfig& cfg, const LineHints& hints)
{
    cfg.validate();
    double pole_distance = 1.0;
    for (const Complex& p : hints.poles) {
        const double d = std::abs(p.imag());
        if (!(d > 0.0))
            throw DomainError("integrate_line: pole on the real axis, use principal_value");
        pole_distance = std::min(pole_distance, d);
    }
    const double cut = tail_cut(alpha, cfg.tail_eps, pole_distance) + std::abs(hints.kernel_shift);
    double reach     = 0.0;
    for (const Complex& p : hints.poles)
        reach = std::max(reach, std::abs(p));

    // Grade the initial partition geometrically around each near-axis peak.
    std::vector<double> breaks{0.0};
    for (const Complex& p : hints.poles) {
        const double c = p.real();
        const double v = std::abs(p.imag());
        if (c - v >= cut || c + v <= -cut)
            continue;
        double k = 1.0;
        for (int n = 0; n < 3 || v * k < 2.0; ++n) {
            breaks.push_back(c - v * k);
            breaks.push_back(c + v * k);
            k *= (n % 2 == 0) ? 3.0 : 10.0 / 3.0;
            if (v * k > 2.0 * cut)
                break;
        }
    }
    return integrate_interval(f, -cut, cut, scaled_for(cfg, alpha, reach), breaks);
}

IntegralResult principal_value(const Integrand& numerator, double pole, DegeneracyParam alpha,
                               const QuadratureConfig& cfg, double kernel_shift)
{
    cfg.validate();
    if (!std::isfinite(pole))
        throw DomainError("principal_value: pole must be finite");
    const QuadratureConfig local = scaled_for(cfg, alpha, std::abs(pole));
    const double gap             = cfg.pv_gap;
    const double cut =
        std::max(tail_cut(alpha, cfg.tail_eps, 1.0) + std::abs(kernel_shift), std::abs(pole) + gap);

    // Fold the window symmetric about the pole: the 1/(t - pole) singularity
    // cancels between s(pole + h) and s(pole - h).
    const double reach = cut - std::abs(pole);
    auto folded        = [&](double h) { return (numerator(pole + h) - numerator(pole - h)) / h; };
    const std::array<double, 1> gap_break{gap};
    IntegralResult result = integrate_interval(folded, 0.0, reach, local, gap_break);

    // The one-sided remainder beyond the folded window.
    auto direct = [&](double t) { return numerator(t) / (t - pole); };
    IntegralResult rest;
    if (pole > 0.0 && pole - reach > -cut)
        rest = integrate_interval(direct, -cut, pole - reach, local);
    else if (pole < 0.0 && pole + reach < cut)
        rest = integrate_interval(direct, pole + reach, cut, local);
    result.value += rest.value;
    result.err_estimate += rest.err_estimate;
    result.evaluations += rest.evaluations;
    return result;
}

} // namespace qdiel
