#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <thread>

#include "cli.hpp"
#include "qdiel/dispersion.hpp"
#include "qdiel/fermi.hpp"

namespace qdiel::cli {

namespace {

struct Grid {
    std::vector<double> alphas, qs, xs, ys;
};

Grid grid_for(GridPreset preset)
{
    if (preset == GridPreset::full)
        return {{-20, -5, 0, 5, 20}, {1e-3, 1e-2, 0.1, 0.5, 1, 2}, {0, 0.3, 1, 3}, {0.01, 0.1, 1}};
    return {{-5, 0, 5}, {0.1, 0.5, 1}, {0, 1}, {0.1}};
}

// Runs task(i) for i in [0, n) on up to `jobs` threads and returns max over i.
double parallel_max(std::size_t n, unsigned jobs, const std::function<double(std::size_t)>& task)
{
    std::vector<double> out(n, 0.0);
    std::vector<std::exception_ptr> failures(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = task(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    for (const auto& f : failures)
        if (f)
            std::rethrow_exception(f);
    double worst = 0.0;
    for (double v : out)
        worst = std::max(worst, std::isnan(v) ? INFINITY : v);
    return worst;
}

std::vector<PlasmaPoint> grid_points(const Grid& g, bool include_static)
{
    std::vector<PlasmaPoint> pts;
    for (double a : g.alphas)
        for (double q : g.qs)
            for (double x : g.xs)
                for (double y : g.ys)
                    if (include_static || x > 0.0)
                        pts.push_back({a, q, x, y, 1.0});
    return pts;
}

double rel(Complex a, Complex b)
{
    return std::abs(a - b) / std::abs(b);
}

// Base points of the hbar -> 0 scaling: w = z/q and u_p = xp/q held fixed
// while q shrinks, so x, y, xp all scale with q.
const std::vector<Complex> kScalingW = {{0.5, 0.5}, {1.0, 0.2}, {2.0, 1.0}};

PlasmaPoint scaled(double alpha, Complex w, double q)
{
    return {alpha, q, q * w.real(), q * w.imag(), q};
}

} // namespace

std::vector<IdentityReport> run_verify(GridPreset preset, const QuadratureConfig& cfg, unsigned jobs)
{
    cfg.validate();
    const Grid g = grid_for(preset);
    std::vector<IdentityReport> out;
    auto add = [&](std::string name, double dev, double tol) { out.push_back({std::move(name), dev, tol}); };

    const std::vector<Complex> ws = {{0.5, 0.1}, {1.0, 0.01}, {2.0, 1.0}, {0.0, 5.0}};

    // Moment identity phi0 = 2 int g c^2.
    {
        std::vector<double> alphas;
        for (int a = -20; a <= 20; a += (preset == GridPreset::full ? 1 : 5))
            alphas.push_back(a);
        const double dev = parallel_max(alphas.size(), jobs, [&](std::size_t i) {
            const DegeneracyParam a{alphas[i]};
            const double p0 = phi0(a, cfg);
            return std::abs(p0 - phi0_from_g(a, cfg)) / p0;
        });
        add("moment identity phi0 = 2 int g c^2 (rel)", dev, 1e-8);
    }

    // Partial fractions: q L = l(w + q/2) - l(w - q/2), against the error budget.
    {
        struct Case { Complex w; double q; double alpha; };
        std::vector<Case> cases;
        for (double a : g.alphas)
            for (Complex w : {Complex(1.0, 1.0), Complex(0.3, 0.2), Complex(2.0, 0.05)})
                for (double q : {0.1, 0.5, 1.0, 2.0})
                    cases.push_back({w, q, a});
        const double dev = parallel_max(cases.size(), jobs, [&](std::size_t i) {
            const auto& c = cases[i];
            const DegeneracyParam a{c.alpha};
            const ComplexFreq w{c.w};
            const auto big_l = kernel_L(w, WaveNumber{c.q}, a, cfg);
            const auto lp    = l_shift(w, 0.5 * c.q, a, cfg);
            const auto lm    = l_shift(w, -0.5 * c.q, a, cfg);
            const double budget = 10.0 * (c.q * big_l.err_estimate + lp.err_estimate + lm.err_estimate) +
                                  64.0 * 2.2e-16 * (std::abs(lp.value) + std::abs(lm.value));
            return std::abs(c.q * big_l.value - (lp.value - lm.value)) / budget;
        });
        add("partial fractions qL = l(w+q/2)-l(w-q/2) (/10 err est)", dev, 1.0);
    }

    // Integration by parts: L(w, q -> 0) = -4 phi0 lambda0.
    {
        struct Case { Complex w; double alpha; };
        std::vector<Case> cases;
        for (double a : {-5.0, 0.0, 5.0})
            for (Complex w : {Complex(1.0, 0.1), Complex(0.5, 0.5)})
                cases.push_back({w, a});
        const double dev = parallel_max(cases.size(), jobs, [&](std::size_t i) {
            const DegeneracyParam a{cases[i].alpha};
            const ComplexFreq w{cases[i].w};
            const Complex target = -4.0 * phi0(a, cfg) * lambda0(w, a, cfg).value;
            return rel(kernel_L(w, WaveNumber{1e-4}, a, cfg).value, target);
        });
        add("integration by parts L(w,1e-4) = -4 phi0 lambda0 (rel)", dev, 1e-6);
    }

    // Two algebraic forms of lambda0.
    {
        std::vector<std::pair<Complex, double>> cases;
        for (double a : g.alphas)
            for (Complex w : ws)
                cases.push_back({w, a});
        const double dev = parallel_max(cases.size(), jobs, [&](std::size_t i) {
            const DegeneracyParam a{cases[i].second};
            const ComplexFreq w{cases[i].first};
            return rel(lambda0_from_hilbert(w, a, cfg).value, lambda0(w, a, cfg).value);
        });
        add("lambda0 = 1 + w F0/2phi0 = int t f0/(t-w)/2phi0 (rel)", dev, 1e-8);
    }

    // Maxwellian degeneration.
    {
        const double dev = parallel_max(ws.size(), jobs, [&](std::size_t i) {
            const ComplexFreq w{ws[i]};
            const Complex lc = lambda_classical(w, cfg).value;
            return rel(lambda0(w, DegeneracyParam{-20.0}, cfg).value, lc);
        });
        add("Maxwell limit lambda0(w,-20) = lambda_c(w) (rel)", dev, 1e-6);
    }

    // lambda0 -> 0 as |w| -> infinity.
    {
        const std::vector<double> alphas = {-5.0, 0.0, 5.0};
        const double dev = parallel_max(alphas.size(), jobs, [&](std::size_t i) {
            return std::abs(lambda0(ComplexFreq{{0.0, 100.0}}, DegeneracyParam{alphas[i]}, cfg).value);
        });
        add("large |w|: |lambda0(100i)|", dev, 2e-4);
    }

    // Schwarz reflection of the Cauchy integrals.
    {
        std::vector<std::pair<Complex, double>> cases;
        for (double a : g.alphas)
            for (Complex w : ws)
                cases.push_back({w, a});
        const double dev = parallel_max(cases.size(), jobs, [&](std::size_t i) {
            const DegeneracyParam a{cases[i].second};
            const Complex w = cases[i].first;
            double d        = 0.0;
            d = std::max(d, rel(std::conj(detail::lambda0(std::conj(w), a, cfg).value),
                                detail::lambda0(w, a, cfg).value));
            d = std::max(d, rel(std::conj(detail::kernel_L(std::conj(w), 0.5, a, cfg).value),
                                detail::kernel_L(w, 0.5, a, cfg).value));
            d = std::max(d, rel(std::conj(detail::l_shift(std::conj(w), 0.25, a, cfg).value),
                                detail::l_shift(w, 0.25, a, cfg).value));
            return d;
        });
        add("Schwarz reflection F(conj w) = conj F(w) (rel)", dev, 1e-12);
    }

    const auto pts        = grid_points(g, true);
    const auto dynamic_pts = grid_points(g, false);

    // Dual representation: log-difference vs kernel form.
    {
        const double dev = parallel_max(pts.size(), jobs, [&](std::size_t i) {
            const Complex a = epsilon_bgk(pts[i], cfg, BgkForm::log_difference).epsilon;
            const Complex b = epsilon_bgk(pts[i], cfg, BgkForm::kernel).epsilon;
            return rel(a, b);
        });
        add("dual representation eps (log-difference vs kernel) (rel)", dev, 1e-8);
    }

    // sigma <-> eps linkage.
    {
        const double dev = parallel_max(dynamic_pts.size(), jobs, [&](std::size_t i) {
            const auto& p = dynamic_pts[i];
            const auto r  = sigma_bgk(p, cfg);
            const Complex linked = Complex(0.0, p.xp * p.xp / (p.x * p.y)) * *r.sigma_ratio;
            return rel(linked, r.epsilon - 1.0);
        });
        add("linkage eps - 1 = i xp^2/(x y) sigma/sigma0 (rel)", dev, 1e-12);
    }

    // Classical limit at q = 1e-3 on the (alpha, x, y) grid.
    {
        std::vector<PlasmaPoint> cl;
        for (double a : g.alphas)
            for (double x : g.xs)
                for (double y : g.ys)
                    cl.push_back({a, 1e-3, x, y, 1.0});
        const double dev = parallel_max(cl.size(), jobs, [&](std::size_t i) {
            const Complex c = epsilon_classical(cl[i], cfg).epsilon;
            return std::abs(epsilon_bgk(cl[i], cfg).epsilon - c) / std::abs(c - 1.0);
        });
        add("classical limit |eps_bgk - eps_cl|/|eps_cl - 1| at q=1e-3", dev, 5e-4);

        const double dm = parallel_max(cl.size(), jobs, [&](std::size_t i) {
            const Complex b = epsilon_bgk(cl[i], cfg).epsilon;
            return std::abs(epsilon_mermin(cl[i], cfg).epsilon - b) / std::abs(b - 1.0);
        });
        add("Mermin -> BGK |eps_M - eps_bgk|/|eps_bgk - 1| at q=1e-3", dm, 1e-3);

        const double dd = parallel_max(cl.size(), jobs, [&](std::size_t i) {
            const Complex lam = lambda0(ComplexFreq{cl[i].w()}, DegeneracyParam{cl[i].alpha}, cfg).value;
            return rel(mermin_d(cl[i], cfg).value, lam);
        });
        add("Mermin d -> lambda0 |d - lambda0|/|lambda0| at q=1e-3", dd, 5e-4);
    }

    // O(q^2) order of both limits along the hbar -> 0 scaling (fixed w, u_p).
    {
        std::vector<std::pair<double, Complex>> cases;
        for (double a : g.alphas)
            for (Complex w : kScalingW)
                cases.push_back({a, w});
        auto ratio_dev = [&](bool mermin) {
            return parallel_max(cases.size(), jobs, [&](std::size_t i) {
                double dev[2];
                int k = 0;
                for (double q : {1e-2, 1e-3}) {
                    const PlasmaPoint p = scaled(cases[i].first, cases[i].second, q);
                    if (mermin) {
                        const Complex lam =
                            lambda0(ComplexFreq{p.w()}, DegeneracyParam{p.alpha}, cfg).value;
                        dev[k++] = rel(mermin_d(p, cfg).value, lam);
                    } else {
                        const Complex c = epsilon_classical(p, cfg).epsilon;
                        dev[k++]        = std::abs(epsilon_bgk(p, cfg).epsilon - c) / std::abs(c - 1.0);
                    }
                }
                return std::abs(dev[0] / dev[1] - 100.0);
            });
        };
        add("O(q^2) classical limit at fixed w, u_p: |ratio(1e-2/1e-3) - 100|", ratio_dev(false), 20.0);
        add("O(q^2) Mermin d limit at fixed w, u_p: |ratio(1e-2/1e-3) - 100|", ratio_dev(true), 20.0);
    }

    // Reflection in frequency: conj eps(x, y) = eps(-x, y).
    {
        const double dev = parallel_max(dynamic_pts.size(), jobs, [&](std::size_t i) {
            const auto& p   = dynamic_pts[i];
            const Complex a = detail::epsilon_bgk(p.alpha, p.q, {p.x, p.y}, p.xp, cfg);
            const Complex b = detail::epsilon_bgk(p.alpha, p.q, {-p.x, p.y}, p.xp, cfg);
            return rel(std::conj(b), a);
        });
        add("frequency reflection conj eps(x,y) = eps(-x,y) (rel)", dev, 1e-9);
    }

    // Static screening: real, >= 1, and weaker for more degenerate gases.
    {
        std::vector<double> alphas = g.alphas;
        std::sort(alphas.begin(), alphas.end());
        std::vector<std::pair<double, double>> cases;
        for (double q : g.qs)
            for (double y : g.ys)
                cases.push_back({q, y});
        const double dev = parallel_max(cases.size(), jobs, [&](std::size_t i) {
            double worst = 0.0;
            double prev_b = INFINITY, prev_c = INFINITY;
            for (double a : alphas) {
                const PlasmaPoint p{a, cases[i].first, 0.0, cases[i].second, 1.0};
                const Complex b = epsilon_bgk(p, cfg).epsilon;
                const Complex c = epsilon_classical(p, cfg).epsilon;
                worst = std::max({worst, std::abs(b.imag()) / std::abs(b), std::abs(c.imag()) / std::abs(c)});
                if (b.real() < 1.0 || c.real() < 1.0 || b.real() > prev_b || c.real() > prev_c)
                    worst = INFINITY;
                prev_b = b.real();
                prev_c = c.real();
            }
            return worst;
        });
        add("static screening real, >= 1, non-increasing in alpha (|Im|/|eps|)", dev, 1e-12);
    }

    // Collisionless continuity and causality of the Lindhard branch.
    {
        std::vector<PlasmaPoint> cases;
        for (double a : {-5.0, 0.0, 5.0})
            for (double q : {0.5, 1.0})
                for (double x : {0.5, 1.0, 2.0})
                    cases.push_back({a, q, x, 0.0, 1.0});
        const double dev = parallel_max(cases.size(), jobs, [&](std::size_t i) {
            PlasmaPoint near = cases[i];
            near.y           = 1e-6;
            const Complex l  = epsilon_lindhard(cases[i], cfg).epsilon;
            return rel(epsilon_bgk(near, cfg).epsilon, l);
        });
        add("collisionless continuity eps_bgk(y=1e-6) = eps_lindhard (rel)", dev, 1e-3);

        const double neg = parallel_max(cases.size(), jobs, [&](std::size_t i) {
            return std::max(0.0, -epsilon_lindhard(cases[i], cfg).epsilon.imag());
        });
        add("Lindhard dissipation Im eps >= 0 (max negative part)", neg, 0.0);
    }

    // Mermin static permittivity does not depend on y.
    {
        std::vector<std::pair<double, double>> cases;
        for (double a : {-5.0, 0.0, 5.0})
            for (double q : {0.5, 1.0})
                cases.push_back({a, q});
        const double dev = parallel_max(cases.size(), jobs, [&](std::size_t i) {
            const auto r1 = epsilon_mermin({cases[i].first, cases[i].second, 0.0, 0.1, 1.0}, cfg);
            const auto r2 = epsilon_mermin({cases[i].first, cases[i].second, 0.0, 1.0, 1.0}, cfg);
            return std::abs(r1.epsilon - r2.epsilon) /
                   (10.0 * (r1.err_estimate + r2.err_estimate) + 1e-15 * std::abs(r1.epsilon));
        });
        add("Mermin static eps independent of y (/10 err est)", dev, 1.0);
    }

    return out;
}

std::string render_verify(const std::vector<IdentityReport>& reports)
{
    std::string text;
    char line[256];
    std::snprintf(line, sizeof line, "%-72s %12s %12s  %s\n", "identity", "max dev", "tolerance", "result");
    text += line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%-72s %12.3e %12.3e  %s\n", r.name.c_str(), r.max_deviation,
                      r.tolerance, r.pass() ? "PASS" : "FAIL");
        text += line;
    }
    return text;
}

} // namespace qdiel::cli
