#include "qdiel/dispersion.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "qdiel/fermi.hpp"

namespace qdiel {

namespace detail {

namespace {

void require_off_axis(Complex w)
{
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        throw DomainError("w must be finite");
    if (w.imag() == 0.0)
        throw DomainError("Im(w) must be nonzero");
}

} // namespace

IntegralResult f0_hilbert(Complex w, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    require_off_axis(w);
    auto f = [&](double t) { return fermi_f0(t, alpha) / (t - w); };
    return integrate_line(f, alpha, cfg, {.poles = {w}});
}

IntegralResult lambda0(Complex w, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    require_off_axis(w);
    auto f = [&](double t) { return t * fermi_f0(t, alpha) / (t - w); };
    IntegralResult r  = integrate_line(f, alpha, cfg, {.poles = {w}});
    const double norm = 2.0 * phi0(alpha, cfg);
    r.value /= norm;
    r.err_estimate /= norm;
    return r;
}

IntegralResult l_shift(Complex w, double shift, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    require_off_axis(w);
    const Complex pole = w + shift;
    auto f             = [&](double t) { return log_fermi(t, alpha) / (t - pole); };
    return integrate_line(f, alpha, cfg, {.poles = {pole}});
}

IntegralResult kernel_L(Complex w, double q, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    require_off_axis(w);
    const double quarter_q2 = 0.25 * q * q;
    auto f = [&](double t) {
        const Complex d = t - w;
        return log_fermi(t, alpha) / (d * d - quarter_q2);
    };
    return integrate_line(f, alpha, cfg, {.poles = {w - 0.5 * q, w + 0.5 * q}});
}

} // namespace detail

IntegralResult f0_hilbert(ComplexFreq w, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    return detail::f0_hilbert(w.value(), alpha, cfg);
}

IntegralResult lambda0(ComplexFreq w, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    return detail::lambda0(w.value(), alpha, cfg);
}

IntegralResult lambda0_from_hilbert(ComplexFreq w, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    IntegralResult r     = f0_hilbert(w, alpha, cfg);
    const Complex factor = w.value() / (2.0 * phi0(alpha, cfg));
    r.value              = 1.0 + factor * r.value;
    r.err_estimate *= std::abs(factor);
    return r;
}

IntegralResult lambda_classical(ComplexFreq w, const QuadratureConfig& cfg)
{
    const Complex pole = w.value();
    auto f             = [&](double t) { return t * std::exp(-t * t) / (t - pole); };
    IntegralResult r   = integrate_line(f, DegeneracyParam{0.0}, cfg, {.poles = {pole}});
    r.value *= std::numbers::inv_sqrtpi;
    r.err_estimate *= std::numbers::inv_sqrtpi;
    return r;
}

IntegralResult l_shift(ComplexFreq w, double shift, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    if (!std::isfinite(shift))
        throw DomainError("shift must be finite");
    return detail::l_shift(w.value(), shift, alpha, cfg);
}

IntegralResult l_retarded(double p, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    auto s           = [&](double t) { return Complex(log_fermi(t, alpha)); };
    IntegralResult r = principal_value(s, p, alpha, cfg);
    r.value += Complex(0.0, std::numbers::pi * log_fermi(p, alpha));
    return r;
}

IntegralResult kernel_L(ComplexFreq w, WaveNumber q, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    return detail::kernel_L(w.value(), q.value(), alpha, cfg);
}

IntegralResult kernel_L_static(WaveNumber q, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    // L(0, q) = 2 PV int_0^inf g(t) / (t^2 - a^2), a = q/2. Since
    // PV int_0^inf dt / (t^2 - a^2) = 0, g(t) may be replaced by g(t) - g(a),
    // which leaves a regular integrand; the finite cut contributes the
    // closed-form tail of g(a) / (t^2 - a^2).
    const double a   = 0.5 * q.value();
    const double b   = alpha.value() - a * a;
    const double cut = tail_cut(alpha, cfg.tail_eps, 1.0) + 2.0 * a;
    auto f = [&](double t) {
        const double d = (a - t) * (a + t);
        if (d == 0.0)
            return Complex(-1.0 / (1.0 + std::exp(-b)));
        return Complex(-log_fermi_ratio(b, d) / d);
    };
    std::array<double, 2> breaks{a, alpha.value() > 0.0 ? std::sqrt(alpha.value()) : a};
    IntegralResult r = integrate_interval(f, 0.0, cut, scaled_for(cfg, alpha), breaks);

    const double g_a  = log_fermi(a, alpha);
    const double tail = g_a / (2.0 * a) * std::log1p(2.0 * a / (cut - a));
    r.value           = 2.0 * (r.value - tail);
    r.err_estimate *= 2.0;
    return r;
}

IntegralResult kernel_L_retarded(double w0, WaveNumber q, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    if (!std::isfinite(w0))
        throw DomainError("w0 must be finite");
    // l(w0 + a) - l(w0 - a) = PV int (lf(t + a) - lf(t - a)) / (t - w0), with
    // the kernel difference taken as one logarithm.
    const double a = 0.5 * q.value();
    auto diff      = [&](double t) {
        return log_fermi_ratio(alpha.value() - (t - a) * (t - a), -4.0 * t * a);
    };
    IntegralResult r = principal_value([&](double t) { return Complex(diff(t)); }, w0, alpha, cfg, a);
    r.value += Complex(0.0, std::numbers::pi * diff(w0));
    r.value /= q.value();
    r.err_estimate /= q.value();
    return r;
}

} // namespace qdiel
