#include "qdiel/response.hpp"

#include <cmath>
#include <string>

#include "qdiel/dispersion.hpp"
#include "qdiel/fermi.hpp"

namespace qdiel {

namespace {

void require(bool ok, const char* message)
{
    if (!ok)
        throw DomainError(message);
}

double rel_err(const IntegralResult& r)
{
    const double mag = std::abs(r.value);
    return mag > 0.0 ? r.err_estimate / mag : r.err_estimate;
}

// Both families share the structure
//   eps - 1 = -(xp/q)^2 S,   sigma / sigma_0 = i x y S / q^2,
// so the linkage eps - 1 = i xp^2 / (x y) * sigma / sigma_0 holds exactly.
ResponseResult assemble(const PlasmaPoint& p, Method m, Complex s, double rel_error)
{
    ResponseResult r;
    r.method        = m;
    const Complex chi = -(p.up() * p.up()) * s;
    r.epsilon       = 1.0 + chi;
    if (p.x > 0.0 && p.y > 0.0)
        r.sigma_ratio = Complex(0.0, p.x * p.y) * s / (p.q * p.q);
    r.err_estimate = std::abs(chi) * rel_error;
    return r;
}

} // namespace

void PlasmaPoint::validate() const
{
    DegeneracyParam{alpha};
    require(std::isfinite(q) && q > 0.0, "q must be finite and > 0");
    require(std::isfinite(x) && x >= 0.0, "x must be finite and >= 0");
    require(std::isfinite(y) && y > 0.0, "y must be finite and > 0");
    require(std::isfinite(xp) && xp > 0.0, "xp must be finite and > 0");
}

void PlasmaPoint::validate_collisionless() const
{
    DegeneracyParam{alpha};
    require(std::isfinite(q) && q > 0.0, "q must be finite and > 0");
    require(std::isfinite(x) && x > 0.0, "collisionless branch requires x > 0");
    require(y == 0.0, "collisionless branch requires y == 0");
    require(std::isfinite(xp) && xp > 0.0, "xp must be finite and > 0");
}

std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::bgk: return "bgk";
    case Method::bgk_alt: return "bgk_alt";
    case Method::mermin: return "mermin";
    case Method::lindhard: return "lindhard";
    case Method::classical: return "classical";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) noexcept
{
    for (Method m : {Method::bgk, Method::bgk_alt, Method::mermin, Method::lindhard, Method::classical})
        if (to_string(m) == name)
            return m;
    return std::nullopt;
}

ResponseResult epsilon_bgk(const PlasmaPoint& p, const QuadratureConfig& cfg, BgkForm form)
{
    p.validate();
    const DegeneracyParam alpha{p.alpha};
    const ComplexFreq w{p.w()};
    const double four_phi2 = 4.0 * phi2(alpha, cfg);
    const double v         = p.y / p.q;

    if (form == BgkForm::dispersion) {
        const IntegralResult big_l = kernel_L(w, WaveNumber{p.q}, alpha, cfg);
        const IntegralResult lam   = lambda0(w, alpha, cfg);
        const Complex denom        = w.value().real() + Complex(0.0, v) * lam.value;
        const Complex s            = w.value() * big_l.value / (four_phi2 * denom);
        const double err           = rel_err(big_l) + v * lam.err_estimate / std::abs(denom);
        return assemble(p, Method::bgk, s, err);
    }

    // 1 + (i y / 2 phi0) int f0 / (q t - z) = 1 + i v F0(w) / (2 phi0)
    const IntegralResult hilbert = f0_hilbert(w, alpha, cfg);
    const Complex iv_half        = Complex(0.0, v) / (2.0 * phi0(alpha, cfg));
    const Complex denom          = 1.0 + iv_half * hilbert.value;
    const double denom_err       = std::abs(iv_half) * hilbert.err_estimate / std::abs(denom);

    if (form == BgkForm::kernel) {
        const IntegralResult big_l = kernel_L(w, WaveNumber{p.q}, alpha, cfg);
        const Complex s            = big_l.value / (four_phi2 * denom);
        return assemble(p, Method::bgk, s, rel_err(big_l) + denom_err);
    }

    // Numerator: int ln[(1+e^{alpha-(t-q/2)^2}) / (1+e^{alpha-(t+q/2)^2})] dt / (q t - z).
    // The exponents differ by exactly 2 q t.
    const double a    = 0.5 * p.q;
    const Complex pol = w.value();
    auto f = [&](double t) {
        const double b = p.alpha - (t + a) * (t + a);
        return log_fermi_ratio(b, 2.0 * p.q * t) / (p.q * (t - pol));
    };
    const IntegralResult num = integrate_line(f, alpha, cfg, {.poles = {pol}, .kernel_shift = a});
    const Complex s          = -num.value / (four_phi2 * denom);
    ResponseResult r         = assemble(p, Method::bgk_alt, s, rel_err(num) + denom_err);
    return r;
}

ResponseResult sigma_bgk(const PlasmaPoint& p, const QuadratureConfig& cfg, BgkForm form)
{
    if (!(p.x > 0.0))
        throw DomainError("sigma / sigma_0 requires x > 0 (conductivity carries a factor omega)");
    return epsilon_bgk(p, cfg, form);
}

ResponseResult epsilon_classical(const PlasmaPoint& p, const QuadratureConfig& cfg)
{
    p.validate();
    const DegeneracyParam alpha{p.alpha};
    const IntegralResult lam = lambda0(ComplexFreq{p.w()}, alpha, cfg);
    const double ratio       = phi0(alpha, cfg) / phi2(alpha, cfg);
    const Complex denom      = p.x + Complex(0.0, p.y) * lam.value;
    const Complex s          = -ratio * p.z() * lam.value / denom;
    const double err         = rel_err(lam) + p.y * lam.err_estimate / std::abs(denom);
    return assemble(p, Method::classical, s, err);
}

ResponseResult epsilon_lindhard(const PlasmaPoint& p, const QuadratureConfig& cfg)
{
    p.validate_collisionless();
    const DegeneracyParam alpha{p.alpha};
    const IntegralResult big_l = kernel_L_retarded(p.x / p.q, WaveNumber{p.q}, alpha, cfg);
    const Complex s            = big_l.value / (4.0 * phi2(alpha, cfg));
    ResponseResult r           = assemble(p, Method::lindhard, s, rel_err(big_l));
    r.sigma_ratio.reset();
    return r;
}

IntegralResult mermin_d(const PlasmaPoint& p, const QuadratureConfig& cfg)
{
    p.validate();
    const DegeneracyParam alpha{p.alpha};
    const WaveNumber q{p.q};
    const IntegralResult dynamic = kernel_L(ComplexFreq{p.w()}, q, alpha, cfg);
    const IntegralResult stat    = kernel_L_static(q, alpha, cfg);
    IntegralResult d;
    d.value        = dynamic.value / stat.value;
    d.err_estimate = std::abs(d.value) * (rel_err(dynamic) + rel_err(stat));
    d.evaluations  = dynamic.evaluations + stat.evaluations;
    return d;
}

ResponseResult epsilon_mermin(const PlasmaPoint& p, const QuadratureConfig& cfg)
{
    p.validate();
    const DegeneracyParam alpha{p.alpha};
    const WaveNumber q{p.q};
    const IntegralResult dynamic = kernel_L(ComplexFreq{p.w()}, q, alpha, cfg);
    const IntegralResult stat    = kernel_L_static(q, alpha, cfg);
    const Complex d              = dynamic.value / stat.value;
    const Complex denom          = p.x + Complex(0.0, p.y) * d;
    const Complex s              = p.z() * dynamic.value / (4.0 * phi2(alpha, cfg) * denom);
    const double err             = 2.0 * (rel_err(dynamic) + rel_err(stat));
    return assemble(p, Method::mermin, s, err);
}

Complex bgk_vs_mermin_delta(const PlasmaPoint& p, const QuadratureConfig& cfg)
{
    return epsilon_bgk(p, cfg).epsilon - epsilon_mermin(p, cfg).epsilon;
}

ResponseResult evaluate(Method m, const PlasmaPoint& p, const QuadratureConfig& cfg)
{
    switch (m) {
    case Method::bgk: return epsilon_bgk(p, cfg, BgkForm::dispersion);
    case Method::bgk_alt: return epsilon_bgk(p, cfg, BgkForm::log_difference);
    case Method::mermin: return epsilon_mermin(p, cfg);
    case Method::lindhard: return epsilon_lindhard(p, cfg);
    case Method::classical: return epsilon_classical(p, cfg);
    }
    throw DomainError("unknown method");
}

namespace detail {

Complex epsilon_bgk(double alpha_value, double q, Complex z, double xp, const QuadratureConfig& cfg)
{
    const DegeneracyParam alpha{alpha_value};
    const Complex w      = z / q;
    const Complex big_l  = detail::kernel_L(w, q, alpha, cfg).value;
    const Complex lam    = detail::lambda0(w, alpha, cfg).value;
    const Complex denom  = w.real() + Complex(0.0, w.imag()) * lam;
    const double up      = xp / q;
    return 1.0 - up * up * w * big_l / (4.0 * phi2(alpha, cfg) * denom);
}

} // namespace detail

} // namespace qdiel
