#include "qdiel/fermi.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

namespace qdiel {

namespace {

// ln(1 + e^x) split at x = 0.
double softplus(double x) noexcept
{
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// 1 / (1 + e^{-x})
double logistic(double x) noexcept
{
    if (x >= 0.0)
        return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

enum class Moment { zero, second, zero_from_g };

double moment_integral(Moment kind, DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    const double cut = tail_cut(alpha, cfg.tail_eps, 1.0);
    Integrand f;
    switch (kind) {
    case Moment::zero:
        f = [alpha](double c) { return Complex(fermi_f0(c, alpha)); };
        break;
    case Moment::second:
        f = [alpha](double c) { return Complex(c * c * fermi_f0(c, alpha)); };
        break;
    case Moment::zero_from_g:
        f = [alpha](double c) { return Complex(2.0 * c * c * fermi_g(c, alpha)); };
        break;
    }
    // The Fermi edge sits at c = sqrt(alpha) for degenerate gases.
    std::vector<double> breaks;
    if (alpha.value() > 0.0)
        breaks.push_back(std::sqrt(alpha.value()));
    return integrate_interval(f, 0.0, cut, scaled_for(cfg, alpha), breaks).value.real();
}

using CacheKey = std::tuple<int, double, double, double, double, int>;

class MomentCache {
public:
    double get(Moment kind, DegeneracyParam alpha, const QuadratureConfig& cfg)
    {
        const CacheKey key{static_cast<int>(kind), alpha.value(), cfg.rel_tol,
                           cfg.abs_tol,            cfg.tail_eps,  cfg.max_depth};
        {
            std::shared_lock lock(mutex_);
            if (auto it = values_.find(key); it != values_.end())
                return it->second;
        }
        const double value = moment_integral(kind, alpha, cfg);
        std::unique_lock lock(mutex_);
        if (values_.size() > 4096)
            values_.clear();
        values_.emplace(key, value);
        return value;
    }

private:
    std::shared_mutex mutex_;
    std::map<CacheKey, double> values_;
};

MomentCache& cache()
{
    static MomentCache instance;
    return instance;
}

} // namespace

double fermi_f0(double t, DegeneracyParam alpha) noexcept
{
    return logistic(alpha.value() - t * t);
}

double fermi_g(double c, DegeneracyParam alpha) noexcept
{
    const double e = std::exp(-std::abs(c * c - alpha.value()));
    const double s = 1.0 + e;
    return e / (s * s);
}

double log_fermi(double t, DegeneracyParam alpha) noexcept
{
    return softplus(alpha.value() - t * t);
}

double log_fermi_ratio(double b, double d) noexcept
{
    if (std::abs(d) <= 1.0)
        return std::log1p(std::expm1(d) * logistic(b));
    return softplus(b + d) - softplus(b);
}

double phi0(DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    return cache().get(Moment::zero, alpha, cfg);
}

double phi2(DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    return cache().get(Moment::second, alpha, cfg);
}

double phi0_from_g(DegeneracyParam alpha, const QuadratureConfig& cfg)
{
    return moment_integral(Moment::zero_from_g, alpha, cfg);
}

} // namespace qdiel
