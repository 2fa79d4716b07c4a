#pragma once

#include <optional>
#include <string_view>

#include "qdiel/quadrature.hpp"
#include "qdiel/types.hpp"

namespace qdiel {

/// One evaluation point in thermal-wave-number units:
/// x = omega / (k0 v0), y = nu / (k0 v0), xp = omega_p / (k0 v0), q = k / k0.
struct PlasmaPoint {
    double alpha = 0.0;
    double q     = 1.0;
    double x     = 0.0;
    double y     = 0.1;
    double xp    = 1.0;

    [[nodiscard]] Complex z() const noexcept { return {x, y}; }
    [[nodiscard]] Complex w() const noexcept { return z() / q; }
    [[nodiscard]] double up() const noexcept { return xp / q; }

    /// Checks the collisional invariants (y > 0); throws DomainError naming
    /// the violated one.
    void validate() const;
    /// Same, but for the collisionless branch (y == 0, x > 0).
    void validate_collisionless() const;
};

enum class Method { bgk, bgk_alt, mermin, lindhard, classical };

std::string_view to_string(Method m) noexcept;
/// Accepts the lower-case names used on the command line; nullopt otherwise.
std::optional<Method> parse_method(std::string_view name) noexcept;

struct ResponseResult {
    Complex epsilon{};
    /// sigma_l / sigma_0; absent where undefined (x = 0, or y = 0).
    std::optional<Complex> sigma_ratio;
    Method method   = Method::bgk;
    double err_estimate = 0.0;
};

/// Algebraic forms of the coordinate-space BGK permittivity.
enum class BgkForm {
    dispersion,     ///< kernel L over u + i v lambda0 (production path)
    kernel,         ///< kernel L over the 1 + i y F0 / (2 q phi0) denominator
    log_difference, ///< log-ratio numerator over the same denominator
};

ResponseResult epsilon_bgk(const PlasmaPoint& p, const QuadratureConfig& cfg = {},
                           BgkForm form = BgkForm::dispersion);

/// Like epsilon_bgk but requires x > 0 so that sigma / sigma_0 exists.
ResponseResult sigma_bgk(const PlasmaPoint& p, const QuadratureConfig& cfg = {},
                         BgkForm form = BgkForm::dispersion);

/// q -> 0 form built from lambda0 alone.
ResponseResult epsilon_classical(const PlasmaPoint& p, const QuadratureConfig& cfg = {});

/// Collisionless (y = 0) permittivity with the retarded prescription.
ResponseResult epsilon_lindhard(const PlasmaPoint& p, const QuadratureConfig& cfg = {});

/// Momentum-space relaxation (particle-conserving) permittivity.
ResponseResult epsilon_mermin(const PlasmaPoint& p, const QuadratureConfig& cfg = {});

/// d = L(w, q) / L(0, q): ratio of the shifted Lindhard increments at
/// complex and zero frequency.
IntegralResult mermin_d(const PlasmaPoint& p, const QuadratureConfig& cfg = {});

/// epsilon_bgk(p) - epsilon_mermin(p).
Complex bgk_vs_mermin_delta(const PlasmaPoint& p, const QuadratureConfig& cfg = {});

/// Dispatch by method tag.
ResponseResult evaluate(Method m, const PlasmaPoint& p, const QuadratureConfig& cfg = {});

namespace detail {

/// BGK permittivity at an arbitrary complex frequency z = x + i y with
/// y != 0; no sign restriction on x. Used for the reflection property.
Complex epsilon_bgk(double alpha, double q, Complex z, double xp, const QuadratureConfig& cfg);

} // namespace detail

} // namespace qdiel
