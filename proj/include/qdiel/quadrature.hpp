#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdiel/types.hpp"

namespace qdiel {

struct QuadratureConfig {
    double rel_tol   = 1e-10;
    double abs_tol   = 1e-14;
    int max_depth    = 50;
    double tail_eps  = 1e-16;
    double pv_gap    = 1e-3; // half-width of the principal-value exclusion window
    int max_intervals = 20000;

    /// Throws DomainError if any field is out of range.
    void validate() const;
};

struct IntegralResult {
    Complex value{};
    double err_estimate = 0.0;
    long evaluations    = 0;
};

/// Adaptive integration gave up with the error estimate above tolerance.
class QuadratureFailure : public std::runtime_error {
public:
    QuadratureFailure(const std::string& what, IntegralResult partial)
        : std::runtime_error(what), partial_(partial)
    {
    }

    [[nodiscard]] const IntegralResult& partial() const noexcept { return partial_; }

private:
    IntegralResult partial_;
};

using Integrand = std::function<Complex(double)>;

/// Shape information about an integrand that the line integrator uses to
/// place its cut and initial breakpoints.
struct LineHints {
    /// Poles of the rational factor (need not be in the upper half plane).
    std::vector<Complex> poles;
    /// Largest shift of the Fermi kernel, e.g. q/2 for ln(1+e^{alpha-(t-q/2)^2}).
    double kernel_shift = 0.0;
};

/// Global adaptive Gauss-Kronrod (7/15) integration over [a, b] with the
/// given interior breakpoints as the initial partition.
IntegralResult integrate_interval(const Integrand& f, double a, double b,
                                  const QuadratureConfig& cfg,
                                  std::span<const double> breakpoints = {});

/// Copy of cfg whose abs_tol is expressed relative to the natural magnitude
/// of a Fermi-kernel integral: the kernel peak ln(1 + e^alpha) (capped at 1)
/// divided by max(1, reach)^2, reach being the largest pole modulus.
QuadratureConfig scaled_for(const QuadratureConfig& cfg, DegeneracyParam alpha, double reach = 0.0);

/// Half-width of the window outside which every Fermi-type kernel with
/// degeneracy alpha is below tail_eps (including 1/pole_distance growth).
double tail_cut(DegeneracyParam alpha, double tail_eps, double pole_distance);

/// Integral over the real line of an integrand dominated by
/// max(f0(t, alpha), ln(1 + e^{alpha - t^2})).
IntegralResult integrate_line(const Integrand& f, DegeneracyParam alpha,
                              const QuadratureConfig& cfg, const LineHints& hints = {});

/// Principal value of the integral of numerator(t) / (t - pole) over the
/// real line; `numerator` must be smooth at the pole.
IntegralResult principal_value(const Integrand& numerator, double pole,
                               DegeneracyParam alpha, const QuadratureConfig& cfg,
                               double kernel_shift = 0.0);

} // namespace qdiel
