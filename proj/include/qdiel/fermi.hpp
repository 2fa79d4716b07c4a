#pragma once

#include "qdiel/quadrature.hpp"
#include "qdiel/types.hpp"

namespace qdiel {

/// Fermi-Dirac occupation 1 / (1 + e^{t^2 - alpha}).
double fermi_f0(double t, DegeneracyParam alpha) noexcept;

/// Linearization kernel e^{c^2-alpha} / (1 + e^{c^2-alpha})^2 = f0 (1 - f0).
double fermi_g(double c, DegeneracyParam alpha) noexcept;

/// ln(1 + e^{alpha - t^2}), the Fermi kernel integrated over the transverse
/// velocity components.
double log_fermi(double t, DegeneracyParam alpha) noexcept;

/// ln((1 + e^{b + d}) / (1 + e^{b})) without cancellation when d is small.
double log_fermi_ratio(double b, double d) noexcept;

/// Integral of f0 over [0, inf).
double phi0(DegeneracyParam alpha, const QuadratureConfig& cfg = {});

/// Integral of c^2 f0 over [0, inf).
double phi2(DegeneracyParam alpha, const QuadratureConfig& cfg = {});

/// 2 * integral of c^2 g(c) over [0, inf); equals phi0 after integrating by parts.
double phi0_from_g(DegeneracyParam alpha, const QuadratureConfig& cfg = {});

} // namespace qdiel
