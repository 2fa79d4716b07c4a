#pragma once

#include "qdiel/quadrature.hpp"
#include "qdiel/types.hpp"

namespace qdiel {

// Cauchy-type integrals of the Fermi kernels. Every function returns the
// value together with the propagated quadrature error estimate.

/// F0(w) = integral of f0(t) / (t - w).
IntegralResult f0_hilbert(ComplexFreq w, DegeneracyParam alpha, const QuadratureConfig& cfg = {});

/// Fermi-Dirac dispersion function lambda0(w) = 1 + w F0(w) / (2 phi0).
///
/// Evaluated through the equivalent form (1 / 2 phi0) * integral of
/// t f0(t) / (t - w), which keeps full relative accuracy for |w| >> 1 where
/// lambda0 ~ 1/w^2 and the two terms of the first form cancel.
IntegralResult lambda0(ComplexFreq w, DegeneracyParam alpha, const QuadratureConfig& cfg = {});

/// lambda0 through 1 + w F0(w) / (2 phi0) (cross-check path).
IntegralResult lambda0_from_hilbert(ComplexFreq w, DegeneracyParam alpha,
                                    const QuadratureConfig& cfg = {});

/// Van Kampen function lambda_c(w) = 1 + w Z(w), Z the plasma dispersion function.
IntegralResult lambda_classical(ComplexFreq w, const QuadratureConfig& cfg = {});

/// l(w + shift) = integral of ln(1 + e^{alpha - t^2}) / (t - (w + shift)).
/// The two functions of the quantum formulas are l(w - q/2) = l_shift(w, -q/2)
/// and l(w + q/2) = l_shift(w, q/2).
IntegralResult l_shift(ComplexFreq w, double shift, DegeneracyParam alpha,
                       const QuadratureConfig& cfg = {});

/// l at a real point with the retarded prescription p + i0:
/// principal value plus i pi ln(1 + e^{alpha - p^2}).
IntegralResult l_retarded(double p, DegeneracyParam alpha, const QuadratureConfig& cfg = {});

/// L(w, q) = integral of ln(1 + e^{alpha - t^2}) / ((t - w)^2 - q^2/4).
IntegralResult kernel_L(ComplexFreq w, WaveNumber q, DegeneracyParam alpha,
                        const QuadratureConfig& cfg = {});

/// L(0, q) on the real axis. Real under the retarded prescription since the
/// Plemelj terms of the two poles cancel; computed by subtracting the
/// singularity of the even integrand.
IntegralResult kernel_L_static(WaveNumber q, DegeneracyParam alpha, const QuadratureConfig& cfg = {});

/// Retarded L(w0 + i0, q) for real w0: the partial-fraction split
/// (l(w0 + q/2) - l(w0 - q/2)) / q evaluated as a single principal value.
IntegralResult kernel_L_retarded(double w0, WaveNumber q, DegeneracyParam alpha,
                                 const QuadratureConfig& cfg = {});

namespace detail {

// Unchecked variants accepting any w off the real axis (Im w < 0 included).
IntegralResult f0_hilbert(Complex w, DegeneracyParam alpha, const QuadratureConfig& cfg);
IntegralResult lambda0(Complex w, DegeneracyParam alpha, const QuadratureConfig& cfg);
IntegralResult l_shift(Complex w, double shift, DegeneracyParam alpha, const QuadratureConfig& cfg);
IntegralResult kernel_L(Complex w, double q, DegeneracyParam alpha, const QuadratureConfig& cfg);

} // namespace detail

} // namespace qdiel
