#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qdiel {

using Complex = std::complex<double>;

/// Raised when an argument violates a documented domain invariant.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dimensionless chemical potential mu / (k_B T).
///
/// Any finite value is accepted up to |alpha| <= kMaxAbs; beyond that the
/// Maxwellian and degenerate asymptotes are exact to double precision and
/// the quadrature tail cut is no longer meaningful.
class DegeneracyParam {
public:
    static constexpr double kMaxAbs = 1.0e6;

    explicit DegeneracyParam(double alpha) : alpha_(alpha)
    {
        if (!std::isfinite(alpha))
            throw DomainError("alpha must be finite");
        if (std::abs(alpha) > kMaxAbs)
            throw DomainError("|alpha| must not exceed 1e6");
    }

    [[nodiscard]] double value() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// Dimensionless wave number q = k / k0, strictly positive.
class WaveNumber {
public:
    explicit WaveNumber(double q) : q_(q)
    {
        if (!std::isfinite(q) || !(q > 0.0))
            throw DomainError("q must be finite and > 0");
    }

    [[nodiscard]] double value() const noexcept { return q_; }

private:
    double q_;
};

/// Complex frequency w = (omega + i nu) / (k v0) in the upper half plane.
class ComplexFreq {
public:
    explicit ComplexFreq(Complex w) : w_(w)
    {
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw DomainError("w must be finite");
        if (!(w.imag() > 0.0))
            throw DomainError("Im(w) must be > 0");
    }

    [[nodiscard]] Complex value() const noexcept { return w_; }

private:
    Complex w_;
};

} // namespace qdiel
