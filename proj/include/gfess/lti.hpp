#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gfess {

using Complex = std::complex<double>;

/**
 * Real polynomial in the Laplace variable s.
 *
 * Coefficients are stored in ascending powers: c[0] + c[1] s + c[2] s^2 + ...
 * The stored form is always trimmed: the highest-order coefficient is nonzero
 * unless the polynomial is the zero polynomial, which is stored as {0}.
 */
class Polynomial {
public:
    Polynomial();
    Polynomial(std::initializer_list<double> coefficients);
    explicit Polynomial(std::vector<double> coefficients);

    /// The monomial s.
    static Polynomial s();
    static Polynomial constant(double value);
    /// a + b s
    static Polynomial linear(double a, double b);

    std::span<const double> coefficients() const noexcept { return coeffs_; }
    double operator[](std::size_t power) const noexcept {
        return power < coeffs_.size() ? coeffs_[power] : 0.0;
    }
    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
    double max_abs_coefficient() const noexcept;

    Complex evaluate(Complex s) const noexcept;
    double evaluate(double s) const noexcept;

    Polynomial scaled(double factor) const;
    /// Removes the lowest-order coefficient, i.e. divides by s. Requires c[0] to be
    /// treated as zero by the caller.
    Polynomial shifted_down() const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim();

    std::vector<double> coeffs_;
};

Polynomial poly_multiply(const Polynomial& a, const Polynomial& b);
Polynomial poly_add(const Polynomial& a, const Polynomial& b);

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) { return poly_multiply(a, b); }
inline Polynomial operator+(const Polynomial& a, const Polynomial& b) { return poly_add(a, b); }
inline Polynomial operator*(double k, const Polynomial& p) { return p.scaled(k); }

/// Roots of a polynomial, from the eigenvalues of its companion matrix.
std::vector<Complex> poly_roots(const Polynomial& p);

/// Ratio of two real polynomials in s. The denominator is never the zero polynomial.
class RationalTransferFunction {
public:
    RationalTransferFunction(Polynomial numerator, Polynomial denominator);

    static RationalTransferFunction unity();
    /// gain * pole / (s + pole): first-order lag with DC gain `gain`.
    static RationalTransferFunction first_order(double pole, double gain = 1.0);

    const Polynomial& numerator() const noexcept { return numerator_; }
    const Polynomial& denominator() const noexcept { return denominator_; }

    /// Divides by s (multiplies the denominator by s).
    RationalTransferFunction divided_by_s() const;
    RationalTransferFunction scaled(double factor) const;

private:
    Polynomial numerator_;
    Polynomial denominator_;
};

RationalTransferFunction operator*(const RationalTransferFunction& a, const RationalTransferFunction& b);
RationalTransferFunction operator+(const RationalTransferFunction& a, const RationalTransferFunction& b);

/// Horner evaluation of numerator and denominator. Throws PoleHitError when
/// |den(s)| < 1e-12 * max(1, largest |den coefficient|).
Complex evaluate(const RationalTransferFunction& tf, Complex s);

double magnitude_db(const RationalTransferFunction& tf, double omega);
double phase_deg(const RationalTransferFunction& tf, double omega);

struct BandwidthSearch {
    double omega_min = 1e-4;
    double omega_max = 1e4;
    int probe_points = 400;
    double relative_tolerance = 1e-6;
};

/**
 * Smallest omega at which |tf(j omega)| falls through dc_reference / sqrt(2).
 *
 * A log-spaced probe scan over [omega_min, omega_max] locates the first sample
 * below the threshold that follows a sample at or above it; bisection in log
 * space then refines the crossing to the requested relative tolerance.
 * Throws NoCrossingError if no such pair exists.
 */
double measure_bandwidth(const RationalTransferFunction& tf, double dc_reference,
                         const BandwidthSearch& search = {});

/// Cancels common factors of s shared by numerator and denominator. A coefficient
/// counts as zero when |c| <= 1e-12 * largest |c| of its polynomial.
RationalTransferFunction cancel_origin_factors(const RationalTransferFunction& tf);

/// True when every root of p has real part < -margin.
bool is_hurwitz(const Polynomial& p, double margin = 1e-9);

/**
 * Steady-state value of the response of tf to a step of the given amplitude,
 * by the final-value theorem after explicit cancellation of common s factors.
 *
 * Throws DivergenceError when a pole at the origin remains, and InstabilityError
 * when any remaining pole has non-negative real part.
 */
double final_value_of_step_response(const RationalTransferFunction& tf, double step_amplitude);

}  // namespace gfess
