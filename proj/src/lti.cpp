#include "gfess/lti.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gfess/errors.hpp"

namespace gfess {

namespace {

constexpr double kPoleHitTolerance = 1e-12;
constexpr double kZeroCoefficientTolerance = 1e-12;

bool negligible(double c, const Polynomial& owner) {
    return std::abs(c) <= kZeroCoefficientTolerance * owner.max_abs_coefficient();
}

}  // namespace

Polynomial::Polynomial() : coeffs_{0.0} {}

Polynomial::Polynomial(std::initializer_list<double> coefficients) : coeffs_(coefficients) {
    trim();
}

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    trim();
}

Polynomial Polynomial::s() { return Polynomial{0.0, 1.0}; }

Polynomial Polynomial::constant(double value) { return Polynomial{value}; }

Polynomial Polynomial::linear(double a, double b) { return Polynomial{a, b}; }

void Polynomial::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) {
        coeffs_.pop_back();
    }
    if (coeffs_.empty()) {
        coeffs_.push_back(0.0);
    }
}

double Polynomial::max_abs_coefficient() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

Complex Polynomial::evaluate(Complex s) const noexcept {
    Complex acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

double Polynomial::evaluate(double s) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

Polynomial Polynomial::scaled(double factor) const {
    std::vector<double> out(coeffs_);
    for (double& c : out) {
        c *= factor;
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::shifted_down() const {
    if (coeffs_.size() == 1) {
        return Polynomial{};
    }
    return Polynomial(std::vector<double>(coeffs_.begin() + 1, coeffs_.end()));
}

Polynomial poly_multiply(const Polynomial& a, const Polynomial& b) {
    const auto ca = a.coefficients();
    const auto cb = b.coefficients();
    std::vector<double> out(ca.size() + cb.size() - 1, 0.0);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        for (std::size_t j = 0; j < cb.size(); ++j) {
            out[i + j] += ca[i] * cb[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
    const std::size_t n = std::max(a.coefficients().size(), b.coefficients().size());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a[i] + b[i];
    }
    return Polynomial(std::move(out));
}

std::vector<Complex> poly_roots(const Polynomial& p) {
    const auto c = p.coefficients();
    const std::size_t n = p.degree();
    if (n == 0) {
        return {};
    }
    const double lead = c[n];
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                      static_cast<Eigen::Index>(n));
    for (std::size_t i = 1; i < n; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -c[i] / lead;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    const auto& eig = solver.eigenvalues();
    std::vector<Complex> roots;
    roots.reserve(n);
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        roots.emplace_back(eig(i).real(), eig(i).imag());
    }
    return roots;
}

RationalTransferFunction::RationalTransferFunction(Polynomial numerator, Polynomial denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
    if (denominator_.is_zero()) {
        throw InvalidParameterError("denominator", "transfer function denominator is the zero polynomial");
    }
}

RationalTransferFunction RationalTransferFunction::unity() {
    return RationalTransferFunction(Polynomial{1.0}, Polynomial{1.0});
}

RationalTransferFunction RationalTransferFunction::first_order(double pole, double gain) {
    return RationalTransferFunction(Polynomial{gain * pole}, Polynomial{pole, 1.0});
}

RationalTransferFunction RationalTransferFunction::divided_by_s() const {
    return RationalTransferFunction(numerator_, denominator_ * Polynomial::s());
}

RationalTransferFunction RationalTransferFunction::scaled(double factor) const {
    return RationalTransferFunction(numerator_.scaled(factor), denominator_);
}

RationalTransferFunction operator*(const RationalTransferFunction& a, const RationalTransferFunction& b) {
    return RationalTransferFunction(a.numerator() * b.numerator(), a.denominator() * b.denominator());
}

RationalTransferFunction operator+(const RationalTransferFunction& a, const RationalTransferFunction& b) {
    if (a.denominator() == b.denominator()) {
        return RationalTransferFunction(a.numerator() + b.numerator(), a.denominator());
    }
    return RationalTransferFunction(a.numerator() * b.denominator() + b.numerator() * a.denominator(),
                                    a.denominator() * b.denominator());
}

Complex evaluate(const RationalTransferFunction& tf, Complex s) {
    const Complex den = tf.denominator().evaluate(s);
    const double guard = kPoleHitTolerance * std::max(1.0, tf.denominator().max_abs_coefficient());
    if (std::abs(den) < guard) {
        std::ostringstream msg;
        msg << "evaluation at a pole: s=" << s.real() << (s.imag() < 0 ? "" : "+") << s.imag()
            << "j, |den(s)|=" << std::abs(den);
        throw PoleHitError(msg.str());
    }
    return tf.numerator().evaluate(s) / den;
}

double magnitude_db(const RationalTransferFunction& tf, double omega) {
    return 20.0 * std::log10(std::abs(evaluate(tf, Complex{0.0, omega})));
}

double phase_deg(const RationalTransferFunction& tf, double omega) {
    return std::arg(evaluate(tf, Complex{0.0, omega})) * 180.0 / std::numbers::pi;
}

double measure_bandwidth(const RationalTransferFunction& tf, double dc_reference,
                         const BandwidthSearch& search) {
    if (!(dc_reference > 0.0)) {
        throw InvalidParameterError("dc_reference", "must be positive");
    }
    if (!(search.omega_min > 0.0) || !(search.omega_max > search.omega_min) || search.probe_points < 2) {
        throw InvalidParameterError("search", "need 0 < omega_min < omega_max and at least two probes");
    }
    const double threshold = dc_reference / std::numbers::sqrt2;
    const auto gain = [&](double omega) { return std::abs(evaluate(tf, Complex{0.0, omega})); };

    const double log_lo = std::log10(search.omega_min);
    const double log_step = (std::log10(search.omega_max) - log_lo) / (search.probe_points - 1);

    double prev_omega = search.omega_min;
    bool prev_above = gain(prev_omega) >= threshold;
    for (int i = 1; i < search.probe_points; ++i) {
        const double omega = std::pow(10.0, log_lo + i * log_step);
        const bool above = gain(omega) >= threshold;
        if (prev_above && !above) {
            double lo = prev_omega;
            double hi = omega;
            while ((hi - lo) > search.relative_tolerance * lo) {
                const double mid = std::sqrt(lo * hi);
                if (gain(mid) >= threshold) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return std::sqrt(lo * hi);
        }
        prev_omega = omega;
        prev_above = above;
    }
    std::ostringstream msg;
    msg << "magnitude never crosses " << threshold << " from above on [" << search.omega_min << ", "
        << search.omega_max << "] rad/s";
    throw NoCrossingError(msg.str());
}

RationalTransferFunction cancel_origin_factors(const RationalTransferFunction& tf) {
    Polynomial num = tf.numerator();
    Polynomial den = tf.denominator();
    while (num.degree() > 0 && den.degree() > 0 && negligible(num[0], num) && negligible(den[0], den)) {
        num = num.shifted_down();
        den = den.shifted_down();
    }
    return RationalTransferFunction(std::move(num), std::move(den));
}

bool is_hurwitz(const Polynomial& p, double margin) {
    const auto roots = poly_roots(p);
    return std::all_of(roots.begin(), roots.end(), [margin](Complex r) { return r.real() < -margin; });
}

double final_value_of_step_response(const RationalTransferFunction& tf, double step_amplitude) {
    if (tf.numerator().is_zero()) {
        return 0.0;
    }
    const RationalTransferFunction reduced = cancel_origin_factors(tf);
    const Polynomial& den = reduced.denominator();
    if (negligible(den[0], den)) {
        throw DivergenceError("a pole at s=0 remains after cancelling common factors of s; "
                              "the step response grows without bound");
    }
    if (!is_hurwitz(den)) {
        throw InstabilityError("denominator has a root with non-negative real part; "
                               "the final-value theorem does not apply");
    }
    return reduced.numerator()[0] / den[0] * step_amplitude;
}

}  // namespace gfess
