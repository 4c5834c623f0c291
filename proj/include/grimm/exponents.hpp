#pragma once

// Exponent arithmetic for the g / g1 upper bounds:
//   delta(lambda) = 1/4 + lambda/2 - eps'            (1/33 < lambda < 1/29)
//   gamma(alpha, delta) = max(alpha, (1 - delta(1 - alpha)) / (2 - delta))
//   alpha1(alpha) = max(alpha, (1 + (1 - alpha) log(1 - alpha)) / (2 + log(1 - alpha)))
// and the quartic approximation (2 - a + a^2 + a^3)/4 of alpha1's second branch.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/rational.hpp>

namespace grimm {

using Rational = boost::rational<std::int64_t>;

inline constexpr double lambda_min = 1.0 / 33.0;
inline constexpr double lambda_max = 1.0 / 29.0;

inline double delta_of_lambda(double lambda, double eps_prime = 0.0) {
    if (!(lambda > lambda_min && lambda < lambda_max))
        throw std::out_of_range("lambda = " + std::to_string(lambda) + " outside (1/33, 1/29)");
    if (!(eps_prime >= 0.0)) throw std::invalid_argument("eps_prime must be >= 0");
    return 0.25 + lambda / 2.0 - eps_prime;
}

inline Rational delta_of_lambda(const Rational& lambda, const Rational& eps_prime = Rational(0)) {
    if (!(lambda > Rational(1, 33) && lambda < Rational(1, 29)))
        throw std::out_of_range("lambda outside (1/33, 1/29)");
    if (eps_prime < Rational(0)) throw std::invalid_argument("eps_prime must be >= 0");
    return Rational(1, 4) + lambda / Rational(2) - eps_prime;
}

// alpha = (1 - lambda)/2.
inline double alpha_of_lambda(double lambda) { return (1.0 - lambda) / 2.0; }
inline Rational alpha_of_lambda(const Rational& lambda) { return (Rational(1) - lambda) / Rational(2); }

inline double gamma_theorem4(double alpha, double delta) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::out_of_range("gamma: alpha must lie in (0, 1/2)");
    if (!(delta >= 0.0 && delta <= 1.0)) throw std::out_of_range("gamma: delta must lie in [0, 1]");
    return std::max(alpha, (1.0 - delta * (1.0 - alpha)) / (2.0 - delta));
}

inline Rational gamma_theorem4(const Rational& alpha, const Rational& delta) {
    if (!(alpha > Rational(0) && alpha < Rational(1, 2))) throw std::out_of_range("gamma: alpha must lie in (0, 1/2)");
    if (delta < Rational(0) || delta > Rational(1)) throw std::out_of_range("gamma: delta must lie in [0, 1]");
    return std::max(alpha, (Rational(1) - delta * (Rational(1) - alpha)) / (Rational(2) - delta));
}

// Second branch of alpha1; throws at and beyond the pole 2 + log(1 - alpha) = 0.
inline double alpha1_branch(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::out_of_range("alpha1: alpha must lie in (0, 1)");
    const double l = std::log1p(-alpha);
    if (!(2.0 + l > 0.0))
        throw std::domain_error("alpha1: 2 + log(1 - alpha) <= 0 at alpha = " + std::to_string(alpha));
    return (1.0 + (1.0 - alpha) * l) / (2.0 + l);
}

inline double alpha1_heuristic(double alpha) { return std::max(alpha, alpha1_branch(alpha)); }

inline double alpha1_quartic(double alpha) { return 0.25 * (2.0 - alpha + alpha * alpha + alpha * alpha * alpha); }

struct Alpha1Scan {
    double step = 0.0;
    double argmin_branch = 0.0;  // minimiser of the second branch
    double min_branch = 0.0;
    double argmin_alpha1 = 0.0;  // minimiser of max(alpha, branch)
    double min_alpha1 = 0.0;
    double argmin_quartic = 0.0;
    double min_quartic = 0.0;
};

// Grid scan over alpha = step, 2 step, ... < upper.
inline Alpha1Scan scan_alpha1(double step = 1e-4, double upper = 0.8) {
    if (!(step > 0.0) || !(upper > step) || upper >= 1.0 - std::exp(-2.0))
        throw std::invalid_argument("scan_alpha1: need 0 < step < upper < 1 - e^-2");
    Alpha1Scan s;
    s.step = step;
    s.min_branch = s.min_alpha1 = s.min_quartic = INFINITY;
    const auto count = static_cast<std::uint64_t>(std::floor(upper / step));
    for (std::uint64_t i = 1; i < count; ++i) {
        const double a = static_cast<double>(i) * step;
        const double b = alpha1_branch(a);
        const double m = std::max(a, b);
        const double q = alpha1_quartic(a);
        if (b < s.min_branch) { s.min_branch = b; s.argmin_branch = a; }
        if (m < s.min_alpha1) { s.min_alpha1 = m; s.argmin_alpha1 = a; }
        if (q < s.min_quartic) { s.min_quartic = q; s.argmin_quartic = a; }
    }
    return s;
}

struct ExponentReport {
    double lambda = 0.0;
    double eps_prime = 0.0;
    double alpha = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    std::optional<double> alpha1;
};

// lambda -> alpha = (1 - lambda)/2, delta(lambda), gamma(alpha, delta), and
// alpha1 at the same alpha.
inline ExponentReport exponent_report(double lambda, double eps_prime = 0.0) {
    ExponentReport r;
    r.lambda = lambda;
    r.eps_prime = eps_prime;
    r.alpha = alpha_of_lambda(lambda);
    r.delta = delta_of_lambda(lambda, eps_prime);
    r.gamma = gamma_theorem4(r.alpha, std::max(0.0, r.delta));
    r.alpha1 = alpha1_heuristic(r.alpha);
    return r;
}

} // namespace grimm
