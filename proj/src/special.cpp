#include "slp/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "slp/errors.hpp"

namespace slp {

namespace {

constexpr int cutoff = 32;

// m-th derivative of f(k) = exp(a k) k^{-s}.
double derivative(int m, double a, double s, double k) {
    double total = 0.0;
    double binom = 1.0;
    double rising = 1.0;  // s (s+1) ... (s+j-1)
    for (int j = 0; j <= m; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        total += binom * std::pow(a, m - j) * sign * rising * std::pow(k, -s - j);
        binom = binom * (m - j) / (j + 1);
        rising *= s + j;
    }
    return total * std::exp(a * k);
}

// Sum over k >= cutoff without the tail integral.
double euler_maclaurin_corrections(double a, double s) {
    const double k = cutoff;
    return 0.5 * std::exp(a * k) * std::pow(k, -s) - derivative(1, a, s, k) / 12.0 +
           derivative(3, a, s, k) / 720.0 - derivative(5, a, s, k) / 30240.0;
}

// int_N^inf exp(a k) k^{-3/2} dk for a <= 0.
double tail_integral_32(double a) {
    const double n = cutoff;
    const double x = -a * n;
    return 2.0 * std::exp(-x) / std::sqrt(n) -
           2.0 * std::sqrt(std::numbers::pi * (-a)) * std::erfc(std::sqrt(x));
}

double tail_integral_52(double a) {
    const double n = cutoff;
    return (2.0 / 3.0) * (std::exp(a * n) * std::pow(n, -1.5) + a * tail_integral_32(a));
}

double head_sum(double z, double s) {
    double total = 0.0;
    double power = 1.0;
    for (int k = 1; k < cutoff; ++k) {
        power *= z;
        total += power * std::pow(static_cast<double>(k), -s);
    }
    return total;
}

void check_fugacity(double z) {
    if (!(z >= 0.0 && z <= 1.0))
        throw DomainError("Bose function fugacity must lie in [0, 1]");
}

} // namespace

double bose_g32(double z) {
    check_fugacity(z);
    if (z == 0.0)
        return 0.0;
    const double a = std::log(z);
    return head_sum(z, 1.5) + tail_integral_32(a) + euler_maclaurin_corrections(a, 1.5);
}

double bose_g52(double z) {
    check_fugacity(z);
    if (z == 0.0)
        return 0.0;
    const double a = std::log(z);
    return head_sum(z, 2.5) + tail_integral_52(a) + euler_maclaurin_corrections(a, 2.5);
}

} // namespace slp
