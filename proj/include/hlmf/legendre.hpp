#pragma once
// Reference-interval rules and Legendre machinery on [-1, 1].

#include <cstddef>
#include <vector>

namespace hlmf {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

// Cached; nodes ascending.
const Rule& gauss_legendre(std::size_t n);
// Radau rule with the node +1 included; nodes ascending.
const Rule& radau_right(std::size_t n);

// P_0(t) .. P_{K-1}(t)
void legendre_values(double t, std::size_t K, double* P);

// M_k(tau) = int_{-1}^{1} log|tau - t| P_k(t) dt for k < K, closed form via
// Legendre functions of the second kind. Stable for |tau| <= 1.5.
void legendre_log_moments(double tau, std::size_t K, double* M);

}  // namespace hlmf
