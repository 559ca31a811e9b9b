#include "hlmf/legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "hlmf/errors.hpp"

namespace hlmf {
namespace {

using ld = long double;

// P_n and P_n' at t
void legendre_pair(std::size_t n, ld t, ld& p, ld& dp) {
    ld p0 = 1, p1 = t;
    if (n == 0) {
        p = 1;
        dp = 0;
        return;
    }
    for (std::size_t k = 1; k < n; ++k) {
        ld p2 = ((2 * k + 1) * t * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (t * p1 - p0) / (t * t - 1);
}

Rule make_gauss(std::size_t n) {
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ld t = -std::cos(std::numbers::pi_v<ld> * (i + 0.75L) / (n + 0.5L));
        ld p = 0, dp = 1;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(n, t, p, dp);
            ld dt = p / dp;
            t -= dt;
            if (std::fabs(dt) < 1e-19L) break;
        }
        legendre_pair(n, t, p, dp);
        r.x[i] = static_cast<double>(t);
        r.w[i] = static_cast<double>(2 / ((1 - t * t) * dp * dp));
    }
    return r;
}

// Left Radau interior nodes are the roots of P_{n-1} + P_n other than -1;
// the right rule is its mirror image.
Rule make_radau_right(std::size_t n) {
    Rule left;
    left.x.resize(n);
    left.w.resize(n);
    left.x[0] = -1;
    left.w[0] = 2.0 / (double(n) * n);
    for (std::size_t k = 1; k < n; ++k) {
        ld t = -std::cos(2 * std::numbers::pi_v<ld> * k / (2 * n - 1));
        for (int it = 0; it < 100; ++it) {
            ld pa, da, pb, db;
            legendre_pair(n - 1, t, pa, da);
            legendre_pair(n, t, pb, db);
            ld dt = (pa + pb) / (da + db);
            t -= dt;
            if (std::fabs(dt) < 1e-19L) break;
        }
        ld pa, da;
        legendre_pair(n - 1, t, pa, da);
        left.x[k] = static_cast<double>(t);
        left.w[k] = static_cast<double>((1 - t) / (ld(n) * n * pa * pa));
    }
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        r.x[k] = -left.x[n - 1 - k];
        r.w[k] = left.w[n - 1 - k];
    }
    return r;
}

template <class Make>
const Rule& cached(std::map<std::size_t, Rule>& cache, std::mutex& m, std::size_t n, Make make) {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

}  // namespace

const Rule& gauss_legendre(std::size_t n) {
    require(n >= 1, "gauss_legendre: n >= 1");
    static std::map<std::size_t, Rule> cache;
    static std::mutex m;
    return cached(cache, m, n, make_gauss);
}

const Rule& radau_right(std::size_t n) {
    require(n >= 2, "radau_right: n >= 2");
    static std::map<std::size_t, Rule> cache;
    static std::mutex m;
    return cached(cache, m, n, make_radau_right);
}

void legendre_values(double t, std::size_t K, double* P) {
    if (K == 0) return;
    P[0] = 1.0;
    if (K > 1) P[1] = t;
    for (std::size_t k = 1; k + 1 < K; ++k) P[k + 1] = ((2 * k + 1) * t * P[k] - k * P[k - 1]) / (k + 1);
}

void legendre_log_moments(double tau, std::size_t K, double* M) {
    if (K == 0) return;
    auto xlogx = [](double a) { return a == 0.0 ? 0.0 : a * std::log(std::fabs(a)); };
    M[0] = xlogx(1 + tau) + xlogx(1 - tau) - 2.0;
    if (K == 1) return;
    // Q_n = P_n L/2 - W_{n-1}, W obeying the Legendre recurrence with
    // W_{-1} = 0, W_0 = 1; the log term is absent at tau = +-1.
    std::vector<double> P(K + 1), W(K + 2);
    legendre_values(tau, K + 1, P.data());
    W[0] = 0.0;  // W_{-1}
    W[1] = 1.0;  // W_0
    for (std::size_t n = 1; n + 1 < K + 1; ++n) W[n + 1] = ((2 * n + 1) * tau * W[n] - n * W[n - 1]) / (n + 1);
    const bool edge = std::fabs(tau) == 1.0;
    const double L = edge ? 0.0 : std::log(std::fabs((1 + tau) / (1 - tau)));
    for (std::size_t k = 1; k < K; ++k) {
        double dP = P[k + 1] - P[k - 1];
        double q = (edge ? 0.0 : 0.5 * dP * L) - (W[k + 1] - W[k - 1]);
        M[k] = 2.0 / (2.0 * k + 1.0) * q;
    }
}

}  // namespace hlmf
