#include "ntomo/orthopoly.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ntomo {
namespace {

void check_jacobi_args(int n, JacobiParams p, double t) {
    if (n < 0) throw std::domain_error("jacobi: negative degree");
    if (!(p.alpha > -1.0) || !(p.beta > -1.0))
        throw std::domain_error("jacobi: parameters must be > -1");
    if (!(t >= -1.0 && t <= 1.0))
        throw std::domain_error("jacobi: argument outside [-1,1]: " + std::to_string(t));
}

}  // namespace

void jacobi_eval_sequence(JacobiParams params, double t, std::span<double> out) {
    if (out.empty()) return;
    check_jacobi_args(static_cast<int>(out.size()) - 1, params, t);
    const double a = params.alpha;
    const double b = params.beta;
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = (a + 1.0) + (a + b + 2.0) * (t - 1.0) / 2.0;
    for (std::size_t n = 2; n < out.size(); ++n) {
        const double dn = static_cast<double>(n);
        const double c0 = 2.0 * dn * (dn + a + b) * (2.0 * dn + a + b - 2.0);
        const double c1 = 2.0 * dn + a + b - 1.0;
        const double c2 = (2.0 * dn + a + b) * (2.0 * dn + a + b - 2.0);
        const double c3 = a * a - b * b;
        const double c4 = 2.0 * (dn + a - 1.0) * (dn + b - 1.0) * (2.0 * dn + a + b);
        out[n] = (c1 * (c2 * t + c3) * out[n - 1] - c4 * out[n - 2]) / c0;
    }
}

double jacobi_eval(int n, JacobiParams params, double t) {
    check_jacobi_args(n, params, t);
    double prev = 1.0;  // P_0
    if (n == 0) return prev;
    const double a = params.alpha;
    const double b = params.beta;
    double cur = (a + 1.0) + (a + b + 2.0) * (t - 1.0) / 2.0;  // P_1
    for (int m = 2; m <= n; ++m) {
        const double dm = static_cast<double>(m);
        const double c0 = 2.0 * dm * (dm + a + b) * (2.0 * dm + a + b - 2.0);
        const double c1 = 2.0 * dm + a + b - 1.0;
        const double c2 = (2.0 * dm + a + b) * (2.0 * dm + a + b - 2.0);
        const double c3 = a * a - b * b;
        const double c4 = 2.0 * (dm + a - 1.0) * (dm + b - 1.0) * (2.0 * dm + a + b);
        const double next = (c1 * (c2 * t + c3) * cur - c4 * prev) / c0;
        prev = cur;
        cur = next;
    }
    return cur;
}

double jacobi_norm(int n, JacobiParams params) {
    check_jacobi_args(n, params, 0.0);
    const double a = params.alpha;
    const double b = params.beta;
    const double dn = static_cast<double>(n);
    const double log_h = (a + b + 1.0) * std::log(2.0) - std::log(2.0 * dn + a + b + 1.0) +
                         std::lgamma(dn + a + 1.0) + std::lgamma(dn + b + 1.0) -
                         std::lgamma(dn + 1.0) - std::lgamma(dn + a + b + 1.0);
    return std::exp(log_h);
}

double jacobi_derivative(int n, JacobiParams params, double t) {
    check_jacobi_args(n, params, t);
    if (n == 0) return 0.0;
    const JacobiParams shifted{params.alpha + 1.0, params.beta + 1.0};
    return 0.5 * (static_cast<double>(n) + params.alpha + params.beta + 1.0) *
           jacobi_eval(n - 1, shifted, t);
}

double gegenbauer_eval(int n, GegenbauerParam param, double t) {
    if (n < 0) throw std::domain_error("gegenbauer: negative degree");
    if (!(param.lambda > -0.5))
        throw std::domain_error("gegenbauer: lambda must be > -1/2");
    if (!(t >= -1.0 && t <= 1.0))
        throw std::domain_error("gegenbauer: argument outside [-1,1]");
    const double lam = param.lambda;
    double prev = 1.0;  // C_0
    if (n == 0) return prev;
    double cur = 2.0 * lam * t;  // C_1
    for (int m = 2; m <= n; ++m) {
        const double dm = static_cast<double>(m);
        const double next =
            (2.0 * (dm + lam - 1.0) * t * cur - (dm + 2.0 * lam - 2.0) * prev) / dm;
        prev = cur;
        cur = next;
    }
    return cur;
}

double gegenbauer_norm(int n, GegenbauerParam param) {
    if (n < 0) throw std::domain_error("gegenbauer: negative degree");
    if (!(param.lambda > -0.5) || param.lambda == 0.0)
        throw std::domain_error("gegenbauer: lambda must be > -1/2 and nonzero");
    const double lam = param.lambda;
    const double dn = static_cast<double>(n);
    const double log_h = (1.0 - 2.0 * lam) * std::log(2.0) + std::log(std::numbers::pi) -
                         2.0 * std::lgamma(lam) + std::lgamma(dn + 2.0 * lam) -
                         std::log(dn + lam) - std::lgamma(dn + 1.0);
    return std::exp(log_h);
}

}  // namespace ntomo
