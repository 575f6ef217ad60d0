#pragma once

#include <span>

namespace ntomo {

// Parameters of the Jacobi weight w(t) = (1-t)^alpha (1+t)^beta on [-1,1].
struct JacobiParams {
    double alpha;
    double beta;
};

// Parameter of the Gegenbauer weight (1-t^2)^(lambda-1/2) on [-1,1].
struct GegenbauerParam {
    double lambda;
};

// P_n^{(alpha,beta)}(t), normalized so that P_n(1) = binom(n+alpha, n).
// Forward three-term recurrence in n.
double jacobi_eval(int n, JacobiParams params, double t);

// Fills out[j] = P_j^{(alpha,beta)}(t) for j = 0..out.size()-1 in one
// recurrence sweep.
void jacobi_eval_sequence(JacobiParams params, double t, std::span<double> out);

// h_n^{(alpha,beta)} = int P_n^2 w dt.
double jacobi_norm(int n, JacobiParams params);

// Derivative d/dt P_n^{(alpha,beta)}(t).
double jacobi_derivative(int n, JacobiParams params, double t);

// C_n^lambda(t), normalized so that C_n^lambda(1) = binom(n+2*lambda-1, n).
double gegenbauer_eval(int n, GegenbauerParam param, double t);

// h_n^{(lambda)} = int C_n^2 (1-t^2)^(lambda-1/2) dt.
double gegenbauer_norm(int n, GegenbauerParam param);

}  // namespace ntomo
