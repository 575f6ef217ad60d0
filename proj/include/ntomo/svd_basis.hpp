#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ntomo/disk.hpp"

namespace ntomo {

// Index of one singular pair: polynomial degree k, angular frequency l with
// l <= k and k-l even, and trigonometric branch i (1 = cosine, 2 = sine).
// l = 0 carries the cosine branch only.
struct SvdIndex {
    int k = 0;
    int l = 0;
    int i = 1;

    bool operator==(const SvdIndex&) const = default;
};

bool is_valid_index(SvdIndex idx);
void require_valid_index(SvdIndex idx);

// All valid indices with k < k_max, ordered by (k, l, i).
std::vector<SvdIndex> enumerate_indices(int k_max);

// Number of valid indices with k < k_max: k_max (k_max + 1) / 2.
std::size_t index_count(int k_max);

// Position of idx in the (k, l, i) enumeration.
std::size_t flat_index(SvdIndex idx);

// Angular factor Y_{l,i}(theta): normalized cosine/sine of l*theta.
double angular_factor(int l, int i, double theta);

// Object-domain singular function f_{k,l,i}, orthonormal on the unit disk.
double eval_f(SvdIndex idx, DiskPoint p);

// Sinogram-domain singular function g_{k,l,i}(theta, s), orthonormal for the
// measure dtheta ds / sqrt(1-s^2) on [0,2pi) x [-1,1].
double eval_g(SvdIndex idx, double theta, double s);

// Singular value of the fan-beam transform at degree k: 2 sqrt(pi/(k+1)).
double eigenvalue(int k);

// Dense coefficient vector over enumerate_indices(k_max).
struct SvdCoeffs {
    int k_max = 0;
    std::vector<double> values;

    static SvdCoeffs zeros(int k_max);
    double& at(SvdIndex idx);
    double at(SvdIndex idx) const;
    std::size_t size() const { return values.size(); }
};

// CSV with header "k,l,i,value", one row per index in enumeration order,
// values with 17 significant digits.
void write_csv(const SvdCoeffs& coeffs, std::ostream& out);
SvdCoeffs read_coeffs_csv(std::istream& in);

// Evaluates every f_{k,l,i}, k < k_max, at one point in O(k_max^2) flops via
// per-frequency Jacobi recurrences and angle addition.
class BasisEvaluator {
  public:
    explicit BasisEvaluator(int k_max);

    int k_max() const { return k_max_; }
    std::size_t count() const { return count_; }

    // out.size() must equal count(); out[flat_index(idx)] = f_idx(p).
    void eval_point(DiskPoint p, std::span<double> out) const;

  private:
    int k_max_;
    std::size_t count_;
    // For frequency l, positions_[l][j] is the flat position of
    // (k = l + 2j, l, i = 1); the sine branch follows at +1.
    std::vector<std::vector<std::size_t>> positions_;
};

}  // namespace ntomo
