#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "ntomo/cubature.hpp"
#include "ntomo/svd_basis.hpp"

namespace ntomo {

// Smooth cut-off: 1 on [0,1/2], 0 on [1,inf), exp-based C-infinity bridge in
// between, non-increasing.
double filter_a(double t);

// Band filter b(t) = a(t/2) - a(t), supported on [1/2,2]; its dyadic dilates
// partition unity on [1,inf).
double filter_b(double t);

// Frame coefficients: one scalar for the coarse (constant-function) level and
// one value per grid node for each band level j = 0..level_count()-1.
struct NeedletCoeffs {
    double scaling = 0.0;
    std::vector<std::vector<double>> levels;

    int level_count() const { return static_cast<int>(levels.size()); }
};

// Per-(level, node) nonnegative table, e.g. noise standard deviations or
// sup-norm bounds.
using LevelTable = std::vector<std::vector<double>>;

// Band-limited frame on the disk with J band levels.  Level j carries the
// degrees k in [ceil(2^(j-1)), 2^(j+1)) and a positive cubature grid exact to
// degree 2^(j+2), so analysis followed by synthesis is the identity on
// coefficients of degree < 2^(J-1) and the frame is tight up to the top band.
class Frame {
  public:
    explicit Frame(int levels, double angular_phase = 0.0,
                   std::function<double(double)> cutoff = nullptr);

    int levels() const { return levels_; }
    // Degree budget the frame spans: analysis input must reach this k_max.
    int coeff_k_max() const { return 1 << levels_; }
    const DiskCubature& grid(int j) const;
    int band_begin(int j) const;
    int band_end(int j) const;
    double band_weight(int j, int k) const;  // b(k 2^-j) under this cutoff

    NeedletCoeffs analysis(const SvdCoeffs& alpha) const;
    SvdCoeffs synthesis(const NeedletCoeffs& beta, int k_max) const;

    // Noise standard deviation sigma_{j,node} of an analysis coefficient when
    // the observed basis coefficients carry unit noise level.
    LevelTable noise_profile() const;

    // Upper bounds for the sup norm of each needlet, from a local patch scan
    // with a fixed inflation factor.
    LevelTable sup_norms() const;

    // psi_{j,node}(p)
    double needlet_eval(int j, std::size_t node, DiskPoint p) const;

    // The analysis functional for one (j, node) pair as a dense vector over
    // enumerate_indices(coeff_k_max()): beta = <row, alpha.values>.
    std::vector<double> analysis_row(int j, std::size_t node) const;

    double analysis_single(const SvdCoeffs& alpha, int j, std::size_t node) const;

  private:
    void check_level(int j) const;
    // Weighted band slice of basis values at a grid node: contiguous flat
    // positions [band_lo_flat(j), band_hi_flat(j)) scaled by sqrt(b).
    std::size_t band_lo_flat(int j) const;
    std::size_t band_hi_flat(int j) const;
    void weighted_band_at(int j, DiskPoint xi, std::vector<double>& scratch,
                          std::vector<double>& out) const;

    int levels_;
    std::function<double(double)> cutoff_;
    std::vector<DiskCubature> grids_;
    std::vector<std::vector<double>> sqrt_b_;  // sqrt_b_[j][k - band_begin(j)]
    std::vector<BasisEvaluator> evals_;        // per level, up to band_end(j)
};

// CSV with header "j,node_index,xi_x,xi_y,value"; the coarse level is the
// first row with j = -1 and node 0 at the origin.
void write_csv(const NeedletCoeffs& beta, const Frame& frame, std::ostream& out);

}  // namespace ntomo
