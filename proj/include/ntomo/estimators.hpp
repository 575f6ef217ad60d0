#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ntomo/needlet.hpp"
#include "ntomo/sim.hpp"

namespace ntomo {

// Keep-or-kill nonlinearity: x survives iff |x| >= threshold.
double hard_threshold(double x, double threshold);

// Effective noise scale c_eps = eps * sqrt(ln(1/eps)).
double noise_scale(double epsilon);

enum class LevelRule {
    standard,  // largest J with 2^(1.5 J) <= 1/c_eps
    sup_norm,  // floor(log2(1/c_eps) / 2)
};
int max_level(double epsilon, LevelRule rule);

// Threshold configuration shared by the nonlinear estimators.  kappa = 0
// makes every threshold vanish, recovering the corresponding linear estimate.
struct ThresholdPolicy {
    double kappa = 3.0;
    double epsilon = 0.0;
    // Optional extra 2^(j/2) severity per needlet level, off by default.
    bool resolution_penalty = false;

    void validate() const;
};

// Projection estimator: observed coefficients kept for k < k_cut.
SvdCoeffs linear_svd(const Observation& obs, int k_cut);

// Coefficientwise hard thresholding at T_k = (kappa / lambda_k) c_eps.
SvdCoeffs threshold_svd(const Observation& obs, const ThresholdPolicy& policy, int k_cut);

// Needlet-domain hard thresholding at T_{j,node} = kappa sigma_{j,node} c_eps;
// the coarse level always survives.  sigma is frame.noise_profile().
NeedletCoeffs threshold_needlet(const Observation& obs, const ThresholdPolicy& policy,
                                const Frame& frame, const LevelTable& sigma);

// Sup-norm rule: a coefficient survives iff |beta| * sup_norm >= kappa 2^(2j) c_eps.
NeedletCoeffs threshold_needlet_sup(const Observation& obs, const ThresholdPolicy& policy,
                                    const Frame& frame, const LevelTable& sup_norms);

// Convenience forms building the frame (and tables) internally.
NeedletCoeffs threshold_needlet(const Observation& obs, const ThresholdPolicy& policy,
                                int levels);
NeedletCoeffs threshold_needlet_sup(const Observation& obs, const ThresholdPolicy& policy,
                                    int levels);

// Square pixel grid over [-1,1]^2; row 0 is the top row, values outside the
// unit disk are zero and masked off.
struct PixelImage {
    int n = 0;
    std::vector<double> values;      // row-major, n*n
    std::vector<std::uint8_t> mask;  // 1 where the pixel center is in the disk

    static DiskPoint pixel_center(int n, int row, int col);
};

PixelImage rasterize(const std::function<double(DiskPoint)>& fn, int n);
PixelImage reconstruct(const SvdCoeffs& alpha, int n);
PixelImage average_images(std::span<const PixelImage> images);

}  // namespace ntomo
