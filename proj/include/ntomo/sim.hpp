#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ntomo/disk.hpp"
#include "ntomo/svd_basis.hpp"

namespace ntomo {

// Additive ellipse component of a phantom; a and b are the semi-axes along
// the directions rotated by phi from the coordinate axes.
struct Ellipse {
    double cx = 0.0;
    double cy = 0.0;
    double a = 0.0;
    double b = 0.0;
    double phi = 0.0;
    double intensity = 0.0;
};

// A density supported on the closed unit disk.  Ellipse-built phantoms also
// carry exact line integrals.
class Phantom {
  public:
    static Phantom shepp_logan();
    static Phantom disk();         // indicator of the whole unit disk
    static Phantom smooth_bump();  // C-infinity bump, pointwise only
    static Phantom from_ellipses(std::string name, std::vector<Ellipse> parts);
    static Phantom from_function(std::string name, std::function<double(DiskPoint)> fn);
    // Resolves "shepp_logan" | "disk" | "smooth_bump".
    static Phantom by_name(const std::string& name);
    static const std::vector<std::string>& known_names();

    const std::string& name() const { return name_; }
    double density(DiskPoint p) const;
    bool has_ellipses() const { return !parts_.empty(); }
    const std::vector<Ellipse>& ellipses() const;

  private:
    Phantom() = default;

    std::string name_;
    std::vector<Ellipse> parts_;
    std::function<double(DiskPoint)> fn_;
};

// Exact line integral along the chord with unit normal (cos theta, sin theta)
// at signed offset s.  Requires an ellipse-built phantom.
double radon_analytic(const Phantom& phantom, double theta, double s);

// Basis coefficients alpha_{k,l,i} for k < k_max by disk cubature of the
// given polynomial exactness degree.
SvdCoeffs true_coeffs(const Phantom& phantom, int k_max, int quality_degree);
SvdCoeffs true_coeffs(const Phantom& phantom, int k_max);
int default_quality_degree(int k_max);

// Exact coefficients for ellipse-built phantoms: each basis function is a
// polynomial, so mapping the disk rule affinely onto every ellipse integrates
// the indicator products without discontinuity error.
SvdCoeffs exact_ellipse_coeffs(const Phantom& phantom, int k_max);

struct Observation {
    SvdCoeffs alpha_hat;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

// White-noise observation of every coefficient with k < alpha.k_max:
//   alpha_hat = alpha + (epsilon / lambda_k) z,
// z standard normal from a counter-based stream keyed by the flat coefficient
// position, so the draw for an index never depends on k_max or traversal
// order.  epsilon must lie in (0,1).
Observation observe(const SvdCoeffs& alpha, double epsilon, std::uint64_t seed);

// Noise-free observation record for pipeline identity checks in tests.
Observation noiseless_observation(const SvdCoeffs& alpha);

// Keep the first k_max degree blocks.
SvdCoeffs truncate_coeffs(const SvdCoeffs& alpha, int k_max);

namespace rng {

// SplitMix64-style avalanche of (seed, counter).
std::uint64_t mix(std::uint64_t seed, std::uint64_t counter);
// Uniform on (0,1), strictly inside, from the 52 high bits.
double uniform01(std::uint64_t bits);
// Inverse standard normal CDF (Wichura's high-precision rational fits).
double normal_quantile(double p);
double gaussian(std::uint64_t seed, std::uint64_t counter);

}  // namespace rng

}  // namespace ntomo
