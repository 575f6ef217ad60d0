#pragma once

#include <concepts>
#include <vector>

#include "ntomo/disk.hpp"

namespace ntomo {

// One-dimensional quadrature rule: sum_i weights[i] * fn(nodes[i]).
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// m-point Gauss rule for the weight r dr on [0,1]; exact on polynomials in r
// of degree <= 2m-1.  Nodes ascending.
QuadRule gauss_radial(int m);

// n-point Gauss-Legendre rule on [-1,1].  Nodes ascending.
QuadRule gauss_legendre(int n);

// Positive cubature on the unit disk for the Lebesgue measure dx.
struct DiskCubature {
    std::vector<DiskPoint> nodes;
    std::vector<double> weights;
    int exact_degree = 0;   // exact for bivariate polynomials up to this degree
    int angular_count = 0;  // tensor structure: angles x radii
    int radial_count = 0;
};

// Product rule: angular_count = degree+1 uniform angles (optionally rotated by
// phase in units of the angular step) times a Gauss radial rule, exact up to
// the requested total degree.
DiskCubature disk_cubature(int degree, double angular_phase = 0.0);

// Cubature used for the frame at scale j: exactness degree 2^(j+2), enough to
// integrate products of basis functions from neighbouring bands.
DiskCubature needlet_grid(int j, double angular_phase = 0.0);

[[noreturn]] void throw_nonfinite_integrand(DiskPoint where);

// Fixed summation order, so results are reproducible; throws on non-finite
// integrand values.
double integrate(const DiskCubature& cub, const std::invocable<DiskPoint> auto& fn) {
    double acc = 0.0;
    for (std::size_t q = 0; q < cub.nodes.size(); ++q) {
        const double v = fn(cub.nodes[q]);
        if (!std::isfinite(v)) throw_nonfinite_integrand(cub.nodes[q]);
        acc += cub.weights[q] * v;
    }
    return acc;
}

}  // namespace ntomo
