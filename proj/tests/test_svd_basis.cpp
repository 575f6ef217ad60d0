#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "ntomo/cubature.hpp"
#include "ntomo/svd_basis.hpp"

using namespace ntomo;

TEST_CASE("index enumeration") {
    CHECK(index_count(8) == 36);
    CHECK(enumerate_indices(8).size() == 36);
    CHECK(index_count(0) == 0);

    // lexicographic in (k, l, i) and stable under extension
    const auto small = enumerate_indices(5);
    const auto big = enumerate_indices(9);
    REQUIRE(big.size() >= small.size());
    for (std::size_t q = 0; q < small.size(); ++q) CHECK(big[q] == small[q]);
    for (std::size_t q = 0; q < big.size(); ++q) CHECK(flat_index(big[q]) == q);

    // each degree block carries k+1 members
    for (int k = 0; k < 9; ++k) {
        std::size_t members = 0;
        for (const SvdIndex idx : big)
            if (idx.k == k) ++members;
        CHECK(members == static_cast<std::size_t>(k + 1));
    }
}

TEST_CASE("index validity rules") {
    CHECK(is_valid_index({3, 1, 2}));
    CHECK(is_valid_index({0, 0, 1}));
    CHECK(!is_valid_index({3, 2, 1}));   // parity
    CHECK(!is_valid_index({2, 0, 2}));   // sine branch at l = 0
    CHECK(!is_valid_index({1, 3, 1}));   // l > k
    CHECK(!is_valid_index({2, 2, 3}));   // bad branch
    CHECK(!is_valid_index({-1, 1, 1}));
    CHECK_THROWS_AS(require_valid_index({3, 2, 1}), std::domain_error);
    CHECK_THROWS_AS(flat_index({2, 0, 2}), std::domain_error);
}

TEST_CASE("lowest basis functions have the expected constants") {
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    CHECK(eval_f({0, 0, 1}, {0.3, 0.2}) == doctest::Approx(inv_sqrt_pi).epsilon(1e-14));
    CHECK(eval_f({0, 0, 1}, {0.0, 0.0}) == doctest::Approx(inv_sqrt_pi).epsilon(1e-14));
    CHECK(eval_g({0, 0, 1}, 0.0, 0.0) ==
          doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
    CHECK(eigenvalue(0) == doctest::Approx(2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-15));
    CHECK(eigenvalue(3) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("object-side basis is orthonormal on the disk") {
    const int k_max = 6;
    const auto indices = enumerate_indices(k_max);
    const DiskCubature cub = disk_cubature(2 * k_max);
    const BasisEvaluator ev(k_max);
    std::vector<double> row(ev.count());
    std::vector<double> gram(indices.size() * indices.size(), 0.0);
    for (std::size_t q = 0; q < cub.nodes.size(); ++q) {
        ev.eval_point(cub.nodes[q], row);
        for (std::size_t a = 0; a < indices.size(); ++a)
            for (std::size_t b = a; b < indices.size(); ++b)
                gram[a * indices.size() + b] += cub.weights[q] * row[a] * row[b];
    }
    for (std::size_t a = 0; a < indices.size(); ++a)
        for (std::size_t b = a; b < indices.size(); ++b) {
            const double want = (a == b) ? 1.0 : 0.0;
            CHECK(gram[a * indices.size() + b] ==
                  doctest::Approx(want).epsilon(1e-12).scale(1.0));
        }
}

TEST_CASE("sinogram-side basis is normalized for its measure") {
    // angular average times a Chebyshev-Gauss rule in the offset
    const int n_s = 64;
    const int n_theta = 32;
    for (const SvdIndex idx : {SvdIndex{0, 0, 1}, SvdIndex{3, 1, 2}, SvdIndex{5, 5, 1},
                               SvdIndex{4, 2, 1}}) {
        double acc = 0.0;
        for (int is = 0; is < n_s; ++is) {
            const double s = std::cos((2.0 * is + 1.0) * std::numbers::pi / (2.0 * n_s));
            for (int it = 0; it < n_theta; ++it) {
                const double theta = 2.0 * std::numbers::pi * it / n_theta;
                const double g = eval_g(idx, theta, s);
                acc += g * g;
            }
        }
        acc *= (std::numbers::pi / n_s) * (2.0 * std::numbers::pi / n_theta);
        CHECK(acc == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("chord integrals intertwine the two bases") {
    // integral of f_{k,l,i} along the chord at (theta, s) equals
    // eigenvalue(k) g_{k,l,i}(theta, s); the integrand is a polynomial of
    // degree <= k in the chord parameter, so a 10-point rule is exact.
    const QuadRule gl = gauss_legendre(10);
    for (const SvdIndex idx : {SvdIndex{0, 0, 1}, SvdIndex{1, 1, 1}, SvdIndex{2, 0, 1},
                               SvdIndex{3, 3, 2}, SvdIndex{4, 2, 2}}) {
        for (const auto& [theta, s] : {std::pair{0.3, 0.25}, std::pair{2.0, -0.6},
                                       std::pair{4.4, 0.0}, std::pair{1.2, 0.85}}) {
            const double ex = std::cos(theta);
            const double ey = std::sin(theta);
            const double half = std::sqrt(1.0 - s * s);
            double acc = 0.0;
            for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                const double t = half * gl.nodes[q];
                const DiskPoint p{s * ex - t * ey, s * ey + t * ex};
                acc += gl.weights[q] * eval_f(idx, p);
            }
            acc *= half;
            CHECK(acc == doctest::Approx(eigenvalue(idx.k) * eval_g(idx, theta, s))
                             .epsilon(1e-9)
                             .scale(1.0));
        }
    }
}

TEST_CASE("batched evaluation matches pointwise evaluation") {
    const int k_max = 9;
    const BasisEvaluator ev(k_max);
    std::vector<double> row(ev.count());
    const auto indices = enumerate_indices(k_max);
    for (const DiskPoint p : {DiskPoint{0.0, 0.0}, DiskPoint{0.9, -0.1},
                              DiskPoint{-0.47, 0.52}, DiskPoint{0.0, -0.999},
                              DiskPoint{1.0, 0.0}}) {
        ev.eval_point(p, row);
        for (std::size_t q = 0; q < indices.size(); ++q)
            CHECK(row[q] == doctest::Approx(eval_f(indices[q], p)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("points outside the disk are rejected") {
    CHECK_THROWS_AS(eval_f({2, 0, 1}, {0.8, 0.7}), std::domain_error);
    CHECK_THROWS_AS(eval_g({2, 0, 1}, 0.0, 1.01), std::domain_error);
    BasisEvaluator ev(4);
    std::vector<double> row(ev.count());
    CHECK_THROWS_AS(ev.eval_point({1.1, 0.0}, row), std::domain_error);
    std::vector<double> short_row(3);
    CHECK_THROWS_AS(ev.eval_point({0.0, 0.0}, short_row), std::invalid_argument);
}

TEST_CASE("coefficient csv round trip") {
    SvdCoeffs alpha = SvdCoeffs::zeros(5);
    for (std::size_t q = 0; q < alpha.values.size(); ++q)
        alpha.values[q] = std::sin(1.0 + static_cast<double>(q)) * 1e-3;
    alpha.at({3, 1, 2}) = -0.25;

    std::ostringstream out;
    write_csv(alpha, out);
    const std::string text = out.str();
    CHECK(text.rfind("k,l,i,value\n", 0) == 0);
    CHECK(text.find("0,0,1,") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);

    std::istringstream in(text);
    const SvdCoeffs back = read_coeffs_csv(in);
    REQUIRE(back.k_max == alpha.k_max);
    for (std::size_t q = 0; q < alpha.values.size(); ++q)
        CHECK(back.values[q] == alpha.values[q]);  // exact: 17 digits round-trip
}

TEST_CASE("coefficient container bounds") {
    SvdCoeffs alpha = SvdCoeffs::zeros(4);
    CHECK_THROWS_AS(alpha.at({5, 1, 1}), std::out_of_range);
    CHECK_THROWS_AS(alpha.at({3, 2, 1}), std::domain_error);
}
