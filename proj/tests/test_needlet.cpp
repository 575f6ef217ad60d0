#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ntomo/cubature.hpp"
#include "ntomo/needlet.hpp"
#include "ntomo/sim.hpp"
#include "ntomo/svd_basis.hpp"

using namespace ntomo;

namespace {

SvdCoeffs random_coeffs(int k_max, std::uint64_t seed) {
    SvdCoeffs c = SvdCoeffs::zeros(k_max);
    for (std::size_t q = 0; q < c.values.size(); ++q)
        c.values[q] = rng::gaussian(seed, q);
    return c;
}

// ||psi_{j,xi}||_2 from orthonormality of the basis: omega * sum_k b_k sum_li f^2.
double needlet_l2(const Frame& fr, const BasisEvaluator& be,
                  const std::vector<SvdIndex>& idx, std::vector<double>& vals,
                  int j, std::size_t node) {
    const DiskCubature& g = fr.grid(j);
    be.eval_point(g.nodes[node], vals);
    double acc = 0.0;
    for (const SvdIndex& ix : idx) {
        if (ix.k < fr.band_begin(j)) continue;
        const double fv = vals[flat_index(ix)];
        acc += fr.band_weight(j, ix.k) * fv * fv;
    }
    return std::sqrt(g.weights[node] * acc);
}

double sum_sq(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
}

}  // namespace

TEST_CASE("cut-off filter plateau, support, and midpoint") {
    CHECK(filter_a(0.0) == 1.0);
    CHECK(filter_a(0.25) == 1.0);
    CHECK(filter_a(0.5) == 1.0);
    CHECK(filter_a(1.0) == 0.0);
    CHECK(filter_a(1.5) == 0.0);
    // the exp-based bridge is symmetric about t = 3/4
    CHECK(filter_a(0.75) == doctest::Approx(0.5).epsilon(1e-14));

    // non-increasing across the bridge, values inside [0,1]
    double prev = 1.0;
    for (int q = 0; q <= 100; ++q) {
        const double t = 0.5 + 0.5 * q / 100.0;
        const double v = filter_a(t);
        CHECK(v <= prev + 1e-15);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK_THROWS_AS(filter_a(-0.1), std::domain_error);
}

TEST_CASE("band filter values and dyadic partition of unity") {
    CHECK(filter_b(1.0) == 1.0);     // a(1/2) - a(1)
    CHECK(filter_b(0.4) == 0.0);     // both a-values on the plateau
    CHECK(filter_b(0.5) == 0.0);     // a(1/4) - a(1/2)
    CHECK(filter_b(2.0) == 0.0);     // both a-values vanish
    CHECK(filter_b(3.0) == 0.0);
    for (int q = 0; q <= 120; ++q) {
        const double t = 3.0 * q / 120.0;
        const double v = filter_b(t);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        if (t < 0.5 || t > 2.0) CHECK(v == 0.0);
    }

    double part = 0.0;
    for (int j = 0; j <= 8; ++j) part += filter_b(3.7 * std::pow(2.0, -j));
    CHECK(part == doctest::Approx(1.0).epsilon(1e-12));

    // log-spaced sweep of the telescoping identity on [1, 200]
    for (int q = 0; q <= 400; ++q) {
        const double t = std::pow(200.0, q / 400.0);
        double acc = 0.0;
        for (int j = 0; j < 12; ++j) acc += filter_b(t * std::pow(2.0, -j));
        CHECK(std::abs(acc - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(filter_b(-1.0), std::domain_error);
}

TEST_CASE("frame band layout and cached grids") {
    Frame fr(4);
    CHECK(fr.levels() == 4);
    CHECK(fr.coeff_k_max() == 16);
    CHECK(fr.band_begin(0) == 1);
    CHECK(fr.band_end(0) == 2);
    CHECK(fr.band_begin(1) == 1);
    CHECK(fr.band_end(1) == 4);
    CHECK(fr.band_begin(2) == 2);
    CHECK(fr.band_end(2) == 8);
    CHECK(fr.band_begin(3) == 4);
    CHECK(fr.band_end(3) == 16);

    CHECK(fr.band_weight(0, 1) == 1.0);    // b(1)
    CHECK(fr.band_weight(1, 2) == 1.0);    // b(1)
    CHECK(fr.band_weight(2, 2) == 0.0);    // b(1/2)
    CHECK(fr.band_weight(2, 3) == doctest::Approx(filter_b(0.75)).epsilon(1e-15));

    CHECK(fr.grid(0).nodes.size() == 15);
    CHECK(fr.grid(1).nodes.size() == 45);
    CHECK(fr.grid(2).nodes.size() == 153);
    for (int j = 0; j < 4; ++j) {
        CHECK(fr.grid(j).exact_degree == (1 << (j + 2)));
        const DiskCubature ref = needlet_grid(j);
        REQUIRE(fr.grid(j).nodes.size() == ref.nodes.size());
        CHECK(fr.grid(j).nodes[3].x == ref.nodes[3].x);
        CHECK(fr.grid(j).weights[3] == ref.weights[3]);
    }

    CHECK_THROWS_AS(fr.grid(4), std::out_of_range);
    CHECK_THROWS_AS(fr.grid(-1), std::out_of_range);
    CHECK_THROWS_AS(Frame(-1), std::domain_error);
    CHECK_THROWS_AS(Frame(17), std::domain_error);
    CHECK_THROWS_AS(fr.band_weight(0, -1), std::domain_error);
}

TEST_CASE("analysis of unit coefficient vectors") {
    Frame fr(2);

    SvdCoeffs e0 = SvdCoeffs::zeros(4);
    e0.at({0, 0, 1}) = 1.0;
    NeedletCoeffs b0 = fr.analysis(e0);
    CHECK(b0.scaling == 1.0);
    REQUIRE(b0.level_count() == 2);
    for (const auto& level : b0.levels)
        for (double v : level) CHECK(v == 0.0);

    // a degree-1 unit vector excites only the j=0 band: b(1)=1, b(1/2)=0
    SvdCoeffs e1 = SvdCoeffs::zeros(4);
    e1.at({1, 1, 1}) = 1.0;
    NeedletCoeffs b1 = fr.analysis(e1);
    CHECK(b1.scaling == 0.0);
    for (double v : b1.levels[1]) CHECK(v == 0.0);
    const DiskCubature& g0 = fr.grid(0);
    double largest = 0.0;
    for (std::size_t q = 0; q < g0.nodes.size(); ++q) {
        const double want = std::sqrt(g0.weights[q]) * eval_f({1, 1, 1}, g0.nodes[q]);
        CHECK(b1.levels[0][q] == doctest::Approx(want).epsilon(1e-14));
        largest = std::max(largest, std::abs(b1.levels[0][q]));
    }
    CHECK(largest > 0.1);

    SvdCoeffs shallow = SvdCoeffs::zeros(3);
    CHECK_THROWS_AS(fr.analysis(shallow), std::invalid_argument);
    SvdCoeffs torn = SvdCoeffs::zeros(4);
    torn.values.pop_back();
    CHECK_THROWS_AS(fr.analysis(torn), std::invalid_argument);
}

TEST_CASE("tight-frame Parseval and exact round trip") {
    Frame fr(4);

    // band-limited to half the budget: analysis/synthesis is the identity
    SvdCoeffs alpha = SvdCoeffs::zeros(16);
    for (std::size_t q = 0; q < index_count(8); ++q)
        alpha.values[q] = rng::gaussian(41, q);

    NeedletCoeffs beta = fr.analysis(alpha);
    double frame_energy = beta.scaling * beta.scaling;
    for (const auto& level : beta.levels) frame_energy += sum_sq(level);
    CHECK(frame_energy == doctest::Approx(sum_sq(alpha.values)).epsilon(1e-12));

    SvdCoeffs back = fr.synthesis(beta, 16);
    REQUIRE(back.values.size() == alpha.values.size());
    for (std::size_t q = 0; q < back.values.size(); ++q)
        CHECK(back.values[q] == doctest::Approx(alpha.values[q]).epsilon(1e-10));

    SvdCoeffs prefix = fr.synthesis(beta, 8);
    REQUIRE(prefix.values.size() == index_count(8));
    for (std::size_t q = 0; q < prefix.values.size(); ++q)
        CHECK(prefix.values[q] == doctest::Approx(alpha.values[q]).epsilon(1e-10));
}

TEST_CASE("top-octave coefficients come back tapered by the band filter") {
    Frame fr(4);
    SvdCoeffs alpha = random_coeffs(16, 99);
    SvdCoeffs back = fr.synthesis(fr.analysis(alpha), 16);
    for (const SvdIndex& ix : enumerate_indices(16)) {
        // sum_{j<4} b(k 2^-j) = 1 for k <= 8, = b(k/8) above
        const double c = ix.k <= 8 ? 1.0 : filter_b(ix.k / 8.0);
        const double want = c * alpha.at(ix);
        CHECK(back.at(ix) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("synthesis edge cases and input validation") {
    Frame fr(2);

    NeedletCoeffs zero;
    zero.scaling = 0.0;
    zero.levels = {std::vector<double>(15, 0.0), std::vector<double>(45, 0.0)};
    SvdCoeffs out = fr.synthesis(zero, 4);
    for (double v : out.values) CHECK(v == 0.0);

    // one unit coefficient at (j=0, node 3) expands to omega^(1/2) b(k)^(1/2) f(xi)
    NeedletCoeffs single = zero;
    single.levels[0][3] = 1.0;
    SvdCoeffs alpha = fr.synthesis(single, 4);
    const DiskPoint xi = fr.grid(0).nodes[3];
    const double root_w = std::sqrt(fr.grid(0).weights[3]);
    for (const SvdIndex& ix : enumerate_indices(4)) {
        const double want =
            ix.k == 1 ? root_w * eval_f(ix, xi) : 0.0;  // b(1)=1, other degrees off-band
        CHECK(alpha.at(ix) == doctest::Approx(want).epsilon(1e-14));
    }

    CHECK_THROWS_AS(fr.synthesis(zero, 0), std::invalid_argument);
    CHECK_THROWS_AS(fr.synthesis(zero, 5), std::invalid_argument);
    NeedletCoeffs torn = zero;
    torn.levels.pop_back();
    CHECK_THROWS_AS(fr.synthesis(torn, 4), std::invalid_argument);
    NeedletCoeffs bad = zero;
    bad.levels[1].pop_back();
    CHECK_THROWS_AS(fr.synthesis(bad, 4), std::invalid_argument);
}

TEST_CASE("needlets integrate to zero and obey the unit L2 bound") {
    Frame fr(5);

    // <psi, 1> = 0: the constant lives in degree 0 where b vanishes
    for (int j = 0; j <= 3; ++j) {
        const DiskCubature& g = fr.grid(j);
        for (std::size_t node : {std::size_t{0}, g.nodes.size() / 2, g.nodes.size() - 1}) {
            double mean = 0.0;
            for (std::size_t q = 0; q < g.nodes.size(); ++q)
                mean += g.weights[q] * fr.needlet_eval(j, node, g.nodes[q]);
            CHECK(std::abs(mean) < 1e-10);
        }
    }

    // spot-check the closed-form norm against direct cubature of psi^2
    {
        const int j = 2;
        const BasisEvaluator be(fr.band_end(j));
        const std::vector<SvdIndex> idx = enumerate_indices(fr.band_end(j));
        std::vector<double> vals(be.count());
        const DiskCubature& g = fr.grid(j);
        for (std::size_t node : {std::size_t{0}, std::size_t{40}, std::size_t{152}}) {
            double direct = 0.0;
            for (std::size_t q = 0; q < g.nodes.size(); ++q) {
                const double v = fr.needlet_eval(j, node, g.nodes[q]);
                direct += g.weights[q] * v * v;
            }
            const double closed = needlet_l2(fr, be, idx, vals, j, node);
            CHECK(std::sqrt(direct) == doctest::Approx(closed).epsilon(1e-10));
        }
    }

    // every needlet up to j=4 has L2 norm in (0, 1]
    for (int j = 0; j <= 4; ++j) {
        const BasisEvaluator be(fr.band_end(j));
        const std::vector<SvdIndex> idx = enumerate_indices(fr.band_end(j));
        std::vector<double> vals(be.count());
        double lo = 1e300, hi = 0.0;
        for (std::size_t node = 0; node < fr.grid(j).nodes.size(); ++node) {
            const double n2 = needlet_l2(fr, be, idx, vals, j, node);
            lo = std::min(lo, n2);
            hi = std::max(hi, n2);
        }
        CHECK(hi <= 1.0 + 1e-9);
        CHECK(lo > 0.0);
    }
}

TEST_CASE("scaled Lp norms stay inside the measured windows") {
    // Grid-estimated ||psi||_p scaled by 2^(2j(1/2-1/p)) over interior nodes
    // (|xi| <= 1/sqrt2), sampled one node per ring.  Windows frozen from the
    // implementation; the lower edges sink with j because the innermost ring
    // of the product rule carries anomalously small weight.
    const double interior = 1.0 / std::sqrt(2.0);
    for (int j = 2; j <= 4; ++j) {
        Frame fr(j + 1);
        const DiskCubature& g = fr.grid(j);
        const int stride = (j == 2) ? 1 : (j == 3) ? 2 : 4;
        const DiskCubature fine = disk_cubature(1 << (j + 3));
        const double s1 = std::pow(2.0, j);
        const double si = std::pow(2.0, -j);
        int used = 0;
        for (int a = 0; a < g.radial_count; a += stride) {
            const std::size_t node = static_cast<std::size_t>(a);
            const DiskPoint xi = g.nodes[node];
            if (xi.radius() > interior) continue;
            ++used;
            double acc1 = 0.0, acc2 = 0.0, mx = 0.0;
            for (std::size_t q = 0; q < fine.nodes.size(); ++q) {
                const double v = fr.needlet_eval(j, node, fine.nodes[q]);
                acc1 += fine.weights[q] * std::abs(v);
                acc2 += fine.weights[q] * v * v;
                mx = std::max(mx, std::abs(v));
            }
            const double patch = 8.0 * si;
            for (int u = 0; u < 41; ++u) {
                for (int w = 0; w < 41; ++w) {
                    const double dr = patch * u / 40.0;
                    const double ph = 2.0 * std::numbers::pi * w / 41.0;
                    const DiskPoint p{xi.x + dr * std::cos(ph), xi.y + dr * std::sin(ph)};
                    if (p.x * p.x + p.y * p.y > 1.0) continue;
                    mx = std::max(mx, std::abs(fr.needlet_eval(j, node, p)));
                }
            }
            CHECK(acc1 * s1 > 0.05);
            CHECK(acc1 * s1 < 3.5);
            CHECK(std::sqrt(acc2) > 0.005);
            CHECK(std::sqrt(acc2) < 0.5);
            CHECK(mx * si > 0.0025);
            CHECK(mx * si < 0.33);
        }
        CHECK(used >= 5);
    }
}

TEST_CASE("needlet mass concentrates near its node") {
    const int j = 4;
    Frame fr(j + 1);
    const DiskCubature& g = fr.grid(j);
    std::size_t node = 0;
    for (int a = 0; a < g.radial_count; ++a)
        if (std::abs(g.nodes[a].radius() - 0.4) < std::abs(g.nodes[node].radius() - 0.4))
            node = static_cast<std::size_t>(a);
    const DiskPoint xi = g.nodes[node];
    const double center = std::abs(fr.needlet_eval(j, node, xi));
    CHECK(center > 1.0);

    const double d = 10.0 * std::pow(2.0, -j);
    double far = 0.0;
    for (int q = 0; q < 256; ++q) {
        const double ph = 2.0 * std::numbers::pi * q / 256.0;
        const DiskPoint p{xi.x + d * std::cos(ph), xi.y + d * std::sin(ph)};
        if (p.x * p.x + p.y * p.y > 1.0) continue;
        far = std::max(far, std::abs(fr.needlet_eval(j, node, p)));
    }
    CHECK(far < center / 10.0);
    CHECK(far < 0.035 * center);  // frozen: measured ratio 0.015
}

TEST_CASE("noise profile matches the observed pipeline variance") {
    Frame fr(3);
    const LevelTable sig = fr.noise_profile();
    REQUIRE(sig.size() == 3);
    for (std::size_t j = 0; j < sig.size(); ++j) {
        REQUIRE(sig[j].size() == fr.grid(static_cast<int>(j)).nodes.size());
        for (double s : sig[j]) CHECK(s > 0.0);
    }

    const SvdCoeffs zero = SvdCoeffs::zeros(8);
    const double eps = 0.5;
    const int n = 10000;
    const int picks[3][2] = {{0, 7}, {1, 22}, {2, 76}};
    double sum[3] = {0, 0, 0}, sum2[3] = {0, 0, 0};
    for (int s = 1; s <= n; ++s) {
        const Observation obs = observe(zero, eps, static_cast<std::uint64_t>(s));
        for (int t = 0; t < 3; ++t) {
            const double b = fr.analysis_single(obs.alpha_hat, picks[t][0],
                                                static_cast<std::size_t>(picks[t][1]));
            sum[t] += b;
            sum2[t] += b * b;
        }
    }
    for (int t = 0; t < 3; ++t) {
        const double mean = sum[t] / n;
        const double var = sum2[t] / n - mean * mean;
        const double sd = sig[static_cast<std::size_t>(picks[t][0])]
                             [static_cast<std::size_t>(picks[t][1])] * eps;
        CHECK(var / (sd * sd) > 0.94);
        CHECK(var / (sd * sd) < 1.06);
        CHECK(std::abs(mean) < 4.0 * sd / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("noise variance grows at most linearly in the band frequency") {
    Frame fr(6);
    const LevelTable sig = fr.noise_profile();
    for (int j = 0; j < 6; ++j) {
        double worst = 0.0;
        for (double s : sig[static_cast<std::size_t>(j)])
            worst = std::max(worst, s * s * std::pow(2.0, -j));
        CHECK(worst < 0.06);  // frozen: measured max 0.0425 at j=0
    }
}

TEST_CASE("weighted analysis energy is bounded by the input energy") {
    Frame fr(3);
    std::vector<std::vector<double>> l2(3);
    for (int j = 0; j < 3; ++j) {
        const BasisEvaluator be(fr.band_end(j));
        const std::vector<SvdIndex> idx = enumerate_indices(fr.band_end(j));
        std::vector<double> vals(be.count());
        l2[static_cast<std::size_t>(j)].resize(fr.grid(j).nodes.size());
        for (std::size_t node = 0; node < fr.grid(j).nodes.size(); ++node)
            l2[static_cast<std::size_t>(j)][node] = needlet_l2(fr, be, idx, vals, j, node);
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SvdCoeffs alpha = random_coeffs(8, seed);
        const NeedletCoeffs beta = fr.analysis(alpha);
        const double budget = sum_sq(alpha.values);
        double total = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            double level = 0.0;
            for (std::size_t node = 0; node < beta.levels[j].size(); ++node)
                level += beta.levels[j][node] * beta.levels[j][node] * l2[j][node] * l2[j][node];
            CHECK(level <= budget * (1.0 + 1e-12));
            total += level;
        }
        CHECK(total <= budget * (1.0 + 1e-12));
    }
}

TEST_CASE("round trip reproduces a band-limited density on a pixel grid") {
    Frame fr(4);
    SvdCoeffs alpha = SvdCoeffs::zeros(16);
    for (std::size_t q = 0; q < index_count(8); ++q)
        alpha.values[q] = rng::gaussian(7, q);
    const SvdCoeffs back = fr.synthesis(fr.analysis(alpha), 16);

    const BasisEvaluator be(16);
    std::vector<double> vals(be.count());
    const int n = 128;
    double worst = 0.0, peak = 0.0;
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const double x = -1.0 + (2.0 * col + 1.0) / n;
            const double y = 1.0 - (2.0 * row + 1.0) / n;
            if (x * x + y * y > 1.0) continue;
            be.eval_point({x, y}, vals);
            double fa = 0.0, fb = 0.0;
            for (std::size_t q = 0; q < vals.size(); ++q) {
                fa += alpha.values[q] * vals[q];
                fb += back.values[q] * vals[q];
            }
            worst = std::max(worst, std::abs(fa - fb));
            peak = std::max(peak, std::abs(fa));
        }
    }
    CHECK(worst < 1e-7 * peak);
}

TEST_CASE("frame coefficients serialize with grid coordinates") {
    Frame fr(1);
    NeedletCoeffs beta;
    beta.scaling = 0.5;
    beta.levels = {std::vector<double>(15, 0.0)};
    for (std::size_t q = 0; q < 15; ++q)
        beta.levels[0][q] = 0.25 + static_cast<double>(q);

    std::ostringstream os;
    write_csv(beta, fr, os);
    const std::string text = os.str();
    CHECK(text.find('\r') == std::string::npos);

    std::istringstream is(text);
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "j,node_index,xi_x,xi_y,value");
    REQUIRE(std::getline(is, line));
    CHECK(line == "-1,0,0,0,0.5");
    const DiskCubature& g = fr.grid(0);
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        REQUIRE(rows < 15);
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');
        CHECK(cell == "0");
        std::getline(cells, cell, ',');
        CHECK(cell == std::to_string(rows));
        std::getline(cells, cell, ',');
        CHECK(std::strtod(cell.c_str(), nullptr) == g.nodes[rows].x);
        std::getline(cells, cell, ',');
        CHECK(std::strtod(cell.c_str(), nullptr) == g.nodes[rows].y);
        std::getline(cells, cell, ',');
        CHECK(std::strtod(cell.c_str(), nullptr) == beta.levels[0][rows]);
        ++rows;
    }
    CHECK(rows == 15);

    NeedletCoeffs torn = beta;
    torn.levels.emplace_back();
    std::ostringstream sink;
    CHECK_THROWS_AS(write_csv(torn, fr, sink), std::invalid_argument);
}

TEST_CASE("analysis row agrees with the full transform") {
    Frame fr(3);
    const SvdCoeffs alpha = random_coeffs(8, 11);
    const NeedletCoeffs beta = fr.analysis(alpha);
    const int picks[3][2] = {{0, 5}, {1, 17}, {2, 100}};
    for (auto& pk : picks) {
        const int j = pk[0];
        const std::size_t node = static_cast<std::size_t>(pk[1]);
        const double direct = fr.analysis_single(alpha, j, node);
        CHECK(direct == doctest::Approx(beta.levels[static_cast<std::size_t>(j)][node])
                            .epsilon(1e-14));
        const std::vector<double> row = fr.analysis_row(j, node);
        REQUIRE(row.size() == alpha.values.size());
        double dot = 0.0;
        for (std::size_t q = 0; q < row.size(); ++q) dot += row[q] * alpha.values[q];
        CHECK(dot == doctest::Approx(direct).epsilon(1e-13));
        // entries vanish off the band
        for (const SvdIndex& ix : enumerate_indices(8)) {
            if (ix.k < fr.band_begin(j) || ix.k >= fr.band_end(j))
                CHECK(row[flat_index(ix)] == 0.0);
        }
    }
    CHECK_THROWS_AS(fr.analysis_row(0, 15), std::out_of_range);
    CHECK_THROWS_AS(fr.analysis_single(alpha, 2, 153), std::out_of_range);
    CHECK_THROWS_AS(fr.analysis_single(SvdCoeffs::zeros(4), 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(fr.needlet_eval(0, 15, {0.0, 0.0}), std::out_of_range);
}

TEST_CASE("replacement cut-off functions") {
    const SvdCoeffs alpha = random_coeffs(8, 23);

    // passing the default explicitly changes nothing
    Frame plain(3);
    Frame explicit_a(3, 0.0, [](double t) { return filter_a(t); });
    const NeedletCoeffs b1 = plain.analysis(alpha);
    const NeedletCoeffs b2 = explicit_a.analysis(alpha);
    CHECK(b1.scaling == b2.scaling);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t q = 0; q < b1.levels[j].size(); ++q)
            CHECK(b1.levels[j][q] == b2.levels[j][q]);

    // any admissible cut-off telescopes, so the round trip stays exact
    Frame squeezed(3, 0.0, [](double t) { return filter_a(t * t); });
    SvdCoeffs low = SvdCoeffs::zeros(8);
    for (std::size_t q = 0; q < index_count(4); ++q)
        low.values[q] = rng::gaussian(29, q);
    const SvdCoeffs back = squeezed.synthesis(squeezed.analysis(low), 8);
    for (std::size_t q = 0; q < back.values.size(); ++q)
        CHECK(back.values[q] == doctest::Approx(low.values[q]).epsilon(1e-10));

    // an increasing ramp makes b negative and is rejected
    CHECK_THROWS_AS(Frame(3, 0.0, [](double t) { return std::min(t, 1.0); }),
                    std::invalid_argument);
}

TEST_CASE("rotated node grids keep the frame identities") {
    const DiskCubature spun = needlet_grid(1, 0.5);
    const DiskCubature flat = needlet_grid(1, 0.0);
    CHECK(spun.nodes[0].x != flat.nodes[0].x);

    Frame fr(3, 0.5);
    CHECK(fr.grid(1).nodes[0].x == spun.nodes[0].x);
    SvdCoeffs low = SvdCoeffs::zeros(8);
    for (std::size_t q = 0; q < index_count(4); ++q)
        low.values[q] = rng::gaussian(31, q);
    const NeedletCoeffs beta = fr.analysis(low);
    double energy = beta.scaling * beta.scaling;
    for (const auto& level : beta.levels) energy += sum_sq(level);
    CHECK(energy == doctest::Approx(sum_sq(low.values)).epsilon(1e-12));
    const SvdCoeffs back = fr.synthesis(beta, 8);
    for (std::size_t q = 0; q < back.values.size(); ++q)
        CHECK(back.values[q] == doctest::Approx(low.values[q]).epsilon(1e-10));
}
