#include "ntomo/needlet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ntomo {
namespace {

constexpr double kSupPatchRadiusScale = 8.0;  // patch half-width 8 * 2^-j
constexpr int kSupPatchSamples = 41;          // per polar direction
constexpr double kSupInflation = 1.05;

double psi_bridge(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

}  // namespace

double filter_a(double t) {
    if (!(t >= 0.0)) throw std::domain_error("filter_a: argument must be >= 0");
    if (t <= 0.5) return 1.0;
    if (t >= 1.0) return 0.0;
    const double up = psi_bridge(2.0 * (1.0 - t));
    return up / (up + psi_bridge(2.0 * t - 1.0));
}

double filter_b(double t) {
    if (!(t >= 0.0)) throw std::domain_error("filter_b: argument must be >= 0");
    const double v = filter_a(0.5 * t) - filter_a(t);
    return v > 0.0 ? v : 0.0;
}

Frame::Frame(int levels, double angular_phase, std::function<double(double)> cutoff)
    : levels_(levels), cutoff_(cutoff ? std::move(cutoff) : filter_a) {
    if (levels < 0 || levels > 16)
        throw std::domain_error("Frame: level count out of range");
    grids_.reserve(levels_);
    sqrt_b_.reserve(levels_);
    evals_.reserve(levels_);
    for (int j = 0; j < levels_; ++j) {
        grids_.push_back(needlet_grid(j, angular_phase));
        const int kb = band_begin(j);
        const int ke = band_end(j);
        const double scale = std::ldexp(1.0, -j);
        std::vector<double> sb(static_cast<std::size_t>(ke - kb));
        for (int k = kb; k < ke; ++k) {
            const double b = cutoff_(0.5 * k * scale) - cutoff_(k * scale);
            if (!(b >= -1e-12 && b <= 1.0 + 1e-12))
                throw std::invalid_argument("Frame: cutoff function is not admissible");
            sb[static_cast<std::size_t>(k - kb)] = std::sqrt(std::max(0.0, b));
        }
        sqrt_b_.push_back(std::move(sb));
        evals_.emplace_back(ke);
    }
}

void Frame::check_level(int j) const {
    if (j < 0 || j >= levels_)
        throw std::out_of_range("Frame: level " + std::to_string(j) + " out of range");
}

const DiskCubature& Frame::grid(int j) const {
    check_level(j);
    return grids_[static_cast<std::size_t>(j)];
}

int Frame::band_begin(int j) const {
    check_level(j);
    return j == 0 ? 1 : 1 << (j - 1);
}

int Frame::band_end(int j) const {
    check_level(j);
    return 1 << (j + 1);
}

double Frame::band_weight(int j, int k) const {
    check_level(j);
    if (k < 0) throw std::domain_error("band_weight: negative degree");
    const double a_half = cutoff_(0.5 * k * std::ldexp(1.0, -j));
    const double a_full = cutoff_(k * std::ldexp(1.0, -j));
    return std::max(0.0, a_half - a_full);
}

std::size_t Frame::band_lo_flat(int j) const {
    const std::size_t kb = static_cast<std::size_t>(band_begin(j));
    return kb * (kb + 1) / 2;
}

std::size_t Frame::band_hi_flat(int j) const {
    const std::size_t ke = static_cast<std::size_t>(band_end(j));
    return ke * (ke + 1) / 2;
}

void Frame::weighted_band_at(int j, DiskPoint xi, std::vector<double>& scratch,
                             std::vector<double>& out) const {
    const BasisEvaluator& ev = evals_[static_cast<std::size_t>(j)];
    scratch.resize(ev.count());
    ev.eval_point(xi, scratch);
    const int kb = band_begin(j);
    const int ke = band_end(j);
    const std::size_t lo = band_lo_flat(j);
    out.assign(band_hi_flat(j) - lo, 0.0);
    for (int k = kb; k < ke; ++k) {
        const double sb = sqrt_b_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - kb)];
        if (sb == 0.0) continue;
        const std::size_t block = static_cast<std::size_t>(k) * (k + 1) / 2;
        for (std::size_t q = 0; q <= static_cast<std::size_t>(k); ++q)
            out[block - lo + q] = sb * scratch[block + q];
    }
}

NeedletCoeffs Frame::analysis(const SvdCoeffs& alpha) const {
    if (alpha.k_max < coeff_k_max())
        throw std::invalid_argument("analysis: insufficient coefficient k_max");
    if (alpha.values.size() != index_count(alpha.k_max))
        throw std::invalid_argument("analysis: malformed coefficient vector");
    NeedletCoeffs out;
    out.scaling = alpha.values.empty() ? 0.0 : alpha.values[0];
    out.levels.resize(static_cast<std::size_t>(levels_));
    std::vector<double> scratch;
    for (int j = 0; j < levels_; ++j) {
        const DiskCubature& g = grids_[static_cast<std::size_t>(j)];
        const BasisEvaluator& ev = evals_[static_cast<std::size_t>(j)];
        auto& lvl = out.levels[static_cast<std::size_t>(j)];
        lvl.resize(g.nodes.size());
        scratch.resize(ev.count());
        const int kb = band_begin(j);
        const int ke = band_end(j);
        for (std::size_t n = 0; n < g.nodes.size(); ++n) {
            ev.eval_point(g.nodes[n], scratch);
            double acc = 0.0;
            for (int k = kb; k < ke; ++k) {
                const double sb =
                    sqrt_b_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - kb)];
                if (sb == 0.0) continue;
                const std::size_t block = static_cast<std::size_t>(k) * (k + 1) / 2;
                double dot = 0.0;
                for (std::size_t q = block; q <= block + static_cast<std::size_t>(k); ++q)
                    dot += scratch[q] * alpha.values[q];
                acc += sb * dot;
            }
            lvl[n] = std::sqrt(g.weights[n]) * acc;
        }
    }
    return out;
}

SvdCoeffs Frame::synthesis(const NeedletCoeffs& beta, int k_max) const {
    if (beta.level_count() != levels_)
        throw std::invalid_argument("synthesis: level count mismatch");
    if (k_max < 1 || k_max > coeff_k_max())
        throw std::invalid_argument("synthesis: k_max outside [1, 2^levels]");
    SvdCoeffs out = SvdCoeffs::zeros(k_max);
    out.values[0] = beta.scaling;
    std::vector<double> scratch;
    for (int j = 0; j < levels_; ++j) {
        const DiskCubature& g = grids_[static_cast<std::size_t>(j)];
        const auto& lvl = beta.levels[static_cast<std::size_t>(j)];
        if (lvl.size() != g.nodes.size())
            throw std::invalid_argument("synthesis: node count mismatch at level " +
                                        std::to_string(j));
        const BasisEvaluator& ev = evals_[static_cast<std::size_t>(j)];
        scratch.resize(ev.count());
        const int kb = band_begin(j);
        const int ke = std::min(band_end(j), k_max);
        for (std::size_t n = 0; n < lvl.size(); ++n) {
            if (lvl[n] == 0.0) continue;
            ev.eval_point(g.nodes[n], scratch);
            const double w = std::sqrt(g.weights[n]) * lvl[n];
            for (int k = kb; k < ke; ++k) {
                const double sb =
                    sqrt_b_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - kb)];
                if (sb == 0.0) continue;
                const std::size_t block = static_cast<std::size_t>(k) * (k + 1) / 2;
                for (std::size_t q = block; q <= block + static_cast<std::size_t>(k); ++q)
                    out.values[q] += sb * w * scratch[q];
            }
        }
    }
    return out;
}

LevelTable Frame::noise_profile() const {
    LevelTable out(static_cast<std::size_t>(levels_));
    std::vector<double> scratch;
    for (int j = 0; j < levels_; ++j) {
        const DiskCubature& g = grids_[static_cast<std::size_t>(j)];
        const BasisEvaluator& ev = evals_[static_cast<std::size_t>(j)];
        auto& lvl = out[static_cast<std::size_t>(j)];
        lvl.resize(g.nodes.size());
        scratch.resize(ev.count());
        const int kb = band_begin(j);
        const int ke = band_end(j);
        for (std::size_t n = 0; n < g.nodes.size(); ++n) {
            ev.eval_point(g.nodes[n], scratch);
            double acc = 0.0;
            for (int k = kb; k < ke; ++k) {
                const double sb =
                    sqrt_b_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - kb)];
                if (sb == 0.0) continue;
                const double inv_lambda_sq = (k + 1.0) / (4.0 * std::numbers::pi);
                const std::size_t block = static_cast<std::size_t>(k) * (k + 1) / 2;
                double ssq = 0.0;
                for (std::size_t q = block; q <= block + static_cast<std::size_t>(k); ++q)
                    ssq += scratch[q] * scratch[q];
                acc += sb * sb * inv_lambda_sq * ssq;
            }
            lvl[n] = std::sqrt(g.weights[n] * acc);
        }
    }
    return out;
}

LevelTable Frame::sup_norms() const {
    LevelTable out(static_cast<std::size_t>(levels_));
    std::vector<double> scratch;
    std::vector<double> slice;
    std::vector<double> probe;
    for (int j = 0; j < levels_; ++j) {
        const DiskCubature& g = grids_[static_cast<std::size_t>(j)];
        const BasisEvaluator& ev = evals_[static_cast<std::size_t>(j)];
        auto& lvl = out[static_cast<std::size_t>(j)];
        lvl.resize(g.nodes.size());
        const double delta = kSupPatchRadiusScale * std::ldexp(1.0, -j);
        const std::size_t lo = band_lo_flat(j);
        for (std::size_t n = 0; n < g.nodes.size(); ++n) {
            const DiskPoint xi = g.nodes[n];
            weighted_band_at(j, xi, scratch, slice);
            const double r0 = xi.radius();
            const double t0 = xi.angle();
            const double r_lo = std::max(0.0, r0 - delta);
            const double r_hi = std::min(1.0, r0 + delta);
            const double phi =
                (delta >= r0) ? std::numbers::pi : std::asin(delta / r0);
            probe.resize(ev.count());
            double best = 0.0;
            for (int a = 0; a < kSupPatchSamples; ++a) {
                const double r =
                    r_lo + (r_hi - r_lo) * a / static_cast<double>(kSupPatchSamples - 1);
                for (int q = 0; q < kSupPatchSamples; ++q) {
                    const double th =
                        t0 - phi + 2.0 * phi * q / static_cast<double>(kSupPatchSamples - 1);
                    ev.eval_point(DiskPoint::polar(r, th), probe);
                    double dot = 0.0;
                    for (std::size_t m = 0; m < slice.size(); ++m)
                        dot += slice[m] * probe[lo + m];
                    best = std::max(best, std::abs(dot));
                }
            }
            lvl[n] = kSupInflation * std::sqrt(g.weights[n]) * best;
        }
    }
    return out;
}

double Frame::needlet_eval(int j, std::size_t node, DiskPoint p) const {
    check_level(j);
    const DiskCubature& g = grids_[static_cast<std::size_t>(j)];
    if (node >= g.nodes.size()) throw std::out_of_range("needlet_eval: node out of range");
    std::vector<double> scratch;
    std::vector<double> slice;
    weighted_band_at(j, g.nodes[node], scratch, slice);
    evals_[static_cast<std::size_t>(j)].eval_point(p, scratch);
    const std::size_t lo = band_lo_flat(j);
    double dot = 0.0;
    for (std::size_t m = 0; m < slice.size(); ++m) dot += slice[m] * scratch[lo + m];
    return std::sqrt(g.weights[node]) * dot;
}

std::vector<double> Frame::analysis_row(int j, std::size_t node) const {
    check_level(j);
    const DiskCubature& g = grids_[static_cast<std::size_t>(j)];
    if (node >= g.nodes.size()) throw std::out_of_range("analysis_row: node out of range");
    std::vector<double> scratch;
    std::vector<double> slice;
    weighted_band_at(j, g.nodes[node], scratch, slice);
    std::vector<double> row(index_count(coeff_k_max()), 0.0);
    const double sw = std::sqrt(g.weights[node]);
    const std::size_t lo = band_lo_flat(j);
    for (std::size_t m = 0; m < slice.size(); ++m) row[lo + m] = sw * slice[m];
    return row;
}

double Frame::analysis_single(const SvdCoeffs& alpha, int j, std::size_t node) const {
    check_level(j);
    if (alpha.k_max < band_end(j))
        throw std::invalid_argument("analysis_single: insufficient coefficient k_max");
    const DiskCubature& g = grids_[static_cast<std::size_t>(j)];
    if (node >= g.nodes.size())
        throw std::out_of_range("analysis_single: node out of range");
    std::vector<double> scratch;
    std::vector<double> slice;
    weighted_band_at(j, g.nodes[node], scratch, slice);
    const std::size_t lo = band_lo_flat(j);
    double dot = 0.0;
    for (std::size_t m = 0; m < slice.size(); ++m) dot += slice[m] * alpha.values[lo + m];
    return std::sqrt(g.weights[node]) * dot;
}

void write_csv(const NeedletCoeffs& beta, const Frame& frame, std::ostream& out) {
    if (beta.level_count() != frame.levels())
        throw std::invalid_argument("needlet csv: level count mismatch");
    char buf[64];
    out << "j,node_index,xi_x,xi_y,value\n";
    std::snprintf(buf, sizeof buf, "%.17g", beta.scaling);
    out << "-1,0,0,0," << buf << '\n';
    for (int j = 0; j < frame.levels(); ++j) {
        const DiskCubature& g = frame.grid(j);
        const auto& lvl = beta.levels[static_cast<std::size_t>(j)];
        if (lvl.size() != g.nodes.size())
            throw std::invalid_argument("needlet csv: node count mismatch");
        for (std::size_t n = 0; n < lvl.size(); ++n) {
            char bx[64];
            char by[64];
            std::snprintf(bx, sizeof bx, "%.17g", g.nodes[n].x);
            std::snprintf(by, sizeof by, "%.17g", g.nodes[n].y);
            std::snprintf(buf, sizeof buf, "%.17g", lvl[n]);
            out << j << ',' << n << ',' << bx << ',' << by << ',' << buf << '\n';
        }
    }
}

}  // namespace ntomo
