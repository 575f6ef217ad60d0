#include "ntomo/svd_basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ntomo/orthopoly.hpp"

namespace ntomo {
namespace {

constexpr double kRadiusSlack = 1e-12;

double radial_part(int k, int l, double r) {
    // sqrt(2k+2) * P_((k-l)/2)^{(0,l)}(2r^2-1) * r^l
    const int j = (k - l) / 2;
    const double u = 2.0 * r * r - 1.0;
    double rl = 1.0;
    for (int q = 0; q < l; ++q) rl *= r;
    return std::sqrt(2.0 * k + 2.0) *
           jacobi_eval(j, JacobiParams{0.0, static_cast<double>(l)}, u) * rl;
}

}  // namespace

bool is_valid_index(SvdIndex idx) {
    if (idx.k < 0 || idx.l < 0 || idx.l > idx.k) return false;
    if ((idx.k - idx.l) % 2 != 0) return false;
    if (idx.i != 1 && idx.i != 2) return false;
    if (idx.l == 0 && idx.i == 2) return false;
    return true;
}

void require_valid_index(SvdIndex idx) {
    if (!is_valid_index(idx))
        throw std::domain_error("invalid basis index (k=" + std::to_string(idx.k) +
                                ", l=" + std::to_string(idx.l) +
                                ", i=" + std::to_string(idx.i) + ")");
}

std::vector<SvdIndex> enumerate_indices(int k_max) {
    if (k_max < 0) throw std::domain_error("enumerate_indices: negative k_max");
    std::vector<SvdIndex> out;
    out.reserve(index_count(k_max));
    for (int k = 0; k < k_max; ++k)
        for (int l = k % 2; l <= k; l += 2)
            for (int i = (l == 0 ? 1 : 1); i <= (l == 0 ? 1 : 2); ++i)
                out.push_back({k, l, i});
    return out;
}

std::size_t index_count(int k_max) {
    if (k_max < 0) throw std::domain_error("index_count: negative k_max");
    const std::size_t n = static_cast<std::size_t>(k_max);
    return n * (n + 1) / 2;
}

std::size_t flat_index(SvdIndex idx) {
    require_valid_index(idx);
    const std::size_t k = static_cast<std::size_t>(idx.k);
    const std::size_t block = k * (k + 1) / 2;
    if (idx.l == 0) return block;
    return block + static_cast<std::size_t>(idx.l - 1) + static_cast<std::size_t>(idx.i - 1);
}

double angular_factor(int l, int i, double theta) {
    if (l < 0) throw std::domain_error("angular_factor: negative frequency");
    const double c = (l == 0) ? 1.0 / std::sqrt(2.0 * std::numbers::pi)
                              : 1.0 / std::sqrt(std::numbers::pi);
    if (i == 1) return c * std::cos(l * theta);
    if (i == 2 && l > 0) return c * std::sin(l * theta);
    throw std::domain_error("angular_factor: invalid branch");
}

double eval_f(SvdIndex idx, DiskPoint p) {
    require_valid_index(idx);
    const double r = p.radius();
    if (r > 1.0 + kRadiusSlack)
        throw std::domain_error("eval_f: point outside the unit disk");
    const double rc = std::min(r, 1.0);
    return radial_part(idx.k, idx.l, rc) * angular_factor(idx.l, idx.i, p.angle());
}

double eval_g(SvdIndex idx, double theta, double s) {
    require_valid_index(idx);
    if (!(s >= -1.0 && s <= 1.0))
        throw std::domain_error("eval_g: offset outside [-1,1]");
    const double norm = std::sqrt(gegenbauer_norm(idx.k, GegenbauerParam{1.0}));
    return std::sqrt(1.0 - s * s) * gegenbauer_eval(idx.k, GegenbauerParam{1.0}, s) /
           norm * angular_factor(idx.l, idx.i, theta);
}

double eigenvalue(int k) {
    if (k < 0) throw std::domain_error("eigenvalue: negative degree");
    return 2.0 * std::sqrt(std::numbers::pi / (k + 1.0));
}

SvdCoeffs SvdCoeffs::zeros(int k_max) {
    SvdCoeffs c;
    c.k_max = k_max;
    c.values.assign(index_count(k_max), 0.0);
    return c;
}

double& SvdCoeffs::at(SvdIndex idx) {
    const std::size_t pos = flat_index(idx);
    if (idx.k >= k_max) throw std::out_of_range("SvdCoeffs::at: degree out of range");
    return values[pos];
}

double SvdCoeffs::at(SvdIndex idx) const {
    const std::size_t pos = flat_index(idx);
    if (idx.k >= k_max) throw std::out_of_range("SvdCoeffs::at: degree out of range");
    return values[pos];
}

void write_csv(const SvdCoeffs& coeffs, std::ostream& out) {
    out << "k,l,i,value\n";
    char buf[64];
    std::size_t pos = 0;
    for (const SvdIndex idx : enumerate_indices(coeffs.k_max)) {
        std::snprintf(buf, sizeof buf, "%.17g", coeffs.values[pos++]);
        out << idx.k << ',' << idx.l << ',' << idx.i << ',' << buf << '\n';
    }
}

SvdCoeffs read_coeffs_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "k,l,i,value")
        throw std::runtime_error("coefficient csv: bad header");
    struct Row {
        SvdIndex idx;
        double value;
    };
    std::vector<Row> rows;
    int max_k = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Row row;
        char* end = nullptr;
        const char* s = line.c_str();
        row.idx.k = static_cast<int>(std::strtol(s, &end, 10));
        if (*end != ',') throw std::runtime_error("coefficient csv: bad row: " + line);
        row.idx.l = static_cast<int>(std::strtol(end + 1, &end, 10));
        if (*end != ',') throw std::runtime_error("coefficient csv: bad row: " + line);
        row.idx.i = static_cast<int>(std::strtol(end + 1, &end, 10));
        if (*end != ',') throw std::runtime_error("coefficient csv: bad row: " + line);
        row.value = std::strtod(end + 1, &end);
        if (*end != '\0') throw std::runtime_error("coefficient csv: bad row: " + line);
        require_valid_index(row.idx);
        max_k = std::max(max_k, row.idx.k);
        rows.push_back(row);
    }
    SvdCoeffs out = SvdCoeffs::zeros(max_k + 1);
    for (const Row& row : rows) out.at(row.idx) = row.value;
    return out;
}

BasisEvaluator::BasisEvaluator(int k_max) : k_max_(k_max), count_(index_count(k_max)) {
    if (k_max < 0) throw std::domain_error("BasisEvaluator: negative k_max");
    positions_.resize(k_max > 0 ? k_max : 0);
    for (int l = 0; l < k_max; ++l)
        for (int k = l; k < k_max; k += 2)
            positions_[l].push_back(flat_index({k, l, 1}));
}

void BasisEvaluator::eval_point(DiskPoint p, std::span<double> out) const {
    if (out.size() != count_)
        throw std::invalid_argument("BasisEvaluator: output span of wrong size");
    const double r = p.radius();
    if (r > 1.0 + kRadiusSlack)
        throw std::domain_error("BasisEvaluator: point outside the unit disk");
    const double rc = std::min(r, 1.0);
    const double u = 2.0 * rc * rc - 1.0;

    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    // cos(l theta), sin(l theta) by angle addition from the unit direction.
    const double c1 = (rc > 0.0) ? p.x / r : 1.0;
    const double s1 = (rc > 0.0) ? p.y / r : 0.0;

    double cl = 1.0;
    double sl = 0.0;
    double rl = 1.0;
    for (int l = 0; l < k_max_; ++l) {
        const JacobiParams params{0.0, static_cast<double>(l)};
        const auto& pos = positions_[l];
        const double yc = (l == 0 ? inv_sqrt_2pi : inv_sqrt_pi) * cl;
        const double ys = inv_sqrt_pi * sl;

        // Jacobi recurrence in the radial degree j for fixed frequency l.
        double pj_prev = 1.0;
        double pj = 0.0;
        for (std::size_t j = 0; j < pos.size(); ++j) {
            double value;
            if (j == 0) {
                value = pj_prev;
            } else if (j == 1) {
                pj = ((params.beta + 2.0) * u - params.beta) * 0.5;
                value = pj;
            } else {
                const double dj = static_cast<double>(j);
                const double bb = params.beta;
                const double c0 = 2.0 * dj * (dj + bb) * (2.0 * dj + bb - 2.0);
                const double c1r = 2.0 * dj + bb - 1.0;
                const double c2 = (2.0 * dj + bb) * (2.0 * dj + bb - 2.0);
                const double c3 = -bb * bb;
                const double c4 = 2.0 * (dj - 1.0) * (dj + bb - 1.0) * (2.0 * dj + bb);
                const double next = (c1r * (c2 * u + c3) * pj - c4 * pj_prev) / c0;
                pj_prev = pj;
                pj = next;
                value = pj;
            }
            const int k = l + 2 * static_cast<int>(j);
            const double radial = std::sqrt(2.0 * k + 2.0) * value * rl;
            out[pos[j]] = radial * yc;
            if (l > 0) out[pos[j] + 1] = radial * ys;
        }

        // advance angle and radius powers
        const double cn = cl * c1 - sl * s1;
        sl = sl * c1 + cl * s1;
        cl = cn;
        rl *= rc;
    }
}

}  // namespace ntomo
