#include "ntomo/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ntomo {

double hard_threshold(double x, double threshold) {
    if (!(threshold >= 0.0)) throw std::domain_error("hard_threshold: negative threshold");
    return std::abs(x) >= threshold ? x : 0.0;
}

double noise_scale(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("noise_scale: noise level must lie in (0,1)");
    return epsilon * std::sqrt(std::log(1.0 / epsilon));
}

int max_level(double epsilon, LevelRule rule) {
    const double budget = std::log2(1.0 / noise_scale(epsilon));  // > 0 on (0,1)
    const double raw = (rule == LevelRule::standard) ? budget / 1.5 : budget / 2.0;
    // Nudge for exact dyadic boundaries before truncating.
    const int level = static_cast<int>(std::floor(raw + 1e-12));
    return level < 0 ? 0 : level;
}

void ThresholdPolicy::validate() const {
    // kappa = 0 is the linear limit (all thresholds vanish), so only reject negatives.
    if (!(kappa >= 0.0)) throw std::domain_error("threshold policy: kappa must not be negative");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("threshold policy: noise level must lie in (0,1)");
}

SvdCoeffs linear_svd(const Observation& obs, int k_cut) {
    if (k_cut < 0 || k_cut > obs.alpha_hat.k_max)
        throw std::invalid_argument("linear_svd: cutoff outside [0, k_max]");
    return truncate_coeffs(obs.alpha_hat, k_cut);
}

SvdCoeffs threshold_svd(const Observation& obs, const ThresholdPolicy& policy, int k_cut) {
    policy.validate();
    SvdCoeffs out = linear_svd(obs, k_cut);
    const double c_eps = noise_scale(policy.epsilon);
    std::size_t pos = 0;
    for (int k = 0; k < out.k_max; ++k) {
        const double t_k = policy.kappa / eigenvalue(k) * c_eps;
        for (int c = 0; c <= k; ++c, ++pos) out.values[pos] = hard_threshold(out.values[pos], t_k);
    }
    return out;
}

NeedletCoeffs threshold_needlet(const Observation& obs, const ThresholdPolicy& policy,
                                const Frame& frame, const LevelTable& sigma) {
    policy.validate();
    if (static_cast<int>(sigma.size()) != frame.levels())
        throw std::invalid_argument("threshold_needlet: noise table level mismatch");
    NeedletCoeffs beta = frame.analysis(obs.alpha_hat);
    const double c_eps = noise_scale(policy.epsilon);
    for (int j = 0; j < frame.levels(); ++j) {
        auto& lvl = beta.levels[static_cast<std::size_t>(j)];
        const auto& sig = sigma[static_cast<std::size_t>(j)];
        if (sig.size() != lvl.size())
            throw std::invalid_argument("threshold_needlet: noise table node mismatch");
        const double severity =
            policy.resolution_penalty ? std::exp2(0.5 * static_cast<double>(j)) : 1.0;
        for (std::size_t n = 0; n < lvl.size(); ++n)
            lvl[n] = hard_threshold(lvl[n], policy.kappa * sig[n] * c_eps * severity);
    }
    return beta;
}

NeedletCoeffs threshold_needlet_sup(const Observation& obs, const ThresholdPolicy& policy,
                                    const Frame& frame, const LevelTable& sup_norms) {
    policy.validate();
    if (static_cast<int>(sup_norms.size()) != frame.levels())
        throw std::invalid_argument("threshold_needlet_sup: sup-norm table level mismatch");
    NeedletCoeffs beta = frame.analysis(obs.alpha_hat);
    const double c_eps = noise_scale(policy.epsilon);
    for (int j = 0; j < frame.levels(); ++j) {
        auto& lvl = beta.levels[static_cast<std::size_t>(j)];
        const auto& sup = sup_norms[static_cast<std::size_t>(j)];
        if (sup.size() != lvl.size())
            throw std::invalid_argument("threshold_needlet_sup: sup-norm table node mismatch");
        const double bar = policy.kappa * std::exp2(2.0 * j) * c_eps;
        for (std::size_t n = 0; n < lvl.size(); ++n)
            if (std::abs(lvl[n]) * sup[n] < bar) lvl[n] = 0.0;
    }
    return beta;
}

NeedletCoeffs threshold_needlet(const Observation& obs, const ThresholdPolicy& policy,
                                int levels) {
    const Frame frame(levels);
    return threshold_needlet(obs, policy, frame, frame.noise_profile());
}

NeedletCoeffs threshold_needlet_sup(const Observation& obs, const ThresholdPolicy& policy,
                                    int levels) {
    const Frame frame(levels);
    return threshold_needlet_sup(obs, policy, frame, frame.sup_norms());
}

DiskPoint PixelImage::pixel_center(int n, int row, int col) {
    return {-1.0 + (2.0 * col + 1.0) / n, 1.0 - (2.0 * row + 1.0) / n};
}

namespace {

PixelImage make_blank(int n) {
    if (n < 2) throw std::domain_error("pixel grid: side length must be at least 2");
    PixelImage img;
    img.n = n;
    img.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    img.mask.assign(static_cast<std::size_t>(n) * n, 0);
    return img;
}

}  // namespace

PixelImage rasterize(const std::function<double(DiskPoint)>& fn, int n) {
    if (!fn) throw std::invalid_argument("rasterize: empty function");
    PixelImage img = make_blank(n);
    std::size_t q = 0;
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col, ++q) {
            const DiskPoint p = PixelImage::pixel_center(n, row, col);
            if (p.x * p.x + p.y * p.y <= 1.0) {
                img.mask[q] = 1;
                img.values[q] = fn(p);
            }
        }
    }
    return img;
}

PixelImage reconstruct(const SvdCoeffs& alpha, int n) {
    PixelImage img = make_blank(n);
    const BasisEvaluator ev(alpha.k_max);
    std::vector<double> row(ev.count());
    std::size_t q = 0;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c, ++q) {
            const DiskPoint p = PixelImage::pixel_center(n, r, c);
            if (p.x * p.x + p.y * p.y > 1.0) continue;
            img.mask[q] = 1;
            ev.eval_point(p, row);
            double acc = 0.0;
            for (std::size_t m = 0; m < row.size(); ++m) acc += row[m] * alpha.values[m];
            img.values[q] = acc;
        }
    }
    return img;
}

PixelImage average_images(std::span<const PixelImage> images) {
    if (images.empty()) throw std::invalid_argument("average_images: empty batch");
    PixelImage out = images[0];
    for (std::size_t b = 1; b < images.size(); ++b) {
        const PixelImage& img = images[b];
        if (img.n != out.n || img.mask != out.mask)
            throw std::invalid_argument("average_images: incompatible grids");
        for (std::size_t q = 0; q < out.values.size(); ++q) out.values[q] += img.values[q];
    }
    const double inv = 1.0 / static_cast<double>(images.size());
    for (double& v : out.values) v *= inv;
    return out;
}

}  // namespace ntomo
