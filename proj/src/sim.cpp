#include "ntomo/sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "ntomo/cubature.hpp"

namespace ntomo {
namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

// Head geometry scaled to keep the outer ellipse strictly inside the unit
// disk (vertical extent 0.92 * 0.95 = 0.874).
constexpr double kHeadScale = 0.95;

bool inside(const Ellipse& e, DiskPoint p) {
    const double dx = p.x - e.cx;
    const double dy = p.y - e.cy;
    const double c = std::cos(e.phi);
    const double s = std::sin(e.phi);
    const double u = (dx * c + dy * s) / e.a;
    const double v = (-dx * s + dy * c) / e.b;
    return u * u + v * v <= 1.0;
}

}  // namespace

Phantom Phantom::from_ellipses(std::string name, std::vector<Ellipse> parts) {
    for (const Ellipse& e : parts) {
        if (!(e.a > 0.0) || !(e.b > 0.0))
            throw std::invalid_argument("phantom: ellipse semi-axes must be positive");
        const double reach = std::hypot(std::abs(e.cx), std::abs(e.cy)) + std::max(e.a, e.b);
        if (reach > 1.0 + 1e-9)
            throw std::invalid_argument("phantom: ellipse leaves the unit disk");
    }
    Phantom ph;
    ph.name_ = std::move(name);
    ph.parts_ = std::move(parts);
    return ph;
}

Phantom Phantom::from_function(std::string name, std::function<double(DiskPoint)> fn) {
    if (!fn) throw std::invalid_argument("phantom: empty density function");
    Phantom ph;
    ph.name_ = std::move(name);
    ph.fn_ = std::move(fn);
    return ph;
}

Phantom Phantom::shepp_logan() {
    // Classic ten-ellipse head table (angles in degrees), uniformly scaled.
    const double k = kHeadScale;
    std::vector<Ellipse> parts = {
        {0.0, 0.0, 0.69, 0.92, 0.0, 2.0},
        {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.98},
        {0.22, 0.0, 0.11, 0.31, -18.0 * kDegree, -0.02},
        {-0.22, 0.0, 0.16, 0.41, 18.0 * kDegree, -0.02},
        {0.0, 0.35, 0.21, 0.25, 0.0, 0.01},
        {0.0, 0.1, 0.046, 0.046, 0.0, 0.01},
        {0.0, -0.1, 0.046, 0.046, 0.0, 0.01},
        {-0.08, -0.605, 0.046, 0.023, 0.0, 0.01},
        {0.0, -0.605, 0.023, 0.023, 0.0, 0.01},
        {0.06, -0.605, 0.023, 0.046, 0.0, 0.01},
    };
    for (Ellipse& e : parts) {
        e.cx *= k;
        e.cy *= k;
        e.a *= k;
        e.b *= k;
    }
    return from_ellipses("shepp_logan", std::move(parts));
}

Phantom Phantom::disk() {
    return from_ellipses("disk", {Ellipse{0.0, 0.0, 1.0, 1.0, 0.0, 1.0}});
}

Phantom Phantom::smooth_bump() {
    return from_function("smooth_bump", [](DiskPoint p) {
        const double r2 = p.x * p.x + p.y * p.y;
        return r2 < 1.0 ? std::exp(-r2 / (1.0 - r2)) : 0.0;
    });
}

const std::vector<std::string>& Phantom::known_names() {
    static const std::vector<std::string> names = {"shepp_logan", "disk", "smooth_bump"};
    return names;
}

Phantom Phantom::by_name(const std::string& name) {
    if (name == "shepp_logan") return shepp_logan();
    if (name == "disk") return disk();
    if (name == "smooth_bump") return smooth_bump();
    throw std::invalid_argument("phantom: unknown name '" + name + "'");
}

double Phantom::density(DiskPoint p) const {
    if (fn_) return fn_(p);
    double acc = 0.0;
    for (const Ellipse& e : parts_)
        if (inside(e, p)) acc += e.intensity;
    return acc;
}

const std::vector<Ellipse>& Phantom::ellipses() const {
    if (parts_.empty())
        throw std::logic_error("phantom '" + name_ + "' has no ellipse decomposition");
    return parts_;
}

double radon_analytic(const Phantom& phantom, double theta, double s) {
    if (!phantom.has_ellipses())
        throw std::invalid_argument("radon_analytic: phantom '" + phantom.name() +
                                    "' has no analytic projections");
    if (!std::isfinite(theta) || !std::isfinite(s))
        throw std::domain_error("radon_analytic: non-finite arguments");
    double acc = 0.0;
    for (const Ellipse& e : phantom.ellipses()) {
        const double rel = theta - e.phi;
        const double c = std::cos(rel);
        const double si = std::sin(rel);
        const double rho2 = e.a * e.a * c * c + e.b * e.b * si * si;
        const double sp = s - (e.cx * std::cos(theta) + e.cy * std::sin(theta));
        const double gap = rho2 - sp * sp;
        if (gap > 0.0) acc += 2.0 * e.intensity * e.a * e.b * std::sqrt(gap) / rho2;
    }
    return acc;
}

int default_quality_degree(int k_max) { return 4 * k_max + 64; }

SvdCoeffs true_coeffs(const Phantom& phantom, int k_max, int quality_degree) {
    if (k_max < 1) throw std::domain_error("true_coeffs: k_max must be positive");
    // discontinuous densities need real oversampling, not bare exactness
    if (quality_degree < 2 * k_max + 16)
        throw std::domain_error("true_coeffs: quality degree below 2*k_max + 16");
    const DiskCubature cub = disk_cubature(quality_degree);
    const BasisEvaluator ev(k_max);
    SvdCoeffs alpha = SvdCoeffs::zeros(k_max);
    std::vector<double> row(ev.count());
    for (std::size_t q = 0; q < cub.nodes.size(); ++q) {
        const double fv = phantom.density(cub.nodes[q]);
        if (!std::isfinite(fv)) throw_nonfinite_integrand(cub.nodes[q]);
        if (fv == 0.0) continue;
        ev.eval_point(cub.nodes[q], row);
        const double wfv = cub.weights[q] * fv;
        for (std::size_t m = 0; m < row.size(); ++m) alpha.values[m] += wfv * row[m];
    }
    return alpha;
}

SvdCoeffs exact_ellipse_coeffs(const Phantom& phantom, int k_max) {
    if (k_max < 1) throw std::domain_error("exact_ellipse_coeffs: k_max must be positive");
    const std::vector<Ellipse>& parts = phantom.ellipses();
    const DiskCubature cub = disk_cubature(k_max);
    const BasisEvaluator ev(k_max);
    SvdCoeffs alpha = SvdCoeffs::zeros(k_max);
    std::vector<double> row(ev.count());
    for (const Ellipse& e : parts) {
        const double c = std::cos(e.phi);
        const double s = std::sin(e.phi);
        const double scale = e.intensity * e.a * e.b;
        for (std::size_t q = 0; q < cub.nodes.size(); ++q) {
            const double u = e.a * cub.nodes[q].x;
            const double v = e.b * cub.nodes[q].y;
            const DiskPoint p{e.cx + c * u - s * v, e.cy + s * u + c * v};
            ev.eval_point(p, row);
            const double w = scale * cub.weights[q];
            for (std::size_t m = 0; m < row.size(); ++m) alpha.values[m] += w * row[m];
        }
    }
    return alpha;
}

SvdCoeffs true_coeffs(const Phantom& phantom, int k_max) {
    return true_coeffs(phantom, k_max, default_quality_degree(k_max));
}

Observation observe(const SvdCoeffs& alpha, double epsilon, std::uint64_t seed) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("observe: noise level must lie in (0,1)");
    Observation obs;
    obs.epsilon = epsilon;
    obs.seed = seed;
    obs.alpha_hat = alpha;
    std::size_t pos = 0;
    for (int k = 0; k < alpha.k_max; ++k) {
        const double level = epsilon / eigenvalue(k);
        for (int c = 0; c <= k; ++c, ++pos)
            obs.alpha_hat.values[pos] += level * rng::gaussian(seed, pos);
    }
    return obs;
}

Observation noiseless_observation(const SvdCoeffs& alpha) {
    Observation obs;
    obs.epsilon = 0.0;
    obs.seed = 0;
    obs.alpha_hat = alpha;
    return obs;
}

SvdCoeffs truncate_coeffs(const SvdCoeffs& alpha, int k_max) {
    if (k_max > alpha.k_max)
        throw std::invalid_argument("truncate_coeffs: cannot extend coefficients");
    SvdCoeffs out = SvdCoeffs::zeros(k_max);
    for (std::size_t q = 0; q < out.values.size(); ++q) out.values[q] = alpha.values[q];
    return out;
}

namespace rng {

std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t bits) {
    // bin midpoints of the top 52 bits: both endpoints stay representable,
    // so the result is strictly inside (0,1) even for the extreme inputs
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1p-52;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: argument must lie in (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                      6.7265770927008700853e4) *
                         r +
                     4.5921953931549871457e4) *
                        r +
                    1.3731693765509461125e4) *
                       r +
                   1.9715909503065514427e3) *
                      r +
                  1.3314166789178437745e2) *
                     r +
                 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) *
                     r +
                 2.1213794301586595867e4) *
                    r +
                5.3941960214247511077e3) *
                   r +
               6.8718700749205790830e2) *
                  r +
              4.2313330701600911252e1) *
                 r +
             1.0);
        return num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) *
                     r +
                 1.27045825245236838258e0) *
                    r +
                3.64784832476320460504e0) *
                   r +
               5.76949722146069140550e0) *
                  r +
              4.63033784615654529590e0) *
                 r +
             1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) *
                     r +
                 1.48103976427480074590e-1) *
                    r +
                6.89767334985100004550e-1) *
                   r +
               1.67638483018380384940e0) *
                  r +
              2.05319162663775882187e0) *
                 r +
             1.0);
        value = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) *
                     r +
                 2.65321895265761230930e-2) *
                    r +
                2.96560571828504891230e-1) *
                   r +
               1.78482653991729133580e0) *
                  r +
              5.46378491116411436990e0) *
                 r +
             6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) *
                     r +
                 7.86869131145613259100e-4) *
                    r +
                1.48753612908506148525e-2) *
                   r +
               1.36929880922735805310e-1) *
                  r +
              5.99832206555887937690e-1) *
                 r +
             1.0);
        value = num / den;
    }
    return (q < 0.0) ? -value : value;
}

double gaussian(std::uint64_t seed, std::uint64_t counter) {
    return normal_quantile(uniform01(mix(seed, counter)));
}

}  // namespace rng
}  // namespace ntomo
