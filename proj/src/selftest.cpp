#include <cmath>
#include <numbers>
#include <ostream>

#include "ntomo/harness.hpp"
#include "ntomo/orthopoly.hpp"

namespace ntomo {
namespace {

struct Checker {
    std::ostream& log;
    int failures = 0;

    void check(const char* what, bool ok) {
        log << (ok ? "ok   " : "FAIL ") << what << '\n';
        if (!ok) ++failures;
    }
    void close(const char* what, double got, double want, double tol) {
        const bool ok = std::isfinite(got) && std::abs(got - want) <= tol;
        log << (ok ? "ok   " : "FAIL ") << what;
        if (!ok) log << " (got " << got << ", want " << want << ")";
        log << '\n';
        if (!ok) ++failures;
    }
};

}  // namespace

int selftest(std::ostream& log) {
    Checker c{log};
    try {
        c.close("jacobi value at the right endpoint", jacobi_eval(5, {0.0, 3.0}, 1.0), 1.0,
                1e-12);
        c.close("jacobi squared norm", jacobi_norm(0, {0.0, 1.0}), 2.0, 1e-12);
        c.close("gegenbauer squared norm at lambda=1",
                gegenbauer_norm(3, {1.0}), std::numbers::pi / 2.0, 1e-12);

        const QuadRule r1 = gauss_radial(1);
        c.close("one-point radial rule node", r1.nodes[0], 2.0 / 3.0, 1e-14);
        c.close("one-point radial rule weight", r1.weights[0], 0.5, 1e-14);

        const DiskCubature cub = disk_cubature(8);
        c.close("disk cubature integrates 1 to the disk area",
                integrate(cub, [](DiskPoint) { return 1.0; }), std::numbers::pi, 1e-12);

        c.close("cut-off midpoint symmetry", filter_a(0.75), 0.5, 1e-12);
        c.close("band filter at 1", filter_b(1.0), 1.0, 1e-12);
        double partition = 0.0;
        for (int j = 0; j < 12; ++j) partition += filter_b(3.7 * std::ldexp(1.0, -j));
        c.close("band filters sum to one", partition, 1.0, 1e-12);

        // Round trip through the frame is the identity on the lower bands.
        const int J = 3;
        const Frame frame(J);
        SvdCoeffs alpha = SvdCoeffs::zeros(frame.coeff_k_max());
        for (std::size_t q = 0; q < alpha.values.size(); ++q)
            alpha.values[q] = 2.0 * rng::uniform01(rng::mix(7, q)) - 1.0;
        const SvdCoeffs back = frame.synthesis(frame.analysis(alpha), frame.coeff_k_max());
        double worst = 0.0;
        for (const SvdIndex idx : enumerate_indices((1 << (J - 1)) + 1))
            worst = std::max(worst, std::abs(back.at(idx) - alpha.at(idx)));
        c.close("frame round trip on resolved degrees", worst, 0.0, 1e-10);

        c.close("normal quantile at the median", rng::normal_quantile(0.5), 0.0, 1e-15);
        c.close("normal quantile upper tail", rng::normal_quantile(0.975),
                1.959963984540054, 1e-9);

        const Observation a = observe(alpha, 0.01, 42);
        const Observation b = observe(alpha, 0.01, 42);
        const Observation d = observe(alpha, 0.01, 43);
        c.check("observation noise is reproducible", a.alpha_hat.values == b.alpha_hat.values);
        c.check("observation noise varies with the seed",
                a.alpha_hat.values != d.alpha_hat.values);

        // A tiny sweep exercises the full pipeline.
        ExperimentConfig cfg;
        cfg.epsilons = {0.064};
        cfg.kappas = {3.0};
        cfg.norms = {2.0};
        cfg.seeds = {1};
        cfg.grid_n = 32;
        cfg.timing = false;
        cfg.threads = 1;
        const auto rows = run_experiment(cfg);
        bool all_finite = !rows.empty();
        for (const ResultRow& row : rows)
            if (!std::isfinite(row.error) || row.kappa == "failed") all_finite = false;
        c.check("experiment sweep produces finite errors", all_finite);
    } catch (const std::exception& e) {
        log << "FAIL unexpected exception: " << e.what() << '\n';
        ++c.failures;
    }
    log << (c.failures == 0 ? "selftest passed" : "selftest FAILED") << '\n';
    return c.failures;
}

}  // namespace ntomo
