#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ntomo/estimators.hpp"

namespace ntomo {

// Anything wrong with user-supplied configuration; the CLI maps it to its
// configuration exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string phantom = "shepp_logan";
    std::vector<double> epsilons = {0.001, 0.002, 0.004, 0.008, 0.016, 0.032, 0.064};
    std::vector<double> kappas = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 7.0};
    // Lebesgue exponents; infinity means the max norm.
    std::vector<double> norms = {1.0, 2.0, 4.0, 6.0, 8.0, 10.0,
                                 std::numeric_limits<double>::infinity()};
    std::vector<std::string> estimators = {"LS", "LN", "TS", "TN", "TN_sup"};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    int grid_n = 256;
    int j_override = -1;  // <0: pick per-epsilon from the level rules
    bool timing = true;   // off: wall_time column written as 0 for byte-stable output
    int threads = 0;      // 0: hardware concurrency

    void validate() const;  // throws ConfigError
};

// Flat "key = value" file; '#' starts a comment, lists are comma-separated,
// norms accept "inf".  Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

struct ResultRow {
    std::string estimator;
    double p = 0.0;
    double epsilon = 0.0;
    std::string kappa;  // swept value, or oracle_kappa / oracle_scale
    std::uint64_t seed = 0;
    double error = 0.0;
    double wall_time = 0.0;
};

// Weighted L^p distance between masked images on the pixel measure
// (2/n)^2; p = infinity gives the max over masked pixels.
double lp_error(const PixelImage& truth, const PixelImage& estimate, double p);

// Full sweep: estimators x epsilons x seeds x swept parameter, plus per-
// estimator oracle rows (arg-min of the true error over the sweep).  Rows
// come back sorted by (estimator, p, epsilon, kappa, seed).
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

// Callback fed, per estimator and cell, with the reconstruction that won the
// first configured norm; invoked from worker threads, may run concurrently.
using ImageSink = std::function<void(const std::string& estimator, double epsilon,
                                     std::uint64_t seed, const std::string& kappa,
                                     const PixelImage& image)>;
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const ImageSink& sink);

// Fast end-to-end sanity sweep; logs one line per check and returns the
// number of failures.
int selftest(std::ostream& log);

// Header "estimator,p,epsilon,kappa,seed,error,wall_time", 17 significant
// digits, LF line endings.
void write_results_csv(std::span<const ResultRow> rows, std::ostream& out);
std::vector<ResultRow> read_results_csv(std::istream& in);

// 8-bit PGM (binary P5, or ASCII P2) plus a "<path>.range.txt" sidecar with
// the min and max that map to 0 and 255.
void write_pgm(const PixelImage& img, const std::string& path, bool ascii = false);

}  // namespace ntomo
