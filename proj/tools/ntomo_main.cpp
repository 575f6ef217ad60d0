#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>

#include "CLI11.hpp"
#include "ntomo/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string image_name(const std::string& estimator, double epsilon, std::uint64_t seed) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", epsilon);
    return estimator + "_eps" + buf + "_seed" + std::to_string(seed) + ".pgm";
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads,
            bool images) {
    ntomo::ExperimentConfig cfg = ntomo::parse_config_file(config_path);
    if (const char* env = std::getenv("NEEDLET_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 0)
            throw ntomo::ConfigError("bad NEEDLET_THREADS value '" + std::string(env) + "'");
        cfg.threads = static_cast<int>(v);
    }
    if (threads >= 0) cfg.threads = threads;
    cfg.validate();

    std::filesystem::create_directories(out_dir);
    std::mutex sink_mutex;
    ntomo::ImageSink sink;
    if (images) {
        const ntomo::Phantom phantom = ntomo::Phantom::by_name(cfg.phantom);
        const ntomo::PixelImage truth = ntomo::rasterize(
            [&](ntomo::DiskPoint p) { return phantom.density(p); }, cfg.grid_n);
        ntomo::write_pgm(truth, out_dir + "/truth.pgm");
        sink = [&](const std::string& estimator, double epsilon, std::uint64_t seed,
                   const std::string&, const ntomo::PixelImage& image) {
            const std::lock_guard<std::mutex> lock(sink_mutex);
            ntomo::write_pgm(image, out_dir + "/" + image_name(estimator, epsilon, seed));
        };
    }

    const auto rows = ntomo::run_experiment(cfg, sink);
    const std::string csv_path = out_dir + "/results.csv";
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + csv_path + "'");
    ntomo::write_results_csv(rows, out);
    if (!out) throw std::runtime_error("short write on '" + csv_path + "'");
    std::cout << "wrote " << rows.size() << " rows to " << csv_path << '\n';
    return kExitOk;
}

int cmd_render(const std::string& name, int n, const std::string& out_path, bool ascii) {
    const ntomo::Phantom phantom = [&] {
        try {
            return ntomo::Phantom::by_name(name);
        } catch (const std::invalid_argument& e) {
            throw ntomo::ConfigError(e.what());
        }
    }();
    if (n < 8) throw ntomo::ConfigError("--n must be at least 8");
    const ntomo::PixelImage img =
        ntomo::rasterize([&](ntomo::DiskPoint p) { return phantom.density(p); }, n);
    ntomo::write_pgm(img, out_path, ascii);
    std::cout << "wrote " << out_path << '\n';
    return kExitOk;
}

int cmd_dump(const std::string& name, int k_max, int quality, const std::string& out_path) {
    const ntomo::Phantom phantom = [&] {
        try {
            return ntomo::Phantom::by_name(name);
        } catch (const std::invalid_argument& e) {
            throw ntomo::ConfigError(e.what());
        }
    }();
    if (k_max < 1) throw ntomo::ConfigError("--kmax must be positive");
    const ntomo::SvdCoeffs alpha =
        quality > 0 ? ntomo::true_coeffs(phantom, k_max, quality)
                    : ntomo::true_coeffs(phantom, k_max);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    ntomo::write_csv(alpha, out);
    if (!out) throw std::runtime_error("short write on '" + out_path + "'");
    std::cout << "wrote " << out_path << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SVD + needlet thresholding simulator for fan-beam tomography"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run an experiment sweep from a config file");
    std::string config_path;
    std::string out_dir = ".";
    int threads = -1;
    bool images = false;
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--out", out_dir, "output directory (default: current)");
    run->add_option("--threads", threads, "worker threads (0 = hardware)");
    run->add_flag("--images", images, "emit the winning reconstruction per cell as PGM");

    auto* render = app.add_subcommand("render-phantom", "rasterize a phantom to PGM");
    std::string ph_name;
    int render_n = 256;
    std::string render_out;
    bool ascii = false;
    render->add_option("--name", ph_name, "phantom name")->required();
    render->add_option("--n", render_n, "pixels per side")->required();
    render->add_option("--out", render_out, "output .pgm path")->required();
    render->add_flag("--ascii", ascii, "write ASCII (P2) instead of binary (P5)");

    auto* dump = app.add_subcommand("dump-coeffs", "write basis coefficients as CSV");
    std::string dump_name;
    int dump_kmax = 0;
    int dump_quality = 0;
    std::string dump_out;
    dump->add_option("--phantom", dump_name, "phantom name")->required();
    dump->add_option("--kmax", dump_kmax, "degrees 0..kmax-1")->required();
    dump->add_option("--quality", dump_quality, "cubature exactness degree (default 4k+64)");
    dump->add_option("--out", dump_out, "output .csv path")->required();

    auto* self = app.add_subcommand("selftest", "quick numerical sanity checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, threads, images);
        if (render->parsed()) return cmd_render(ph_name, render_n, render_out, ascii);
        if (dump->parsed()) return cmd_dump(dump_name, dump_kmax, dump_quality, dump_out);
        if (self->parsed())
            return ntomo::selftest(std::cout) == 0 ? kExitOk : kExitNumeric;
    } catch (const ntomo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}
