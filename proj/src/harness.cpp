#include "ntomo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <tuple>

#include "ntomo/cubature.hpp"

namespace ntomo {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty element in list '" + s + "'");
        out.push_back(item);
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("bad " + what + " value '" + s + "'");
    return v;
}

long long parse_int(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("bad " + what + " value '" + s + "'");
    return v;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::vector<std::string>& known_estimators() {
    static const std::vector<std::string> names = {"LS", "LN", "TS", "TN", "TN_sup"};
    return names;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (phantom.empty()) throw ConfigError("phantom name is empty");
    if (epsilons.empty()) throw ConfigError("no noise levels");
    for (double e : epsilons)
        if (!(e > 0.0 && e < 1.0))
            throw ConfigError("noise level " + fmt17(e) + " outside (0,1)");
    if (kappas.empty()) throw ConfigError("no threshold constants");
    for (double k : kappas)
        if (!(k > 0.0)) throw ConfigError("threshold constant " + fmt17(k) + " not positive");
    if (norms.empty()) throw ConfigError("no norms");
    for (double p : norms)
        if (!(p >= 1.0))  // infinity passes
            throw ConfigError("norm exponent " + fmt17(p) + " below 1");
    if (estimators.empty()) throw ConfigError("no estimators");
    for (const std::string& est : estimators) {
        const auto& known = known_estimators();
        if (std::find(known.begin(), known.end(), est) == known.end())
            throw ConfigError("unknown estimator '" + est + "'");
        if (std::count(estimators.begin(), estimators.end(), est) != 1)
            throw ConfigError("estimator '" + est + "' listed twice");
    }
    if (seeds.empty()) throw ConfigError("no seeds");
    for (std::uint64_t s : seeds)
        if (std::count(seeds.begin(), seeds.end(), s) != 1)
            throw ConfigError("seed " + std::to_string(s) + " listed twice");
    if (grid_n < 32) throw ConfigError("grid_n below 32");
    if (grid_n > 4096) throw ConfigError("grid_n above 4096");
    if (j_override > 9) throw ConfigError("j_override above 9");
    if (threads < 0) throw ConfigError("threads must be >= 0");
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::map<std::string, bool> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (seen[key]) throw ConfigError("duplicate key '" + key + "'");
        seen[key] = true;

        if (key == "phantom") {
            cfg.phantom = value;
        } else if (key == "epsilons") {
            cfg.epsilons.clear();
            for (const auto& tok : split_list(value))
                cfg.epsilons.push_back(parse_double(tok, "epsilon"));
        } else if (key == "kappas") {
            cfg.kappas.clear();
            for (const auto& tok : split_list(value))
                cfg.kappas.push_back(parse_double(tok, "kappa"));
        } else if (key == "norms") {
            cfg.norms.clear();
            for (const auto& tok : split_list(value)) {
                if (tok == "inf")
                    cfg.norms.push_back(std::numeric_limits<double>::infinity());
                else
                    cfg.norms.push_back(parse_double(tok, "norm"));
            }
        } else if (key == "estimators") {
            cfg.estimators = split_list(value);
        } else if (key == "seeds") {
            cfg.seeds.clear();
            for (const auto& tok : split_list(value)) {
                const long long v = parse_int(tok, "seed");
                if (v < 0) throw ConfigError("negative seed");
                cfg.seeds.push_back(static_cast<std::uint64_t>(v));
            }
        } else if (key == "grid_n") {
            cfg.grid_n = static_cast<int>(parse_int(value, "grid_n"));
        } else if (key == "j_override") {
            cfg.j_override = static_cast<int>(parse_int(value, "j_override"));
        } else if (key == "timing") {
            if (value == "on" || value == "true" || value == "1")
                cfg.timing = true;
            else if (value == "off" || value == "false" || value == "0")
                cfg.timing = false;
            else
                throw ConfigError("bad timing value '" + value + "'");
        } else if (key == "threads") {
            const long long v = parse_int(value, "threads");
            if (v < 0) throw ConfigError("threads must be >= 0");
            cfg.threads = static_cast<int>(v);
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

double lp_error(const PixelImage& truth, const PixelImage& estimate, double p) {
    if (truth.n != estimate.n || truth.mask != estimate.mask)
        throw std::invalid_argument("lp_error: incompatible pixel grids");
    if (!(p >= 1.0)) throw std::domain_error("lp_error: exponent must be >= 1");
    if (std::isinf(p)) {
        double best = 0.0;
        for (std::size_t q = 0; q < truth.values.size(); ++q)
            if (truth.mask[q])
                best = std::max(best, std::abs(truth.values[q] - estimate.values[q]));
        return best;
    }
    const double area = 4.0 / (static_cast<double>(truth.n) * truth.n);
    double acc = 0.0;
    for (std::size_t q = 0; q < truth.values.size(); ++q)
        if (truth.mask[q])
            acc += std::pow(std::abs(truth.values[q] - estimate.values[q]), p) * area;
    return std::pow(acc, 1.0 / p);
}

namespace {

struct CellPlan {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    int j_std = 0;
    int j_sup = 0;
};

class Stopwatch {
  public:
    explicit Stopwatch(bool enabled) : enabled_(enabled) { reset(); }
    void reset() {
        if (enabled_) start_ = std::chrono::steady_clock::now();
    }
    double lap() {
        if (!enabled_) return 0.0;
        const auto now = std::chrono::steady_clock::now();
        const double sec = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return sec;
    }

  private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

struct SweepCollector {
    const ExperimentConfig& cfg;
    const PixelImage& truth;
    const std::string& estimator;
    const CellPlan& cell;
    std::vector<ResultRow>& rows;
    const ImageSink& sink;

    std::vector<double> best_error;  // per norm
    double total_wall = 0.0;
    PixelImage best_image;  // by the first norm
    std::string best_kappa;

    SweepCollector(const ExperimentConfig& cfg_, const PixelImage& truth_,
                   const std::string& est_, const CellPlan& cell_,
                   std::vector<ResultRow>& rows_, const ImageSink& sink_)
        : cfg(cfg_), truth(truth_), estimator(est_), cell(cell_), rows(rows_), sink(sink_),
          best_error(cfg_.norms.size(), std::numeric_limits<double>::infinity()) {}

    void add(const std::string& kappa_label, const PixelImage& img, double wall) {
        total_wall += wall;
        for (std::size_t ni = 0; ni < cfg.norms.size(); ++ni) {
            const double err = lp_error(truth, img, cfg.norms[ni]);
            rows.push_back({estimator, cfg.norms[ni], cell.epsilon, kappa_label, cell.seed,
                            err, wall});
            if (err < best_error[ni]) {
                best_error[ni] = err;
                if (ni == 0 && sink) {
                    best_image = img;
                    best_kappa = kappa_label;
                }
            }
        }
    }

    void finish(const std::string& oracle_label) {
        for (std::size_t ni = 0; ni < cfg.norms.size(); ++ni)
            rows.push_back({estimator, cfg.norms[ni], cell.epsilon, oracle_label, cell.seed,
                            best_error[ni], total_wall});
        if (sink && best_image.n > 0)
            sink(estimator, cell.epsilon, cell.seed, best_kappa, best_image);
    }
};

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const ImageSink& sink) {
    cfg.validate();
    Phantom phantom = [&] {
        try {
            return Phantom::by_name(cfg.phantom);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }();

    const PixelImage truth =
        rasterize([&](DiskPoint p) { return phantom.density(p); }, cfg.grid_n);

    std::vector<CellPlan> cells;
    cells.reserve(cfg.epsilons.size() * cfg.seeds.size());
    int top_j = 0;
    for (double eps : cfg.epsilons) {
        CellPlan plan;
        plan.epsilon = eps;
        plan.j_std = cfg.j_override >= 0 ? cfg.j_override : max_level(eps, LevelRule::standard);
        plan.j_sup = cfg.j_override >= 0 ? cfg.j_override : max_level(eps, LevelRule::sup_norm);
        top_j = std::max({top_j, plan.j_std, plan.j_sup});
        for (std::uint64_t seed : cfg.seeds) {
            plan.seed = seed;
            cells.push_back(plan);
        }
    }

    const bool want_ln = std::count(cfg.estimators.begin(), cfg.estimators.end(), "LN") > 0;
    const bool want_tn = std::count(cfg.estimators.begin(), cfg.estimators.end(), "TN") > 0;
    const bool want_sup =
        std::count(cfg.estimators.begin(), cfg.estimators.end(), "TN_sup") > 0;

    // The resolution rule gives the top detail level J inclusive: needlet
    // estimators carry levels 0..J (frame of J+1 levels, coefficients up to
    // 2^{J+1}), while the SVD-side estimators truncate at the scale 2^J.
    const SvdCoeffs alpha_true = phantom.has_ellipses()
                                     ? exact_ellipse_coeffs(phantom, 1 << (top_j + 1))
                                     : true_coeffs(phantom, 1 << (top_j + 1));

    std::map<int, Frame> frames;
    std::map<int, LevelTable> sigmas;
    std::map<int, LevelTable> sups;
    for (const CellPlan& cell : cells) {
        const int fj = cell.j_std + 1;
        const int fs = cell.j_sup + 1;
        if ((want_ln || want_tn) && !frames.count(fj)) frames.emplace(fj, Frame(fj));
        if (want_tn && !sigmas.count(fj))
            sigmas.emplace(fj, frames.at(fj).noise_profile());
        if (want_sup) {
            if (!frames.count(fs)) frames.emplace(fs, Frame(fs));
            if (!sups.count(fs)) sups.emplace(fs, frames.at(fs).sup_norms());
        }
    }

    std::vector<std::vector<ResultRow>> per_cell(cells.size());
    std::mutex io_mutex;

    auto run_cell = [&](std::size_t ci) {
        const CellPlan& cell = cells[ci];
        std::vector<ResultRow>& rows = per_cell[ci];
        const Observation obs = observe(truncate_coeffs(alpha_true, 1 << (cell.j_std + 1)),
                                        cell.epsilon, cell.seed);
        Stopwatch watch(cfg.timing);

        for (const std::string& est : cfg.estimators) {
            try {
                SweepCollector sweep(cfg, truth, est, cell, rows, sink);
                if (est == "LS") {
                    for (int jc = 0; jc <= cell.j_std; ++jc) {
                        watch.reset();
                        const PixelImage img =
                            reconstruct(linear_svd(obs, 1 << jc), cfg.grid_n);
                        sweep.add(std::to_string(1 << jc), img, watch.lap());
                    }
                    sweep.finish("oracle_scale");
                } else if (est == "LN") {
                    const Frame& frame = frames.at(cell.j_std + 1);
                    watch.reset();
                    const NeedletCoeffs beta = frame.analysis(obs.alpha_hat);
                    const double analysis_wall = watch.lap();
                    sweep.total_wall += analysis_wall;
                    for (int jc = 0; jc <= cell.j_std + 1; ++jc) {
                        watch.reset();
                        NeedletCoeffs kept = beta;
                        for (int j = jc; j < frame.levels(); ++j)
                            std::fill(kept.levels[j].begin(), kept.levels[j].end(), 0.0);
                        const PixelImage img =
                            reconstruct(frame.synthesis(kept, 1 << jc), cfg.grid_n);
                        sweep.add(std::to_string(1 << jc), img, watch.lap());
                    }
                    sweep.finish("oracle_scale");
                } else if (est == "TS") {
                    for (double kappa : cfg.kappas) {
                        watch.reset();
                        const ThresholdPolicy policy{kappa, cell.epsilon, false};
                        const PixelImage img = reconstruct(
                            threshold_svd(obs, policy, 1 << cell.j_std), cfg.grid_n);
                        sweep.add(fmt17(kappa), img, watch.lap());
                    }
                    sweep.finish("oracle_kappa");
                } else if (est == "TN") {
                    const Frame& frame = frames.at(cell.j_std + 1);
                    const LevelTable& sigma = sigmas.at(cell.j_std + 1);
                    for (double kappa : cfg.kappas) {
                        watch.reset();
                        const ThresholdPolicy policy{kappa, cell.epsilon, false};
                        const NeedletCoeffs beta =
                            threshold_needlet(obs, policy, frame, sigma);
                        const PixelImage img = reconstruct(
                            frame.synthesis(beta, frame.coeff_k_max()), cfg.grid_n);
                        sweep.add(fmt17(kappa), img, watch.lap());
                    }
                    sweep.finish("oracle_kappa");
                } else if (est == "TN_sup") {
                    const Frame& frame = frames.at(cell.j_sup + 1);
                    const LevelTable& sup = sups.at(cell.j_sup + 1);
                    for (double kappa : cfg.kappas) {
                        watch.reset();
                        const ThresholdPolicy policy{kappa, cell.epsilon, false};
                        const NeedletCoeffs beta =
                            threshold_needlet_sup(obs, policy, frame, sup);
                        const PixelImage img = reconstruct(
                            frame.synthesis(beta, frame.coeff_k_max()), cfg.grid_n);
                        sweep.add(fmt17(kappa), img, watch.lap());
                    }
                    sweep.finish("oracle_kappa");
                }
            } catch (const std::exception& e) {
                {
                    std::lock_guard<std::mutex> lock(io_mutex);
                    std::cerr << "cell failed: estimator " << est << ", epsilon "
                              << cell.epsilon << ", seed " << cell.seed << ": " << e.what()
                              << '\n';
                }
                rows.push_back({est, 0.0, cell.epsilon, "failed", cell.seed, 0.0, 0.0});
            }
        }
    };

    int thread_count = cfg.threads;
    if (thread_count == 0)
        thread_count = std::max(1u, std::thread::hardware_concurrency());
    thread_count = std::min<int>(thread_count, static_cast<int>(cells.size()));

    if (thread_count <= 1) {
        for (std::size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int t = 0; t < thread_count; ++t)
            pool.emplace_back([&] {
                for (std::size_t ci = next.fetch_add(1); ci < cells.size();
                     ci = next.fetch_add(1))
                    run_cell(ci);
            });
        for (std::thread& th : pool) th.join();
    }

    std::vector<ResultRow> rows;
    for (auto& chunk : per_cell)
        for (auto& row : chunk) rows.push_back(std::move(row));

    auto kappa_key = [](const std::string& s) -> std::pair<int, double> {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() && *end == '\0') return {0, v};
        return {1, 0.0};
    };
    std::stable_sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) {
        if (a.estimator != b.estimator) return a.estimator < b.estimator;
        if (a.p != b.p) return a.p < b.p;
        if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
        const auto ka = kappa_key(a.kappa);
        const auto kb = kappa_key(b.kappa);
        if (ka.first != kb.first) return ka.first < kb.first;
        if (ka.first == 0 && ka.second != kb.second) return ka.second < kb.second;
        if (ka.first == 1 && a.kappa != b.kappa) return a.kappa < b.kappa;
        return a.seed < b.seed;
    });
    return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    return run_experiment(cfg, ImageSink{});
}

void write_results_csv(std::span<const ResultRow> rows, std::ostream& out) {
    out << "estimator,p,epsilon,kappa,seed,error,wall_time\n";
    for (const ResultRow& row : rows) {
        out << row.estimator << ',' << fmt17(row.p) << ',' << fmt17(row.epsilon) << ','
            << row.kappa << ',' << row.seed << ',' << fmt17(row.error) << ','
            << fmt17(row.wall_time) << '\n';
    }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "estimator,p,epsilon,kappa,seed,error,wall_time")
        throw std::runtime_error("results csv: bad header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string item;
        std::istringstream is(line);
        while (std::getline(is, item, ',')) fields.push_back(item);
        if (fields.size() != 7) throw std::runtime_error("results csv: bad row: " + line);
        ResultRow row;
        row.estimator = fields[0];
        row.p = std::strtod(fields[1].c_str(), nullptr);
        row.epsilon = std::strtod(fields[2].c_str(), nullptr);
        row.kappa = fields[3];
        row.seed = std::strtoull(fields[4].c_str(), nullptr, 10);
        row.error = std::strtod(fields[5].c_str(), nullptr);
        row.wall_time = std::strtod(fields[6].c_str(), nullptr);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_pgm(const PixelImage& img, const std::string& path, bool ascii) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < img.values.size(); ++q) {
        if (!img.mask[q]) continue;
        lo = std::min(lo, img.values[q]);
        hi = std::max(hi, img.values[q]);
    }
    if (!(lo <= hi)) {  // fully masked grid
        lo = 0.0;
        hi = 0.0;
    }
    const double span = hi - lo;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image file '" + path + "'");
    out << (ascii ? "P2" : "P5") << '\n' << img.n << ' ' << img.n << '\n' << "255\n";
    std::size_t q = 0;
    for (int r = 0; r < img.n; ++r) {
        for (int c = 0; c < img.n; ++c, ++q) {
            int byte = 0;
            if (img.mask[q]) {
                const double unit =
                    span > 0.0 ? (img.values[q] - lo) / span : 0.5;
                byte = static_cast<int>(std::lround(255.0 * unit));
                byte = std::clamp(byte, 0, 255);
            }
            if (ascii)
                out << byte << (c + 1 == img.n ? '\n' : ' ');
            else
                out.put(static_cast<char>(static_cast<unsigned char>(byte)));
        }
    }
    if (!out) throw std::runtime_error("short write on image file '" + path + "'");
    out.close();

    std::ofstream side(path + ".range.txt");
    if (!side) throw std::runtime_error("cannot write sidecar for '" + path + "'");
    side << fmt17(lo) << ' ' << fmt17(hi) << '\n';
}

}  // namespace ntomo
