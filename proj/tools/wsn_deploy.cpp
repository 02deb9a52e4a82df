// wsn_deploy: run RL / MERL / LORL on a scenario file and write the
// deployment, trace and summary files.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <wsndeploy/wsndeploy.hpp>

namespace fs = std::filesystem;
using namespace wsndeploy;

namespace {

struct Config {
    std::string scenario_path;
    std::string algorithm = "rl";
    std::string grid = "100x100";
    std::uint64_t seed = 1;
    std::string init = "random";
    std::optional<double> epsilon;
    std::optional<std::size_t> max_iters;
    std::string out_dir = "out";
    std::size_t batch_seeds = 0;
};

GridResolution parse_grid(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw invalid_parameter("grid: expected WxH, got '" + text + "'");
    try {
        std::size_t used = 0;
        const long w = std::stol(text.substr(0, x), &used);
        if (used != x) throw std::invalid_argument("w");
        const std::string rest = text.substr(x + 1);
        const long h = std::stol(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("h");
        if (w < 2 || h < 2) throw invalid_parameter("grid: both dimensions must be at least 2");
        return {static_cast<std::size_t>(w), static_cast<std::size_t>(h)};
    } catch (const invalid_parameter&) {
        throw;
    } catch (const std::exception&) {
        throw invalid_parameter("grid: expected WxH, got '" + text + "'");
    }
}

std::vector<Point2> initial_positions(const Config& cfg, const Scenario& s, std::uint64_t seed) {
    if (cfg.init == "random") return random_positions(s.region, s.num_nodes(), seed);
    std::ifstream in(cfg.init);
    if (!in) throw config_error("init: cannot open '" + cfg.init + "'");
    auto p = read_positions_csv(in);
    if (p.size() != s.num_nodes()) {
        throw config_error("init: expected " + std::to_string(s.num_nodes()) + " positions, got " +
                           std::to_string(p.size()));
    }
    return p;
}

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw config_error("out: cannot create directory '" + dir.string() + "'");
    const fs::path probe = dir / ".write-test";
    {
        std::ofstream f(probe);
        if (!f) throw config_error("out: directory '" + dir.string() + "' is not writable");
    }
    fs::remove(probe, ec);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw config_error("out: write failed for '" + path.string() + "'");
}

RunSummary run_one(const Config& cfg, const Scenario& s, Algorithm algo, const DiscretizedField& field,
                   GridResolution grid, std::uint64_t seed, const fs::path& dir) {
    const RunResult r = run(algo, s, field, initial_positions(cfg, s, seed));
    const RunSummary sum = summarize(s, algo, seed, grid, r);

    std::ostringstream dep, trace, summary;
    write_deployment_csv(dep, r.deployment, s.num_aps);
    write_trace_csv(trace, r.trace, s.move_costs, s.num_nodes());
    write_summary_json(summary, sum);
    write_file(dir / "deployment.csv", dep.str());
    write_file(dir / "trace.csv", trace.str());
    write_file(dir / "summary.json", summary.str());
    return sum;
}

void print(const RunSummary& s, const fs::path& dir) {
    std::printf("%s seed=%llu D=%.6g W iterations=%zu %s -> %s\n", to_string(s.algorithm),
                static_cast<unsigned long long>(s.seed), s.final_objective, s.iterations, to_string(s.termination),
                dir.string().c_str());
}

int execute(const Config& cfg) {
    const Algorithm algo = parse_algorithm(cfg.algorithm);
    const GridResolution grid = parse_grid(cfg.grid);
    Scenario s = load_scenario(cfg.scenario_path);
    if (cfg.epsilon) s.epsilon = *cfg.epsilon;
    if (cfg.max_iters) s.max_iters = *cfg.max_iters;
    validate_for(s, algo);
    const DiscretizedField field = discretize(s.region, s.density, grid);

    const fs::path out(cfg.out_dir);
    prepare_dir(out);
    if (cfg.batch_seeds == 0) {
        print(run_one(cfg, s, algo, field, grid, cfg.seed, out), out);
        return 0;
    }

    // Independent seeds, each in its own directory; a few at a time.
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<RunSummary>> pending;
    std::vector<fs::path> dirs;
    for (std::size_t k = 0; k < cfg.batch_seeds; ++k) {
        const std::uint64_t seed = cfg.seed + k;
        dirs.push_back(out / ("seed-" + std::to_string(seed)));
        prepare_dir(dirs.back());
    }
    for (std::size_t start = 0; start < cfg.batch_seeds; start += workers) {
        pending.clear();
        const std::size_t stop = std::min(cfg.batch_seeds, start + workers);
        for (std::size_t k = start; k < stop; ++k) {
            pending.push_back(std::async(std::launch::async, [&, k] {
                return run_one(cfg, s, algo, field, grid, cfg.seed + k, dirs[k]);
            }));
        }
        for (std::size_t k = start; k < stop; ++k) print(pending[k - start].get(), dirs[k]);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Routing-aware deployment optimization for multi-hop sensor networks"};
    Config cfg;
    double epsilon = 1e-4;
    std::size_t max_iters = 200;
    app.add_option("--config", cfg.scenario_path, "Scenario file (JSON)")->required();
    app.add_option("--algorithm", cfg.algorithm, "rl, merl or lorl")->capture_default_str();
    app.add_option("--grid", cfg.grid, "Quadrature grid WxH")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Random seed for the initial deployment")->capture_default_str();
    app.add_option("--init", cfg.init, "'random' or a CSV file of x_m,y_m rows")->capture_default_str();
    auto* eps = app.add_option("--epsilon", epsilon, "Relative convergence threshold")->capture_default_str();
    auto* iters = app.add_option("--max-iters", max_iters, "Iteration cap")->capture_default_str();
    app.add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
    app.add_option("--batch-seeds", cfg.batch_seeds, "Run N seeds starting at --seed, one directory each");
    CLI11_PARSE(app, argc, argv);
    if (eps->count() > 0) cfg.epsilon = epsilon;
    if (iters->count() > 0) cfg.max_iters = max_iters;

    try {
        return execute(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
