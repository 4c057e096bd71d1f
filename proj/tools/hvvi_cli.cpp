#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hvvi/catalog.hpp"
#include "hvvi/errors.hpp"
#include "hvvi/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertionFailure = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hvvi::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed_override,
            std::optional<std::string> output_dir_override, std::optional<int> workers_override) {
    hvvi::runner::ExperimentConfig config = hvvi::runner::parse_config(read_file(config_path));
    if (seed_override) config.seed = *seed_override;
    if (workers_override) config.workers = *workers_override;

    // Output directory precedence: --output-dir flag, HVVI_OUTPUT_DIR, config.
    std::string output_dir = config.output_dir;
    if (const char* env = std::getenv("HVVI_OUTPUT_DIR")) output_dir = env;
    if (output_dir_override) output_dir = *output_dir_override;

    const hvvi::runner::RunReport report = hvvi::runner::run(config);
    const int exit_code = hvvi::runner::write_outputs(report, output_dir);

    for (const auto& suite : report.suites) {
        std::cout << hvvi::runner::to_string(suite.suite) << ": " << suite.verdict
                  << (suite.licensed ? "" : " (informational)") << "  worst_margin="
                  << suite.worst_margin << "  [" << suite.wall_seconds << "s]\n";
        for (const std::string& note : suite.notes) std::cout << "  - " << note << "\n";
    }
    std::cout << "report: " << output_dir << "/report.json\n";
    return exit_code == 0 ? kExitOk : kExitAssertionFailure;
}

int cmd_list_catalog() {
    for (const auto& entry : hvvi::catalog::entries()) {
        std::cout << entry.id << "\n  " << entry.summary << "\n  manifold: ";
        if (entry.manifold.kind == hvvi::geom::ManifoldKind::PoincareHalfPlane)
            std::cout << "poincare-half-plane";
        else
            std::cout << "euclidean-" << entry.manifold.dim;
        std::cout << "  objectives: " << entry.F.size()
                  << "  status: " << hvvi::catalog::to_string(entry.status)
                  << "\n  region: geodesic ball, center (";
        for (std::size_t i = 0; i < entry.region.center.coords.size(); ++i)
            std::cout << (i ? ";" : "") << entry.region.center.coords[i];
        std::cout << "), radius " << entry.region.radius << "\n";
    }
    return kExitOk;
}

int cmd_describe(const std::string& suite_name) {
    for (hvvi::runner::Suite suite : hvvi::runner::all_suites()) {
        if (hvvi::runner::to_string(suite) == suite_name) {
            std::cout << suite_name << ": " << hvvi::runner::describe(suite) << "\n";
            return kExitOk;
        }
    }
    std::cerr << "unknown suite '" << suite_name << "'; available:";
    for (hvvi::runner::Suite suite : hvvi::runner::all_suites())
        std::cerr << " " << hvvi::runner::to_string(suite);
    std::cerr << "\n";
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convexificator-based nonsmooth analysis and vector variational "
                 "inequalities on Hadamard manifolds"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> output_dir_override;
    std::optional<int> workers_override;

    CLI::App* run = app.add_subcommand("run", "execute the suites of a JSON config");
    run->add_option("config", config_path, "path to the JSON configuration")->required();
    run->add_option("--seed", seed_override, "override the config seed");
    run->add_option("--output-dir", output_dir_override,
                    "override the output directory (also: HVVI_OUTPUT_DIR)");
    run->add_option("--workers", workers_override, "override the worker count")
        ->check(CLI::PositiveNumber);

    CLI::App* list = app.add_subcommand("list-catalog", "list built-in problem instances");

    std::string suite_name;
    CLI::App* describe = app.add_subcommand("describe", "describe a suite");
    describe->add_option("suite", suite_name, "suite name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed())
            return cmd_run(config_path, seed_override, output_dir_override, workers_override);
        if (list->parsed()) return cmd_list_catalog();
        if (describe->parsed()) return cmd_describe(suite_name);
    } catch (const hvvi::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hvvi::NotFoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
