// hapsgnss command-line scenario runner.
//
//   hapsgnss run <scenario.toml> --out <dir> [--seed N] [--threads N]
//   hapsgnss compare <scenario.toml>... [--out <dir>] [--seed N] [--threads N]
//
// Exit codes: 0 success, 2 scenario validation failure, 3 data error.

#include <hapsgnss/hapsgnss.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitScenario = 2;
constexpr int kExitData = 3;

void print_comparison(const hapsgnss::Comparison& c) {
    std::printf("%-24s %-16s %8s %10s %10s %10s %10s\n", "scenario", "system", "conv", "p50_m",
                "p68_m", "p95_m", "mean_hdop");
    auto cell = [](const std::optional<double>& v) { return v ? *v : std::numeric_limits<double>::quiet_NaN(); };
    for (const auto& row : c.rows) {
        const auto& s = row.summary;
        std::printf("%-24s %-16s %8.3f %10.3f %10.3f %10.3f %10.3f\n", row.scenario.c_str(),
                    std::string(hapsgnss::to_string(s.system)).c_str(), s.convergence_rate,
                    cell(s.median_err3d), cell(s.p68_err3d), cell(s.p95_err3d), cell(s.mean_hdop));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GPS + HAPS single point positioning simulator"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    std::string run_file;
    std::string run_out;
    auto* run = app.add_subcommand("run", "Run one scenario and write CSV outputs");
    run->add_option("scenario", run_file, "Scenario TOML file")->required();
    run->add_option("--out", run_out, "Output directory")->required();
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    std::vector<std::string> cmp_files;
    std::string cmp_out;
    auto* compare = app.add_subcommand("compare", "Compare systems across scenarios");
    compare->add_option("scenarios", cmp_files, "Scenario TOML files")->required();
    compare->add_option("--out", cmp_out, "Directory for comparison.csv and per-scenario outputs");
    compare->add_option("--seed", seed, "Override the master seed");
    compare->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    const hapsgnss::RunOptions opts{threads, seed};
    try {
        if (run->parsed()) {
            const auto scenario = hapsgnss::load_scenario(run_file);
            const auto result = hapsgnss::run_scenario(scenario, opts);
            hapsgnss::write_outputs(result, run_out);
            std::cout << hapsgnss::summary_csv(result);
        } else {
            std::vector<hapsgnss::Scenario> scenarios;
            for (const auto& f : cmp_files) {
                scenarios.push_back(hapsgnss::load_scenario(f));
            }
            if (seed) {
                for (auto& s : scenarios) {
                    s.seed = *seed;
                }
            }
            const auto cmp = hapsgnss::compare_systems(scenarios, {threads, std::nullopt});
            print_comparison(cmp);
            if (!cmp_out.empty()) {
                const std::filesystem::path dir(cmp_out);
                std::filesystem::create_directories(dir);
                hapsgnss::write_text(dir / "comparison.csv", hapsgnss::comparison_csv(cmp));
                for (const auto& r : cmp.runs) {
                    hapsgnss::write_outputs(r, dir / r.scenario);
                }
            }
        }
    } catch (const hapsgnss::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << '\n';
        return kExitScenario;
    } catch (const hapsgnss::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitData;
    } catch (const hapsgnss::Error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
