// vielbein: evaluate field-equation and identity checks over point grids.
//
// Exit status: 0 all checks pass, 1 a check exceeded its tolerance,
// 2 bad command line or config, 3 evaluation failed at some point.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vielbein/driver.hpp"
#include "vielbein/errors.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitEvaluation = 3;

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw vielbein::ConfigError("cannot write " + path.string());
    out << text;
    if (!out) throw vielbein::ConfigError("failed writing " + path.string());
}

int run(const std::string& config_path, const std::string& out_dir, bool csv, const std::optional<std::uint64_t>& seed) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw vielbein::ConfigError("cannot read " + config_path);
    std::stringstream text;
    text << in.rdbuf();

    vielbein::JobConfig job = vielbein::parse_job(text.str());
    if (seed) job.seed = *seed;
    if (csv) job.write_csv = true;
    if (!out_dir.empty()) job.out_dir = out_dir;

    const vielbein::JobResult result = vielbein::run_job(job);
    const std::filesystem::path dir = job.out_dir.value_or(".");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw vielbein::ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    write_file(dir / job.report_name, result.report_json);
    if (job.write_csv) write_file(dir / job.csv_name, result.csv);
    std::cout << (result.pass ? "PASS" : "FAIL") << "  report: " << (dir / job.report_name).string() << "\n";
    return result.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vielbein gravity checks over point grids"};
    app.set_version_flag("--version", vielbein::kToolVersion);
    bool list = false;
    app.add_flag("--list-solutions", list, "List the named solutions and their parameters");

    auto* run_cmd = app.add_subcommand("run", "Run the checks described by a JSON config");
    std::string config_path, out_dir;
    bool csv = false;
    std::optional<std::uint64_t> seed;
    run_cmd->add_option("config", config_path, "Job description (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "Directory for the report and CSV (overrides the config)");
    run_cmd->add_flag("--csv", csv, "Also write the per-point CSV dump");
    run_cmd->add_option("--seed", seed, "Random seed (overrides the config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    if (list) {
        std::cout << vielbein::solutions_listing();
        return kExitPass;
    }
    if (!*run_cmd) {
        std::cerr << app.help();
        return kExitConfig;
    }
    try {
        return run(config_path, out_dir, csv, seed);
    } catch (const vielbein::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const vielbein::Error& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitEvaluation;
    }
}
