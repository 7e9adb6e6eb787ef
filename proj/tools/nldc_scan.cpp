#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nldc/scan.hpp"

namespace {

constexpr int exit_config = 1;
constexpr int exit_runtime = 2;

struct Source {
    std::string config_path;
    std::string preset;
};

nldc::scan::ScanConfig load(const Source& src)
{
    using namespace nldc::scan;
    if (!src.config_path.empty() && !src.preset.empty())
        throw ConfigErrors({{0, 0, "", "give either --config or --preset, not both"}});
    if (!src.preset.empty()) {
        try {
            return parse_config(preset_yaml(src.preset));
        } catch (const std::out_of_range& e) {
            throw ConfigErrors({{0, 0, "preset", e.what()}});
        }
    }
    if (src.config_path.empty()) throw ConfigErrors({{0, 0, "", "no configuration: use --config PATH or --preset NAME"}});
    std::ifstream in(src.config_path);
    if (!in) throw ConfigErrors({{0, 0, "", "cannot open " + src.config_path}});
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str());
    } catch (ConfigErrors& e) {
        for (auto& err : e.errors) err.path = src.config_path + (err.path.empty() ? "" : " " + err.path);
        throw ConfigErrors(e.errors);
    }
}

void print_errors(const nldc::scan::ConfigErrors& e)
{
    for (const auto& err : e.errors) std::cerr << "config error: " << err.str() << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    using namespace nldc::scan;
    CLI::App app{"Double Compton scattering in an intense laser wave: rate and entanglement scans"};
    app.require_subcommand(1);

    Source src;
    std::string out_path, checkpoint;
    std::optional<int> workers, resolution;
    std::optional<std::uint64_t> seed;
    bool perturbative = false, quiet = false;

    auto* scan_cmd = app.add_subcommand("scan", "run a scan and write CSV plus JSON sidecar");
    auto* validate_cmd = app.add_subcommand("validate", "check a configuration and print its canonical form");
    for (auto* cmd : {scan_cmd, validate_cmd}) {
        cmd->add_option("--config", src.config_path, "YAML configuration file");
        cmd->add_option("--preset", src.preset, "built-in configuration (see `preset list`)");
        cmd->add_option("--out", out_path, "output CSV path (sidecar gets .json appended)");
        cmd->add_option("--workers", workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
        cmd->add_option("--seed", seed, "Monte Carlo seed");
        cmd->add_option("--resolution", resolution, "points per scan axis")->check(CLI::PositiveNumber);
        cmd->add_flag("--perturbative", perturbative, "weak-field reference only");
        cmd->add_option("--checkpoint", checkpoint, "checkpoint file (resumes when present)");
    }
    scan_cmd->add_flag("--quiet", quiet, "no progress output");

    std::string report_path;
    auto* report_cmd = app.add_subcommand("report", "summarize a finished scan");
    report_cmd->add_option("path", report_path, "scan CSV or its .json sidecar")->required();

    auto* preset_cmd = app.add_subcommand("preset", "built-in configurations");
    preset_cmd->require_subcommand(1);
    auto* preset_list = preset_cmd->add_subcommand("list", "list presets");
    std::string show_name;
    auto* preset_show = preset_cmd->add_subcommand("show", "print a preset's YAML");
    preset_show->add_option("name", show_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    if (preset_list->parsed()) {
        for (const auto& n : preset_names()) std::cout << n << "  " << preset_description(n) << "\n";
        return 0;
    }
    if (preset_show->parsed()) {
        try {
            std::cout << preset_yaml(show_name);
            return 0;
        } catch (const std::out_of_range& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return exit_config;
        }
    }
    if (report_cmd->parsed()) {
        std::string path = report_path;
        if (path.size() < 5 || path.substr(path.size() - 5) != ".json") path += ".json";
        std::ifstream in(path);
        if (!in) {
            std::cerr << "error: cannot open " << path << "\n";
            return exit_runtime;
        }
        std::ostringstream text;
        text << in.rdbuf();
        try {
            std::cout << report(text.str());
        } catch (const std::exception& e) {
            std::cerr << "error: " << path << ": " << e.what() << "\n";
            return exit_runtime;
        }
        return 0;
    }

    ScanConfig config;
    try {
        config = load(src);
        if (!out_path.empty()) config.output.path = out_path;
        if (workers) config.execution.workers = *workers;
        if (seed) config.execution.seed = *seed;
        if (!checkpoint.empty()) config.execution.checkpoint = checkpoint;
        if (resolution)
            for (auto& a : config.scan.axes) a.points = *resolution;
        if (perturbative) config.scan.modes = {nldc::RateMode::perturbative};
        auto errs = validate(config);
        if (!errs.empty()) throw ConfigErrors(errs);
    } catch (const ConfigErrors& e) {
        print_errors(e);
        return exit_config;
    }

    if (validate_cmd->parsed()) {
        std::cout << "# config " << hash_hex(config_hash(config)) << ", " << config.cell_count() << " cells\n";
        if (config.cuts_defaulted) std::cout << "# cuts block missing: defaults applied\n";
        std::cout << to_yaml(config);
        return 0;
    }

    try {
        RunHooks hooks;
        if (!quiet)
            hooks.progress = [](int done, int total) { std::cerr << "\r" << done << "/" << total << " cells" << std::flush; };
        const ScanResult result = run_scan(config, hooks);
        if (!quiet) std::cerr << "\n";
        write_outputs(result);
        nlohmann::json run{{"runtime_seconds", result.runtime_seconds},
                           {"workers", config.execution.workers},
                           {"resumed_cells", result.resumed_cells},
                           {"config_hash", hash_hex(result.hash)}};
        atomic_write(config.output.path + ".run.json", run.dump(2) + "\n");
        std::cout << report(sidecar_text(result));
    } catch (const std::exception& e) {
        std::cerr << "\nruntime error: " << e.what() << "\n";
        return exit_runtime;
    }
    return 0;
}
