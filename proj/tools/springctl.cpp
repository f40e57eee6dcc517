#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <springs/errors.h>
#include <springs/experiments.h>
#include <springs/params.h>

namespace {

struct Common {
    std::vector<std::string> sets;
    std::string out;
    std::size_t workers = 1;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--set", c.sets, "Override a parameter, key=value (repeatable)");
    cmd->add_option("--out", c.out, "Output directory (default $SPRINGS_OUTPUT_DIR/<name> or out/<name>)");
    cmd->add_option("--workers", c.workers, "Worker threads for frequency and ion sweeps")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
}

int execute(springs::ExperimentManifest m, const Common& c, const std::string& context)
{
    try {
        for (const auto& s : c.sets) m.params.assign(s);
        if (!c.out.empty()) m.output_dir = c.out;
        const springs::RunResult r = springs::run_experiment(m, c.workers);
        for (const auto& f : r.files) std::cout << f.string() << '\n';
        return 0;
    } catch (const springs::ConfigError& e) {
        std::cerr << "springctl " << context << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "springctl " << context << ": " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spring-ensemble control synthesis and experiment runner"};
    app.require_subcommand(1);

    Common run_opts;
    std::string name;
    std::string manifest_file;
    auto* run = app.add_subcommand("run", "Run a named experiment");
    run->add_option("name", name, "Experiment name (see list)");
    run->add_option("--manifest", manifest_file, "JSON manifest {name, overrides, output_dir}");
    add_common(run, run_opts);

    Common design_opts;
    std::string method;
    auto* design = app.add_subcommand("design", "Synthesize one pulse and its endpoint sweep");
    design->add_option("method", method, "adiabatic, sta, oct1 or oct2")
        ->required()
        ->check(CLI::IsMember({"adiabatic", "sta", "oct1", "oct2"}));
    add_common(design, design_opts);

    auto* list = app.add_subcommand("list", "Show experiments, parameters and CSV schemas");

    CLI11_PARSE(app, argc, argv);

    if (*list) {
        std::cout << springs::describe_experiments();
        return 0;
    }
    if (*design) {
        try {
            return execute(springs::design_manifest(method), design_opts, "design " + method);
        } catch (const std::exception& e) {
            std::cerr << "springctl design " << method << ": " << e.what() << '\n';
            return 2;
        }
    }
    try {
        springs::ExperimentManifest m;
        if (!manifest_file.empty()) {
            m = springs::read_manifest(manifest_file);
            if (!name.empty() && name != m.name) {
                throw springs::ConfigError("manifest names experiment '" + m.name + "', not '" + name + "'");
            }
        } else if (!name.empty()) {
            m = springs::experiment_manifest(name);
        } else {
            throw springs::ConfigError("run needs an experiment name or --manifest");
        }
        const std::string context = "run " + (name.empty() ? m.name : name);
        return execute(std::move(m), run_opts, context);
    } catch (const std::exception& e) {
        std::cerr << "springctl run: " << e.what() << '\n';
        return 2;
    }
}
