// advactive: run adversarial active-learning experiments and plot their error curves.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "advactive/errors.hpp"
#include "advactive/harness.hpp"
#include "advactive/report.hpp"

namespace {

struct RunOptions {
    std::string task = "synthetic2d";
    std::string strategy = "uncertainty";
    double p = 0.0;
    std::string mix_with = "meu";
    std::string attack = "off";
    std::string source = "all_pool";
    std::size_t trials = 10;
    std::size_t budget = 0;  // 0 -> task default
    std::uint64_t seed = 1;
    double c = 1.0;
    std::string out;
    std::string mnist_images;
    std::string mnist_labels;
};

advactive::ExperimentConfig to_config(const RunOptions& o) {
    using namespace advactive;
    ExperimentConfig config = ExperimentConfig::defaults_for(task_from_string(o.task));
    config.strategy.kind = strategy_from_string(o.strategy);
    config.strategy.mix_probability = o.p;
    config.strategy.companion = companion_from_string(o.mix_with);
    config.attack.enabled = o.attack == "on";
    config.attack.source = candidate_source_from_string(o.source);
    config.trials = o.trials;
    if (o.budget > 0) config.budget = o.budget;
    config.master_seed = o.seed;
    config.dataset.seed = o.seed;
    config.solver.c = o.c;
    config.output_dir = o.out;
    config.mnist_images = o.mnist_images;
    config.mnist_labels = o.mnist_labels;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adversarial active learning with a linear SVM"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run a multi-trial experiment and write curve.csv, meta.json, trial_<k>.csv");
    run_cmd->add_option("--task", run.task, "synthetic2d | mnist56")->check(CLI::IsMember({"synthetic2d", "mnist56"}));
    run_cmd->add_option("--strategy", run.strategy, "uncertainty | meu | random | mixed")
        ->check(CLI::IsMember({"uncertainty", "meu", "random", "mixed"}));
    run_cmd->add_option("--p", run.p, "probability of the companion strategy (mixed)")->check(CLI::Range(0.0, 1.0));
    run_cmd->add_option("--mix-with", run.mix_with, "companion of the mixed strategy")
        ->check(CLI::IsMember({"meu", "random"}));
    run_cmd->add_option("--attack", run.attack, "on | off")->check(CLI::IsMember({"on", "off"}));
    run_cmd->add_option("--candidates", run.source, "attacker candidate source")
        ->check(CLI::IsMember({"all_pool", "natural_only"}));
    run_cmd->add_option("--trials", run.trials, "number of trials")->check(CLI::PositiveNumber);
    run_cmd->add_option("--budget", run.budget, "queries per trial (default 50 synthetic, 100 mnist)");
    run_cmd->add_option("--seed", run.seed, "master seed");
    run_cmd->add_option("--c", run.c, "SVM regularization C")->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", run.out, "output directory")->required();
    run_cmd->add_option("--mnist-images", run.mnist_images, "IDX image file");
    run_cmd->add_option("--mnist-labels", run.mnist_labels, "IDX label file");

    std::vector<std::string> plot_inputs;
    std::string plot_out;
    auto* plot_cmd = app.add_subcommand("plot", "Render one or more result directories as an SVG chart");
    plot_cmd->add_option("--in", plot_inputs, "result directory (repeatable; a directory of results also works)")
        ->required();
    plot_cmd->add_option("--out", plot_out, "output SVG file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const auto config = to_config(run);
            const auto result = advactive::run_experiment(config);
            std::cout << "final mean test error " << advactive::format_fixed(result.curve.mean.back()) << " ("
                      << result.trials.size() << " trials) -> " << config.output_dir << "\n";
        } else if (*plot_cmd) {
            std::vector<advactive::NamedCurve> curves;
            for (const auto& in : plot_inputs) {
                const std::filesystem::path dir(in);
                if (std::filesystem::exists(dir / "curve.csv")) {
                    curves.push_back(advactive::load_curve(dir));
                    continue;
                }
                std::vector<std::filesystem::path> subdirs;
                for (const auto& entry : std::filesystem::directory_iterator(dir))
                    if (std::filesystem::exists(entry.path() / "curve.csv")) subdirs.push_back(entry.path());
                if (subdirs.empty()) throw advactive::Error("no curve.csv under " + dir.string());
                std::sort(subdirs.begin(), subdirs.end());
                for (const auto& sub : subdirs) curves.push_back(advactive::load_curve(sub));
            }
            advactive::write_text(plot_out, advactive::render_svg(curves));
        }
    } catch (const std::exception& e) {
        std::cerr << "advactive: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
