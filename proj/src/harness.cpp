#include "advactive/harness.hpp"

#include <cmath>
#include <filesystem>
#include <unordered_set>

#include "advactive/errors.hpp"
#include "advactive/report.hpp"
#include "advactive/rng.hpp"

namespace advactive {
namespace {

constexpr SampleId kFirstAdversarialId = SampleId{1} << 40;

PoolSplit make_split(const ExperimentConfig& config, const TaskData& task, std::uint64_t seed) {
    return split_pools(task, config.dataset, derive_seed(seed, "split"));
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults_for(Task task) {
    ExperimentConfig config;
    if (task == Task::mnist56) {
        config.dataset = DatasetSpec::mnist_default();
        config.budget = 100;
    } else {
        config.dataset = DatasetSpec::synthetic_default();
        config.budget = 50;
    }
    return config;
}

void ExperimentConfig::validate() const {
    dataset.validate();
    strategy.validate();
    attack.validate();
    solver.validate();
    if (trials == 0) throw ConfigError("trial count must be >= 1");
    const std::size_t initial_unlabeled =
        2 * (dataset.pool_per_class - dataset.labeled_per_class - dataset.validation_per_class);
    if (!attack.enabled && budget > initial_unlabeled)
        throw ConfigError("query budget " + std::to_string(budget) + " exceeds the " +
                          std::to_string(initial_unlabeled) + " unlabeled samples available without attack");
}

std::vector<double> TrialRecord::errors() const {
    std::vector<double> out;
    out.reserve(rounds.size());
    for (const auto& r : rounds) out.push_back(r.test_error);
    return out;
}

std::vector<double> ErrorCurve::standard_error() const {
    std::vector<double> se(mean.size(), 0.0);
    const std::size_t n = per_trial.size();
    if (n < 2) return se;
    for (std::size_t q = 0; q < mean.size(); ++q) {
        double ss = 0.0;
        for (const auto& curve : per_trial) ss += (curve[q] - mean[q]) * (curve[q] - mean[q]);
        se[q] = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
    }
    return se;
}

ErrorCurve aggregate(std::vector<std::vector<double>> per_trial) {
    if (per_trial.empty()) throw ValidationError("no trial curves to aggregate");
    const std::size_t len = per_trial.front().size();
    ErrorCurve curve;
    curve.mean.assign(len, 0.0);
    for (const auto& c : per_trial) {
        if (c.size() != len) throw ValidationError("trial curves have different lengths");
        for (std::size_t q = 0; q < len; ++q) curve.mean[q] += c[q];
    }
    for (auto& m : curve.mean) m /= static_cast<double>(per_trial.size());
    curve.per_trial = std::move(per_trial);
    return curve;
}

ErrorCurve aggregate(std::span<const TrialRecord> trials) {
    std::vector<std::vector<double>> curves;
    curves.reserve(trials.size());
    for (const auto& t : trials) curves.push_back(t.errors());
    return aggregate(std::move(curves));
}

TaskData load_task(const ExperimentConfig& config) {
    if (config.dataset.task == Task::synthetic2d) return make_synthetic_task(config.dataset);
    if (config.mnist_images.empty() || config.mnist_labels.empty())
        throw ConfigError("mnist56 needs --mnist-images and --mnist-labels");
    const auto images = idx::parse_images(idx::read_file(config.mnist_images));
    const auto labels = idx::parse_labels(idx::read_file(config.mnist_labels));
    return make_mnist_task(images, labels, config.dataset);
}

Oracle make_oracle(const TaskData& task) {
    if (task.task == Task::synthetic2d) return Oracle::bayes();
    std::vector<Sample> all = task.pool;
    all.insert(all.end(), task.test.begin(), task.test.end());
    return Oracle::full_svm(build_full_oracle(all));
}

Trial::Trial(const ExperimentConfig& config, const TaskData& task, const Oracle& oracle, std::size_t trial_index)
    : Trial(config, oracle, trial_seed(config.master_seed, trial_index),
            make_split(config, task, trial_seed(config.master_seed, trial_index))) {}

Trial::Trial(const ExperimentConfig& config, const Oracle& oracle, std::uint64_t seed, PoolSplit split)
    : config_(config),
      oracle_(oracle),
      seed_(seed),
      pools_(std::move(split.pools)),
      hidden_(std::move(split.hidden)),
      trainer_(config.solver),
      calibrator_(pools_.validation),
      classifier_(calibrator_.calibrate(trainer_.train(pools_.labeled))),
      selector_(config.strategy, seed_),
      natural_in_training_(pools_.training_size()),
      next_adversarial_id_(kFirstAdversarialId) {
    check_invariants();
}

RoundEvent Trial::initial_event() const {
    RoundEvent ev;
    ev.round = 0;
    ev.test_error = test_error(classifier_.model(), pools_.test);
    ev.labeled_size = pools_.labeled.size();
    ev.unlabeled_size = pools_.unlabeled.size();
    ev.model_hash = model_hash(classifier_.model());
    return ev;
}

RoundEvent Trial::run_round() {
    RoundEvent ev;
    ev.round = ++round_;

    if (config_.attack.enabled) {
        for (std::size_t k = 0; k < config_.attack.injections_per_round; ++k) {
            CraftResult crafted = craft_attack(classifier_, {pools_.labeled, pools_.unlabeled}, trainer_,
                                               calibrator_, config_.attack.source, next_adversarial_id_);
            if (!crafted.sample) {
                ev.attack_skipped = true;
                break;
            }
            ev.injected = crafted.sample->id;
            ++next_adversarial_id_;
            ++injections_;
            inject(pools_, std::move(*crafted.sample));
        }
    }

    const SelectionOutcome choice = selector_.select(classifier_, pools_, trainer_, calibrator_);
    Sample picked = std::move(pools_.unlabeled[choice.index]);
    pools_.unlabeled.erase(pools_.unlabeled.begin() + static_cast<std::ptrdiff_t>(choice.index));
    const Label y = oracle_.label(picked.features);
    picked.label = y;
    ev.chosen = picked.id;
    ev.chosen_provenance = picked.provenance;
    ev.branch = choice.branch;
    ev.oracle_label = y;
    pools_.labeled.push_back(std::move(picked));

    classifier_ = calibrator_.calibrate(trainer_.train(pools_.labeled));
    ev.test_error = test_error(classifier_.model(), pools_.test);
    ev.labeled_size = pools_.labeled.size();
    ev.unlabeled_size = pools_.unlabeled.size();
    ev.model_hash = model_hash(classifier_.model());
    check_invariants();
    return ev;
}

void Trial::check_invariants() const {
    std::unordered_set<SampleId> seen;
    std::size_t natural = 0;
    std::size_t adversarial = 0;
    for (const auto* pool : {&pools_.labeled, &pools_.unlabeled, &pools_.validation}) {
        for (const auto& s : *pool) {
            if (!seen.insert(s.id).second) throw Error("sample " + std::to_string(s.id) + " appears in two pools");
            if (pool == &pools_.validation) continue;
            (s.provenance == Provenance::natural ? natural : adversarial) += 1;
        }
    }
    for (const auto& s : pools_.test)
        if (seen.count(s.id)) throw Error("test sample " + std::to_string(s.id) + " leaked into training pools");
    if (natural != natural_in_training_) throw Error("natural sample count in T_l + T_u changed");
    if (adversarial != injections_) throw Error("adversarial sample count does not match injections");
}

TrialRecord run_trial(const ExperimentConfig& config, const TaskData& task, const Oracle& oracle,
                      std::size_t trial_index) {
    Trial trial(config, task, oracle, trial_index);
    TrialRecord record;
    record.trial_index = trial_index;
    record.seed = trial.seed();
    record.rounds.push_back(trial.initial_event());
    for (std::size_t r = 1; r <= config.budget; ++r) {
        if (trial.pools().unlabeled.empty() && !config.attack.enabled) record.exhausted = true;
        if (!record.exhausted) {
            try {
                record.rounds.push_back(trial.run_round());
                continue;
            } catch (const SelectionError&) {
                if (!trial.pools().unlabeled.empty()) throw;
                record.exhausted = true;
            }
        }
        RoundEvent pad = record.rounds.back();
        pad.round = r;
        pad.chosen.reset();
        pad.oracle_label.reset();
        pad.injected.reset();
        record.rounds.push_back(pad);
    }
    return record;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const TaskData task = load_task(config);
    const Oracle oracle = make_oracle(task);
    return run_experiment(config, task, oracle);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const TaskData& task, const Oracle& oracle) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    result.oracle_kind = oracle.kind();
    result.oracle_fingerprint = oracle.fingerprint();
    for (std::size_t t = 0; t < config.trials; ++t) {
        try {
            result.trials.push_back(run_trial(config, task, oracle, t));
        } catch (const std::exception& e) {
            if (!config.output_dir.empty()) {
                if (!result.trials.empty()) {
                    result.curve = aggregate(std::span<const TrialRecord>(result.trials));
                    write_results(result, config.output_dir);
                }
                std::filesystem::create_directories(config.output_dir);
                write_text(std::filesystem::path(config.output_dir) / "error.txt",
                           "trial " + std::to_string(t) + " failed after " + std::to_string(result.trials.size()) +
                               " completed trials: " + e.what() + "\n");
            }
            throw;
        }
    }
    result.curve = aggregate(std::span<const TrialRecord>(result.trials));
    if (!config.output_dir.empty()) write_results(result, config.output_dir);
    return result;
}

}  // namespace advactive
