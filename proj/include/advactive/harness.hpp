#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "advactive/attacker.hpp"
#include "advactive/calibration.hpp"
#include "advactive/datasets.hpp"
#include "advactive/linear_svm.hpp"
#include "advactive/oracle.hpp"
#include "advactive/selection.hpp"

namespace advactive {

inline constexpr std::string_view kVersion = "1.0.0";

struct ExperimentConfig {
    DatasetSpec dataset;
    StrategyConfig strategy;
    AttackConfig attack;
    SolverConfig solver;
    std::size_t budget = 50;
    std::size_t trials = 10;
    std::uint64_t master_seed = 1;
    std::string output_dir;
    std::string mnist_images;
    std::string mnist_labels;

    /// Defaults for a task: budget 50 for synthetic2d, 100 for mnist56.
    static ExperimentConfig defaults_for(Task task);

    void validate() const;
    bool operator==(const ExperimentConfig&) const = default;
};

struct RoundEvent {
    std::size_t round = 0;
    double test_error = 0.0;
    std::optional<SampleId> chosen;  // absent for round 0
    Provenance chosen_provenance = Provenance::natural;
    Branch branch = Branch::uncertainty;
    std::optional<Label> oracle_label;
    std::optional<SampleId> injected;
    bool attack_skipped = false;
    std::size_t labeled_size = 0;
    std::size_t unlabeled_size = 0;
    std::uint64_t model_hash = 0;
};

struct TrialRecord {
    std::size_t trial_index = 0;
    std::uint64_t seed = 0;
    std::vector<RoundEvent> rounds;  // rounds[0] is the initial classifier
    bool exhausted = false;          // T_u ran out; errors padded with the last value

    std::vector<double> errors() const;
};

struct ErrorCurve {
    std::vector<double> mean;
    std::vector<std::vector<double>> per_trial;

    /// Sample standard deviation over trials divided by sqrt(trials); zeros for one trial.
    std::vector<double> standard_error() const;
};

/// Pointwise mean of equal-length curves. Throws ValidationError on ragged or empty input.
ErrorCurve aggregate(std::vector<std::vector<double>> per_trial);
ErrorCurve aggregate(std::span<const TrialRecord> trials);

/// Builds T_r and the test set for the configured task, reading IDX files for mnist56.
TaskData load_task(const ExperimentConfig& config);
/// Bayes rule for synthetic2d; a max-margin SVM over pool and test for mnist56.
Oracle make_oracle(const TaskData& task);

/// State of one trial: the pools, the current calibrated classifier, the strategy streams.
class Trial {
public:
    Trial(const ExperimentConfig& config, const TaskData& task, const Oracle& oracle, std::size_t trial_index);

    /// Round 0: the classifier trained on the initial T_l.
    RoundEvent initial_event() const;
    /// inject -> select -> label -> transfer -> retrain -> recalibrate -> evaluate.
    /// Throws SelectionError when T_u is empty.
    RoundEvent run_round();

    const DataPools& pools() const { return pools_; }
    const GroundTruth& hidden_labels() const { return hidden_; }
    const CalibratedClassifier& classifier() const { return classifier_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t injections() const { return injections_; }

private:
    Trial(const ExperimentConfig& config, const Oracle& oracle, std::uint64_t seed, PoolSplit split);
    void check_invariants() const;

    const ExperimentConfig& config_;
    const Oracle& oracle_;
    std::uint64_t seed_;
    DataPools pools_;
    GroundTruth hidden_;
    SvmTrainer trainer_;
    PlattCalibrator calibrator_;
    CalibratedClassifier classifier_;
    SampleSelector selector_;
    std::size_t round_ = 0;
    std::size_t injections_ = 0;
    std::size_t natural_in_training_ = 0;
    SampleId next_adversarial_id_;
};

TrialRecord run_trial(const ExperimentConfig& config, const TaskData& task, const Oracle& oracle,
                      std::size_t trial_index);

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<TrialRecord> trials;
    ErrorCurve curve;
    OracleKind oracle_kind = OracleKind::bayes_synthetic;
    std::uint64_t oracle_fingerprint = 0;
};

/// Runs every trial and averages the curves. With an output directory set, results are
/// written there; if a trial throws, completed trials and an error summary are written
/// before the exception propagates.
ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config, const TaskData& task, const Oracle& oracle);

}  // namespace advactive
