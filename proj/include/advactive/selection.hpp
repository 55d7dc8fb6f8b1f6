#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "advactive/calibration.hpp"
#include "advactive/linear_svm.hpp"
#include "advactive/rng.hpp"
#include "advactive/types.hpp"

namespace advactive {

enum class StrategyKind : std::uint8_t { uncertainty, meu, random, mixed };
enum class Companion : std::uint8_t { meu, random };
enum class Branch : std::uint8_t { uncertainty, meu, random };

std::string_view to_string(StrategyKind kind);
std::string_view to_string(Companion companion);
std::string_view to_string(Branch branch);
StrategyKind strategy_from_string(std::string_view name);
Companion companion_from_string(std::string_view name);

struct StrategyConfig {
    StrategyKind kind = StrategyKind::uncertainty;
    double mix_probability = 0.0;  // only read when kind == mixed
    Companion companion = Companion::meu;

    void validate() const;
    bool operator==(const StrategyConfig&) const = default;
};

struct SelectionOutcome {
    std::size_t index = 0;  // into T_u
    Branch branch = Branch::uncertainty;
    std::vector<double> utilities;  // filled only when requested
};

/// Lowest index among the maximal / minimal values.
std::size_t first_argmax(std::span<const double> values);
std::size_t first_argmin(std::span<const double> values);

/// Expected-utility scores for one round.
///
/// For candidate x_i with putative label y_i the model is retrained on T_l + (x_i, y_i)
/// and the sigmoid refit on V, giving theta_{+i}. Then
///
///   U_i = sum_{y_i} p(y_i|x_i) / N * ( sum_{j in T_l + i} p+(y_j|x_j)
///                                     + sum_{j in T_u - i} sum_{y_j} p(y_j|x_j) p+(y_j|x_j) )
///
/// with N = |T_l| + |T_u| counting the candidate. Gram products against T_l, T_u and V
/// are computed once per round; each retrain warm-starts from the current dual solution.
class UtilityEvaluator {
public:
    UtilityEvaluator(const CalibratedClassifier& current, std::span<const Sample> labeled,
                     std::span<const Sample> unlabeled, const SvmTrainer& trainer,
                     const PlattCalibrator& calibrator);

    /// U_i for the i-th member of T_u.
    double for_unlabeled(std::size_t i);
    /// U for a point that would be added to T_u (N grows by one).
    double for_candidate(std::span<const double> x);

    /// Putative-label branches whose retraining failed and fell back to the current posteriors.
    std::size_t failed_branches() const { return failed_branches_; }

private:
    double evaluate(std::span<const double> x, std::optional<std::size_t> member);

    const CalibratedClassifier& current_;
    std::span<const Sample> labeled_;
    std::span<const Sample> unlabeled_;
    const SvmTrainer& trainer_;
    const PlattCalibrator& calibrator_;

    std::vector<const FeatureVector*> points_;  // T_l, then T_u, then V
    std::vector<Label> labeled_labels_;
    AugmentedGram labeled_gram_;
    std::vector<double> cross_;                 // (x_k.x_j + 1), k in T_l, j in points_
    std::vector<double> warm_alpha_;
    std::vector<double> current_positive_;      // p_theta(+1|x_j), j in T_l then T_u
    std::size_t failed_branches_ = 0;
};

/// Convenience single-candidate form.
double expected_utility(const CalibratedClassifier& clf, const DataPools& pools, std::size_t i,
                        const SvmTrainer& trainer, const PlattCalibrator& calibrator);

/// argmin |f(x)| / ||w|| over T_u; ties go to the lowest index.
SelectionOutcome select_uncertainty(const LinearModel& model, std::span<const Sample> unlabeled);

SelectionOutcome select_meu(const CalibratedClassifier& clf, const DataPools& pools, const SvmTrainer& trainer,
                            const PlattCalibrator& calibrator, bool keep_utilities = false);

SelectionOutcome select_random(Engine& rng, std::span<const Sample> unlabeled);

/// Draws u ~ U(0,1) from `coin`; u < p delegates to the companion, otherwise to uncertainty.
SelectionOutcome select_mixed(Engine& coin, Engine& random, double p, Companion companion,
                              const CalibratedClassifier& clf, const DataPools& pools, const SvmTrainer& trainer,
                              const PlattCalibrator& calibrator);

/// Strategy plus its private random streams for one trial.
class SampleSelector {
public:
    SampleSelector(StrategyConfig config, std::uint64_t trial_seed);

    SelectionOutcome select(const CalibratedClassifier& clf, const DataPools& pools, const SvmTrainer& trainer,
                            const PlattCalibrator& calibrator);

    const StrategyConfig& config() const { return config_; }

private:
    StrategyConfig config_;
    Engine coin_;
    Engine random_;
};

}  // namespace advactive
