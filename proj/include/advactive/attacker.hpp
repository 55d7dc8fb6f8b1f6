#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advactive/calibration.hpp"
#include "advactive/linear_svm.hpp"
#include "advactive/types.hpp"

namespace advactive {

enum class CandidateSource : std::uint8_t { all_pool, natural_only };

std::string_view to_string(CandidateSource source);
CandidateSource candidate_source_from_string(std::string_view name);

struct AttackConfig {
    bool enabled = false;
    std::size_t injections_per_round = 1;
    CandidateSource source = CandidateSource::all_pool;

    void validate() const;
    bool operator==(const AttackConfig&) const = default;
};

/// What the attacker is allowed to see: T_l and T_u, never the test set or hidden labels.
struct AttackerView {
    std::span<const Sample> labeled;
    std::span<const Sample> unlabeled;
};

/// x' = x - f(x)/||w||^2 * w. No clipping to the input domain.
/// Throws ValidationError for a zero weight vector or a dimension mismatch.
FeatureVector project_onto_boundary(const LinearModel& model, std::span<const double> x);

struct CraftResult {
    std::optional<Sample> sample;  // empty when the attack was skipped
    std::size_t source_index = 0;  // position in T_l followed by T_u
    double utility = 0.0;
    std::size_t candidate_count = 0;
    std::string warning;
    std::vector<double> utilities;
};

/// Projects T_l and T_u onto the current boundary, scores every projection with the
/// expected-utility objective as a prospective member of T_u, and returns the least
/// useful one as an unlabeled adversarial sample with id `new_id`.
CraftResult craft_attack(const CalibratedClassifier& clf, AttackerView view, const SvmTrainer& trainer,
                         const PlattCalibrator& calibrator, CandidateSource source, SampleId new_id,
                         bool keep_utilities = false);

/// Appends an attacker sample to T_u. Throws ValidationError if it is labeled or natural.
void inject(DataPools& pools, Sample sample);

}  // namespace advactive
