#include "advactive/attacker.hpp"

#include <string>

#include "advactive/errors.hpp"
#include "advactive/selection.hpp"

namespace advactive {

std::string_view to_string(CandidateSource source) {
    return source == CandidateSource::all_pool ? "all_pool" : "natural_only";
}

CandidateSource candidate_source_from_string(std::string_view name) {
    if (name == "all_pool") return CandidateSource::all_pool;
    if (name == "natural_only") return CandidateSource::natural_only;
    throw ConfigError("unknown candidate source '" + std::string(name) + "'");
}

void AttackConfig::validate() const {
    if (enabled && injections_per_round == 0) throw ConfigError("injections_per_round must be >= 1");
}

FeatureVector project_onto_boundary(const LinearModel& model, std::span<const double> x) {
    const double norm2 = dot(model.weights, model.weights);
    if (!(norm2 > 0.0)) throw ValidationError("cannot project onto the boundary of a zero weight vector");
    const double scale = model.decision(x) / norm2;
    FeatureVector out(x.begin(), x.end());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= scale * model.weights[k];
    return out;
}

CraftResult craft_attack(const CalibratedClassifier& clf, AttackerView view, const SvmTrainer& trainer,
                         const PlattCalibrator& calibrator, CandidateSource source, SampleId new_id,
                         bool keep_utilities) {
    CraftResult result;
    const LinearModel& model = clf.model();
    if (!(model.weight_norm() > 0.0)) {
        result.warning = "attack skipped: zero weight vector";
        return result;
    }

    std::vector<FeatureVector> candidates;
    std::vector<std::size_t> origin;
    std::size_t position = 0;
    for (auto pool : {view.labeled, view.unlabeled}) {
        for (const auto& s : pool) {
            if (source == CandidateSource::all_pool || s.provenance == Provenance::natural) {
                candidates.push_back(project_onto_boundary(model, s.features));
                origin.push_back(position);
            }
            ++position;
        }
    }
    result.candidate_count = candidates.size();
    if (candidates.empty()) {
        result.warning = "attack skipped: no candidates";
        return result;
    }

    UtilityEvaluator eval(clf, view.labeled, view.unlabeled, trainer, calibrator);
    std::vector<double> utilities(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) utilities[c] = eval.for_candidate(candidates[c]);
    if (eval.failed_branches() == 2 * candidates.size()) {
        result.warning = "attack skipped: every candidate evaluation failed";
        return result;
    }

    const std::size_t best = first_argmin(utilities);
    result.source_index = origin[best];
    result.utility = utilities[best];
    result.sample = Sample{new_id, std::move(candidates[best]), std::nullopt, Provenance::adversarial};
    if (keep_utilities) result.utilities = std::move(utilities);
    return result;
}

void inject(DataPools& pools, Sample sample) {
    if (sample.label) throw ValidationError("injected sample must be unlabeled");
    if (sample.provenance != Provenance::adversarial) throw ValidationError("injected sample must be adversarial");
    pools.unlabeled.push_back(std::move(sample));
}

}  // namespace advactive
