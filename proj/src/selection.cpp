#include "advactive/selection.hpp"

#include <cmath>
#include <random>
#include <string>

#include "advactive/errors.hpp"

namespace advactive {

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::uncertainty: return "uncertainty";
        case StrategyKind::meu: return "meu";
        case StrategyKind::random: return "random";
        case StrategyKind::mixed: return "mixed";
    }
    return "?";
}

std::string_view to_string(Companion companion) { return companion == Companion::meu ? "meu" : "random"; }

std::string_view to_string(Branch branch) {
    switch (branch) {
        case Branch::uncertainty: return "uncertainty";
        case Branch::meu: return "meu";
        case Branch::random: return "random";
    }
    return "?";
}

StrategyKind strategy_from_string(std::string_view name) {
    if (name == "uncertainty") return StrategyKind::uncertainty;
    if (name == "meu") return StrategyKind::meu;
    if (name == "random") return StrategyKind::random;
    if (name == "mixed") return StrategyKind::mixed;
    throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

Companion companion_from_string(std::string_view name) {
    if (name == "meu") return Companion::meu;
    if (name == "random") return Companion::random;
    throw ConfigError("unknown mix companion '" + std::string(name) + "'");
}

void StrategyConfig::validate() const {
    if (!(mix_probability >= 0.0 && mix_probability <= 1.0)) throw ConfigError("mix probability must lie in [0,1]");
}

std::size_t first_argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

std::size_t first_argmin(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[best]) best = i;
    return best;
}

UtilityEvaluator::UtilityEvaluator(const CalibratedClassifier& current, std::span<const Sample> labeled,
                                   std::span<const Sample> unlabeled, const SvmTrainer& trainer,
                                   const PlattCalibrator& calibrator)
    : current_(current), labeled_(labeled), unlabeled_(unlabeled), trainer_(trainer), calibrator_(calibrator) {
    for (const auto& s : labeled_) {
        if (!s.label) throw ValidationError("T_l sample " + std::to_string(s.id) + " has no label");
        points_.push_back(&s.features);
        labeled_labels_.push_back(*s.label);
    }
    for (const auto& s : unlabeled_) points_.push_back(&s.features);
    for (const auto& s : calibrator_.validation()) points_.push_back(&s.features);

    const std::size_t nl = labeled_.size();
    const std::size_t m = points_.size();
    labeled_gram_ = AugmentedGram(std::span<const FeatureVector* const>(points_.data(), nl));
    cross_.resize(nl * m);
    for (std::size_t k = 0; k < nl; ++k)
        for (std::size_t j = 0; j < m; ++j) cross_[k * m + j] = dot(*points_[k], *points_[j]) + 1.0;

    warm_alpha_ = solve_dual(labeled_gram_, labeled_labels_, trainer_.config()).alpha;

    current_positive_.reserve(nl + unlabeled_.size());
    for (std::size_t j = 0; j < nl + unlabeled_.size(); ++j)
        current_positive_.push_back(current_.posterior_at(current_.model().decision(*points_[j]), Label::positive));
}

double UtilityEvaluator::for_unlabeled(std::size_t i) {
    if (i >= unlabeled_.size()) throw SelectionError("candidate index outside T_u");
    return evaluate(unlabeled_[i].features, i);
}

double UtilityEvaluator::for_candidate(std::span<const double> x) { return evaluate(x, std::nullopt); }

double UtilityEvaluator::evaluate(std::span<const double> x, std::optional<std::size_t> member) {
    const std::size_t nl = labeled_.size();
    const std::size_t nu = unlabeled_.size();
    const std::size_t m = points_.size();

    std::vector<double> dots(m);
    for (std::size_t j = 0; j < m; ++j) dots[j] = dot(x, *points_[j]);
    const double self = dot(x, x);
    const AugmentedGram gram = labeled_gram_.with_point(std::span<const double>(dots.data(), nl), self);

    const double p_candidate = current_.posterior_at(current_.model().decision(x), Label::positive);

    std::vector<Label> labels = labeled_labels_;
    labels.push_back(Label::positive);
    std::vector<double> warm = warm_alpha_;
    warm.push_back(0.0);

    std::vector<double> margins(m);
    std::vector<double> q(m);
    double total = 0.0;
    for (Label y : {Label::positive, Label::negative}) {
        labels.back() = y;
        double q_candidate = p_candidate;
        try {
            const DualSolution sol = solve_dual(gram, labels, trainer_.config(), warm);
            const double c_new = sol.alpha[nl] * sign_of(y);
            double margin_candidate = c_new * (self + 1.0);
            for (std::size_t j = 0; j < m; ++j) margins[j] = c_new * (dots[j] + 1.0);
            for (std::size_t k = 0; k < nl; ++k) {
                const double ck = sol.alpha[k] * sign_of(labels[k]);
                if (ck == 0.0) continue;
                const double* row = cross_.data() + k * m;
                for (std::size_t j = 0; j < m; ++j) margins[j] += ck * row[j];
                margin_candidate += ck * (dots[k] + 1.0);
            }
            const PlattParams refit = calibrator_.fit(std::span<const double>(margins.data() + nl + nu, m - nl - nu));
            for (std::size_t j = 0; j < nl + nu; ++j) q[j] = platt_positive(refit, margins[j]);
            q_candidate = platt_positive(refit, margin_candidate);
        } catch (const Error&) {
            ++failed_branches_;
            for (std::size_t j = 0; j < nl + nu; ++j) q[j] = current_positive_[j];
        }

        double inner = y == Label::positive ? q_candidate : 1.0 - q_candidate;
        for (std::size_t k = 0; k < nl; ++k) inner += labeled_labels_[k] == Label::positive ? q[k] : 1.0 - q[k];
        for (std::size_t u = 0; u < nu; ++u) {
            if (member && *member == u) continue;
            const double p = current_positive_[nl + u];
            const double qu = q[nl + u];
            inner += p * qu + (1.0 - p) * (1.0 - qu);
        }
        total += (y == Label::positive ? p_candidate : 1.0 - p_candidate) * inner;
    }
    const std::size_t n = nl + nu + (member ? 0 : 1);
    return total / static_cast<double>(n);
}

double expected_utility(const CalibratedClassifier& clf, const DataPools& pools, std::size_t i,
                        const SvmTrainer& trainer, const PlattCalibrator& calibrator) {
    UtilityEvaluator eval(clf, pools.labeled, pools.unlabeled, trainer, calibrator);
    return eval.for_unlabeled(i);
}

SelectionOutcome select_uncertainty(const LinearModel& model, std::span<const Sample> unlabeled) {
    if (unlabeled.empty()) throw SelectionError("T_u is empty");
    const double norm = model.weight_norm();
    const double scale = norm > 0.0 ? norm : 1.0;
    std::vector<double> distance;
    distance.reserve(unlabeled.size());
    for (const auto& s : unlabeled) distance.push_back(std::abs(model.decision(s.features)) / scale);
    return {first_argmin(distance), Branch::uncertainty, {}};
}

SelectionOutcome select_meu(const CalibratedClassifier& clf, const DataPools& pools, const SvmTrainer& trainer,
                            const PlattCalibrator& calibrator, bool keep_utilities) {
    if (pools.unlabeled.empty()) throw SelectionError("T_u is empty");
    UtilityEvaluator eval(clf, pools.labeled, pools.unlabeled, trainer, calibrator);
    std::vector<double> utilities(pools.unlabeled.size());
    for (std::size_t i = 0; i < utilities.size(); ++i) utilities[i] = eval.for_unlabeled(i);
    SelectionOutcome out{first_argmax(utilities), Branch::meu, {}};
    if (keep_utilities) out.utilities = std::move(utilities);
    return out;
}

SelectionOutcome select_random(Engine& rng, std::span<const Sample> unlabeled) {
    if (unlabeled.empty()) throw SelectionError("T_u is empty");
    std::uniform_int_distribution<std::size_t> pick(0, unlabeled.size() - 1);
    return {pick(rng), Branch::random, {}};
}

SelectionOutcome select_mixed(Engine& coin, Engine& random, double p, Companion companion,
                              const CalibratedClassifier& clf, const DataPools& pools, const SvmTrainer& trainer,
                              const PlattCalibrator& calibrator) {
    if (pools.unlabeled.empty()) throw SelectionError("T_u is empty");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(coin) < p) {
        return companion == Companion::meu ? select_meu(clf, pools, trainer, calibrator)
                                           : select_random(random, pools.unlabeled);
    }
    return select_uncertainty(clf.model(), pools.unlabeled);
}

SampleSelector::SampleSelector(StrategyConfig config, std::uint64_t trial_seed)
    : config_(config), coin_(make_engine(trial_seed, "coin")), random_(make_engine(trial_seed, "random")) {
    config_.validate();
}

SelectionOutcome SampleSelector::select(const CalibratedClassifier& clf, const DataPools& pools,
                                        const SvmTrainer& trainer, const PlattCalibrator& calibrator) {
    switch (config_.kind) {
        case StrategyKind::uncertainty: return select_uncertainty(clf.model(), pools.unlabeled);
        case StrategyKind::meu: return select_meu(clf, pools, trainer, calibrator);
        case StrategyKind::random: return select_random(random_, pools.unlabeled);
        case StrategyKind::mixed:
            return select_mixed(coin_, random_, config_.mix_probability, config_.companion, clf, pools, trainer,
                                calibrator);
    }
    throw SelectionError("unknown strategy");
}

}  // namespace advactive
