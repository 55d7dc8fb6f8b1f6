#include "advactive/datasets.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "advactive/errors.hpp"
#include "advactive/oracle.hpp"
#include "advactive/rng.hpp"

namespace advactive {

std::string_view to_string(Task task) { return task == Task::synthetic2d ? "synthetic2d" : "mnist56"; }

Task task_from_string(std::string_view name) {
    if (name == "synthetic2d") return Task::synthetic2d;
    if (name == "mnist56") return Task::mnist56;
    throw ConfigError("unknown task '" + std::string(name) + "'");
}

DatasetSpec DatasetSpec::synthetic_default() { return DatasetSpec{}; }

DatasetSpec DatasetSpec::mnist_default() {
    DatasetSpec spec;
    spec.task = Task::mnist56;
    spec.test_positive = 456;
    spec.test_negative = 462;
    return spec;
}

void DatasetSpec::validate() const {
    if (labeled_per_class == 0) throw ConfigError("labeled_per_class must be >= 1 (the SVM needs both classes)");
    if (validation_per_class == 0) throw ConfigError("validation_per_class must be >= 1");
    if (labeled_per_class + validation_per_class > pool_per_class) {
        std::ostringstream msg;
        msg << "labeled (" << labeled_per_class << ") + validation (" << validation_per_class
            << ") exceeds pool_per_class (" << pool_per_class << ")";
        throw ConfigError(msg.str());
    }
    if (test_positive == 0 || test_negative == 0) throw ConfigError("test set needs samples of both classes");
}

std::optional<Label> GroundTruth::find(SampleId id) const {
    auto it = labels_.find(id);
    if (it == labels_.end()) return std::nullopt;
    return it->second;
}

TaskData make_synthetic_task(const DatasetSpec& spec) {
    if (spec.task != Task::synthetic2d) throw ConfigError("make_synthetic_task needs task synthetic2d");
    spec.validate();

    Engine rng = make_engine(spec.seed, "data");
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&](Label cls) {
        const double mean = cls == Label::positive ? 2.0 : -2.0;
        const double x = mean + normal(rng);
        const double y = normal(rng);
        return FeatureVector{x, y};
    };

    TaskData task;
    task.task = Task::synthetic2d;
    task.dimension = 2;
    SampleId next_id = 0;
    for (Label cls : {Label::positive, Label::negative}) {
        for (std::size_t n = 0; n < spec.pool_per_class; ++n) {
            Sample s{next_id++, draw(cls), std::nullopt, Provenance::natural};
            s.label = bayes_label(s.features);
            task.pool.push_back(std::move(s));
            task.pool_class.push_back(cls);
        }
    }
    for (Label cls : {Label::positive, Label::negative}) {
        const std::size_t count = cls == Label::positive ? spec.test_positive : spec.test_negative;
        for (std::size_t n = 0; n < count; ++n) task.test.push_back({next_id++, draw(cls), cls, Provenance::natural});
    }
    return task;
}

TaskData make_mnist_task(const idx::Images& images, const idx::Labels& labels, const DatasetSpec& spec) {
    if (spec.task != Task::mnist56) throw ConfigError("make_mnist_task needs task mnist56");
    spec.validate();
    if (images.images.size() != labels.size()) {
        std::ostringstream msg;
        msg << "image count " << images.images.size() << " does not match label count " << labels.size();
        throw ConfigError(msg.str());
    }

    std::vector<std::size_t> fives;
    std::vector<std::size_t> sixes;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 5) fives.push_back(i);
        if (labels[i] == 6) sixes.push_back(i);
    }
    const std::size_t need_five = spec.pool_per_class + spec.test_positive;
    const std::size_t need_six = spec.pool_per_class + spec.test_negative;
    if (fives.size() < need_five || sixes.size() < need_six) {
        std::ostringstream msg;
        msg << "not enough digits: need " << need_five << " fives and " << need_six << " sixes, have "
            << fives.size() << " and " << sixes.size();
        throw ConfigError(msg.str());
    }

    Engine rng = make_engine(spec.seed, "data");
    std::shuffle(fives.begin(), fives.end(), rng);
    std::shuffle(sixes.begin(), sixes.end(), rng);

    TaskData task;
    task.task = Task::mnist56;
    task.dimension = std::size_t(images.rows) * images.cols;
    SampleId next_id = 0;
    auto take = [&](const std::vector<std::size_t>& from, std::size_t begin, std::size_t count, Label y,
                    std::vector<Sample>& into) {
        for (std::size_t k = begin; k < begin + count; ++k)
            into.push_back({next_id++, images.images[from[k]], y, Provenance::natural});
    };
    take(fives, 0, spec.pool_per_class, Label::positive, task.pool);
    take(sixes, 0, spec.pool_per_class, Label::negative, task.pool);
    task.pool_class.assign(spec.pool_per_class, Label::positive);
    task.pool_class.resize(2 * spec.pool_per_class, Label::negative);
    take(fives, spec.pool_per_class, spec.test_positive, Label::positive, task.test);
    take(sixes, spec.pool_per_class, spec.test_negative, Label::negative, task.test);
    return task;
}

PoolSplit split_pools(const TaskData& task, const DatasetSpec& spec, std::uint64_t split_seed) {
    spec.validate();
    Engine rng(split_seed);

    std::vector<std::size_t> to_labeled;
    std::vector<std::size_t> to_validation;
    std::vector<bool> taken(task.pool.size(), false);
    for (Label cls : {Label::positive, Label::negative}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < task.pool.size(); ++i)
            if (task.pool_class[i] == cls) members.push_back(i);
        if (members.size() < spec.labeled_per_class + spec.validation_per_class)
            throw ConfigError("pool has too few samples of class " + std::string(to_string(cls)));
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t k = 0; k < spec.labeled_per_class; ++k) to_labeled.push_back(members[k]);
        for (std::size_t k = spec.labeled_per_class; k < spec.labeled_per_class + spec.validation_per_class; ++k)
            to_validation.push_back(members[k]);
    }
    std::sort(to_labeled.begin(), to_labeled.end());
    std::sort(to_validation.begin(), to_validation.end());

    PoolSplit split;
    for (std::size_t i : to_labeled) {
        split.pools.labeled.push_back(task.pool[i]);
        taken[i] = true;
    }
    for (std::size_t i : to_validation) {
        split.pools.validation.push_back(task.pool[i]);
        taken[i] = true;
    }
    for (std::size_t i = 0; i < task.pool.size(); ++i) {
        if (taken[i]) continue;
        Sample s = task.pool[i];
        split.hidden.set(s.id, *s.label);
        s.label.reset();
        split.pools.unlabeled.push_back(std::move(s));
    }
    split.pools.test = task.test;

    bool has_pos = false;
    bool has_neg = false;
    for (const auto& s : split.pools.labeled) (*s.label == Label::positive ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw ConfigError("initial labeled set does not contain both classes");
    return split;
}

PoolSplit generate_synthetic(const DatasetSpec& spec) {
    return split_pools(make_synthetic_task(spec), spec, derive_seed(spec.seed, "split"));
}

PoolSplit build_mnist_task(const idx::Images& images, const idx::Labels& labels, const DatasetSpec& spec) {
    return split_pools(make_mnist_task(images, labels, spec), spec, derive_seed(spec.seed, "split"));
}

}  // namespace advactive
