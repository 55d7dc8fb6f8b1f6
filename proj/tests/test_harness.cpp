#include <doctest.h>

#include <cmath>
#include <set>

#include "advactive/errors.hpp"
#include "advactive/harness.hpp"
#include "advactive/rng.hpp"

using namespace advactive;

namespace {

ExperimentConfig small_config(std::size_t budget, std::size_t trials) {
    ExperimentConfig c = ExperimentConfig::defaults_for(Task::synthetic2d);
    c.budget = budget;
    c.trials = trials;
    return c;
}

std::set<SampleId> ids(const std::vector<Sample>& v) {
    std::set<SampleId> out;
    for (const auto& s : v) out.insert(s.id);
    return out;
}

bool same_record(const TrialRecord& a, const TrialRecord& b) {
    if (a.seed != b.seed || a.exhausted != b.exhausted || a.rounds.size() != b.rounds.size()) return false;
    for (std::size_t r = 0; r < a.rounds.size(); ++r) {
        const auto& x = a.rounds[r];
        const auto& y = b.rounds[r];
        if (x.test_error != y.test_error || x.chosen != y.chosen || x.model_hash != y.model_hash ||
            x.injected != y.injected || x.branch != y.branch || x.chosen_provenance != y.chosen_provenance)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("harness: one round moves one sample from T_u to T_l") {
    for (bool attack : {false, true}) {
        ExperimentConfig c = small_config(5, 1);
        c.attack.enabled = attack;
        const TaskData task = load_task(c);
        const Oracle oracle = make_oracle(task);
        Trial trial(c, task, oracle, 0);
        const std::size_t nl = trial.pools().labeled.size();
        const std::size_t nu = trial.pools().unlabeled.size();
        const auto ev = trial.run_round();
        CHECK(trial.pools().labeled.size() == nl + 1);
        CHECK(trial.pools().unlabeled.size() == (attack ? nu : nu - 1));
        CHECK(ev.labeled_size == nl + 1);
        REQUIRE(ev.chosen.has_value());
        CHECK(trial.pools().labeled.back().id == *ev.chosen);
        CHECK(trial.pools().labeled.back().label == ev.oracle_label);
        CHECK(ev.injected.has_value() == attack);
        if (attack) {
            CHECK(ev.chosen_provenance == Provenance::adversarial);
            CHECK(ev.chosen == ev.injected);
            CHECK(trial.injections() == 1);
        }
        CHECK(ev.model_hash == model_hash(trial.classifier().model()));
    }
}

TEST_CASE("harness: test samples never reach the training pools") {
    ExperimentConfig c = small_config(10, 1);
    c.attack.enabled = true;
    const TaskData task = load_task(c);
    const Oracle oracle = make_oracle(task);
    Trial trial(c, task, oracle, 3);
    const auto test_ids = ids(trial.pools().test);
    for (int r = 0; r < 10; ++r) {
        trial.run_round();
        for (const auto* pool : {&trial.pools().labeled, &trial.pools().unlabeled, &trial.pools().validation})
            for (const auto& s : *pool) CHECK(test_ids.count(s.id) == 0);
    }
}

TEST_CASE("harness: hidden labels of natural T_u samples match the Bayes oracle") {
    ExperimentConfig c = small_config(1, 1);
    const TaskData task = load_task(c);
    const Oracle oracle = make_oracle(task);
    Trial trial(c, task, oracle, 0);
    for (const auto& s : trial.pools().unlabeled) CHECK(trial.hidden_labels().find(s.id) == oracle.label(s.features));
}

TEST_CASE("harness: exhausting T_u without attack") {
    ExperimentConfig c = small_config(190, 1);
    const auto result = run_experiment(c);
    const auto& rec = result.trials[0];
    CHECK(rec.rounds.size() == 191);
    CHECK_FALSE(rec.exhausted);
    CHECK(rec.rounds.back().unlabeled_size == 0);
    CHECK(rec.rounds.back().labeled_size == 200);

    c.budget = 191;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("harness: early stop pads the curve and flags the trial") {
    ExperimentConfig c = small_config(2, 1);
    c.dataset.pool_per_class = 11;
    c.dataset.labeled_per_class = 5;
    c.dataset.validation_per_class = 5;  // two unlabeled samples in total
    c.validate();
    const TaskData task = load_task(c);
    const Oracle oracle = make_oracle(task);
    // run_trial skips the budget check, which reaches the padding path
    ExperimentConfig loose = c;
    loose.budget = 5;
    const auto rec = run_trial(loose, task, oracle, 0);
    CHECK(rec.exhausted);
    REQUIRE(rec.rounds.size() == 6);
    CHECK(rec.rounds[5].test_error == rec.rounds[2].test_error);
    CHECK_FALSE(rec.rounds[4].chosen.has_value());
    CHECK(rec.rounds[4].round == 4);
}

TEST_CASE("harness: identical configs give identical records") {
    ExperimentConfig c = small_config(8, 2);
    c.strategy = {StrategyKind::mixed, 0.5, Companion::meu};
    c.attack.enabled = true;
    const auto a = run_experiment(c);
    const auto b = run_experiment(c);
    REQUIRE(a.trials.size() == 2);
    for (std::size_t t = 0; t < 2; ++t) CHECK(same_record(a.trials[t], b.trials[t]));
    CHECK(a.curve.mean == b.curve.mean);
    CHECK_FALSE(same_record(a.trials[0], a.trials[1]));
}

TEST_CASE("harness: trial seeds change the split but not the pool") {
    ExperimentConfig c = small_config(0, 1);
    const TaskData task = load_task(c);
    const Oracle oracle = make_oracle(task);
    const Trial a(c, task, oracle, 0);
    const Trial b(c, task, oracle, 1);
    CHECK(a.seed() != b.seed());
    CHECK(ids(a.pools().labeled) != ids(b.pools().labeled));
    auto all = [](const Trial& t) {
        auto s = ids(t.pools().labeled);
        for (auto id : ids(t.pools().validation)) s.insert(id);
        for (auto id : ids(t.pools().unlabeled)) s.insert(id);
        return s;
    };
    CHECK(all(a) == all(b));
    CHECK(trial_seed(1, 0) == trial_seed(1, 0));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}

TEST_CASE("harness: budget 0 keeps only the initial error") {
    const auto result = run_experiment(small_config(0, 3));
    for (const auto& t : result.trials) {
        REQUIRE(t.rounds.size() == 1);
        CHECK(t.rounds[0].round == 0);
        CHECK_FALSE(t.rounds[0].chosen.has_value());
    }
    CHECK(result.curve.mean.size() == 1);
}

TEST_CASE("harness: round 0 does not depend on the strategy") {
    ExperimentConfig a = small_config(2, 3);
    ExperimentConfig b = a;
    b.strategy = {StrategyKind::meu, 0.0, Companion::meu};
    b.attack.enabled = true;
    const auto ra = run_experiment(a);
    const auto rb = run_experiment(b);
    for (std::size_t t = 0; t < 3; ++t) CHECK(ra.trials[t].rounds[0].test_error == rb.trials[t].rounds[0].test_error);
}

TEST_CASE("harness: aggregation") {
    const auto flat = aggregate(std::vector<std::vector<double>>(10, std::vector<double>(6, 0.3)));
    for (double m : flat.mean) CHECK(m == doctest::Approx(0.3).epsilon(1e-15));
    for (double s : flat.standard_error()) CHECK(s == doctest::Approx(0.0));

    const std::vector<std::vector<double>> curves{{0.1, 0.2}, {0.3, 0.5}, {0.2, 0.2}};
    const auto c = aggregate(curves);
    CHECK(c.mean[0] == doctest::Approx((0.1 + 0.3 + 0.2) / 3));
    CHECK(c.mean[1] == doctest::Approx((0.2 + 0.5 + 0.2) / 3));
    const double m = c.mean[1];
    const double sd = std::sqrt(((0.2 - m) * (0.2 - m) * 2 + (0.5 - m) * (0.5 - m)) / 2);
    CHECK(c.standard_error()[1] == doctest::Approx(sd / std::sqrt(3.0)));

    CHECK_THROWS_AS(aggregate(std::vector<std::vector<double>>{}), ValidationError);
    CHECK_THROWS_AS(aggregate(std::vector<std::vector<double>>{{0.1}, {0.1, 0.2}}), ValidationError);
}

TEST_CASE("harness: config validation") {
    ExperimentConfig c = small_config(10, 0);
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.trials = 1;
    c.strategy.mix_probability = 2.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config(500, 1);
    c.attack.enabled = true;
    CHECK_NOTHROW(c.validate());
    ExperimentConfig m = ExperimentConfig::defaults_for(Task::mnist56);
    CHECK(m.budget == 100);
    CHECK_THROWS_AS(load_task(m), ConfigError);
    m.mnist_images = "/nonexistent/images";
    m.mnist_labels = "/nonexistent/labels";
    CHECK_THROWS_AS(run_experiment(m), Error);
}

TEST_CASE("harness: a failing trial leaves partial results behind") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "advactive_partial";
    fs::remove_all(dir);
    ExperimentConfig c = small_config(2, 2);
    c.output_dir = dir.string();
    TaskData task = load_task(c);
    const Oracle oracle = make_oracle(task);
    // no stratum left for class +1, so the split throws
    for (auto& cls : task.pool_class) cls = Label::negative;
    CHECK_THROWS_AS(run_experiment(c, task, oracle), ConfigError);
    CHECK(fs::exists(dir / "error.txt"));
    CHECK_FALSE(fs::exists(dir / "curve.csv"));
    fs::remove_all(dir);
}
