#pragma once

// Random micro-instances for checking the expected-utility score against the direct oracle.

#include <random>

#include "advactive/calibration.hpp"
#include "advactive/linear_svm.hpp"
#include "advactive/types.hpp"
#include "helpers.hpp"
#include "oracles/utility_direct.hpp"

namespace testing {

struct Micro {
    advactive::DataPools pools;
    advactive::SvmTrainer trainer;
    advactive::PlattCalibrator calibrator;
    advactive::CalibratedClassifier clf;
    oracle::Instance reference;
};

/// 2-D points around (+-1, 0): `nl` labeled and `nv` validation (alternating classes), `nu` unlabeled.
inline Micro make_micro(std::uint64_t seed, std::size_t nl, std::size_t nv, std::size_t nu,
                        advactive::SolverConfig solver = {}) {
    using namespace advactive;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.9);
    SampleId id = 0;
    auto draw = [&](int y) { return std::vector<double>{1.0 * y + g(rng), g(rng)}; };

    DataPools pools;
    for (std::size_t i = 0; i < nl; ++i) {
        const int y = i % 2 == 0 ? 1 : -1;
        pools.labeled.push_back(labeled(id++, draw(y), y));
    }
    for (std::size_t i = 0; i < nv; ++i) {
        const int y = i % 2 == 0 ? 1 : -1;
        pools.validation.push_back(labeled(id++, draw(y), y));
    }
    for (std::size_t i = 0; i < nu; ++i) pools.unlabeled.push_back(unlabeled(id++, draw(i % 2 == 0 ? 1 : -1)));

    SvmTrainer trainer(solver);
    PlattCalibrator calibrator(pools.validation);
    CalibratedClassifier clf = calibrator.calibrate(trainer.train(pools.labeled));

    oracle::Instance ref;
    ref.c = solver.c;
    for (const auto& s : pools.labeled) ref.labeled.push_back({s.features, *s.label == Label::positive ? 1 : -1});
    for (const auto& s : pools.validation) ref.validation.push_back({s.features, *s.label == Label::positive ? 1 : -1});
    for (const auto& s : pools.unlabeled) ref.unlabeled.push_back({s.features, 0});
    ref.current = {clf.model().weights, clf.model().bias};
    ref.current_sigmoid = {clf.platt().a, clf.platt().b};
    return {std::move(pools), trainer, std::move(calibrator), std::move(clf), std::move(ref)};
}

}  // namespace testing
