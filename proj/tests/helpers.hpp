#pragma once

#include <initializer_list>
#include <vector>

#include "advactive/types.hpp"

namespace testing {

inline advactive::Sample labeled(advactive::SampleId id, std::vector<double> x, int y) {
    return {id, std::move(x), y > 0 ? advactive::Label::positive : advactive::Label::negative,
            advactive::Provenance::natural};
}

inline advactive::Sample unlabeled(advactive::SampleId id, std::vector<double> x) {
    return {id, std::move(x), std::nullopt, advactive::Provenance::natural};
}

}  // namespace testing
