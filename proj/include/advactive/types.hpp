#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace advactive {

using FeatureVector = std::vector<double>;
using SampleId = std::uint64_t;

enum class Label : std::int8_t { negative = -1, positive = 1 };

inline double sign_of(Label y) { return y == Label::positive ? 1.0 : -1.0; }
inline Label opposite(Label y) { return y == Label::positive ? Label::negative : Label::positive; }
/// Sign rule shared by classifier and oracles: a zero margin maps to +1.
inline Label label_from_margin(double f) { return f >= 0.0 ? Label::positive : Label::negative; }

std::string_view to_string(Label y);

enum class Provenance : std::uint8_t { natural, adversarial };

std::string_view to_string(Provenance p);

struct Sample {
    SampleId id = 0;
    FeatureVector features;
    std::optional<Label> label;
    Provenance provenance = Provenance::natural;
};

/// The four disjoint sample sets of one active-learning trial.
struct DataPools {
    std::vector<Sample> labeled;     // T_l
    std::vector<Sample> validation;  // V
    std::vector<Sample> unlabeled;   // T_u
    std::vector<Sample> test;

    /// N = |T_l| + |T_u|.
    std::size_t training_size() const { return labeled.size() + unlabeled.size(); }
};

double dot(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> x);

}  // namespace advactive
