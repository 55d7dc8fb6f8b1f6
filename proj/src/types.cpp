#include "advactive/types.hpp"

#include <cmath>

namespace advactive {

std::string_view to_string(Label y) { return y == Label::positive ? "+1" : "-1"; }

std::string_view to_string(Provenance p) { return p == Provenance::natural ? "natural" : "adversarial"; }

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool all_finite(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace advactive
