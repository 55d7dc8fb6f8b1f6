#pragma once

// Big-endian IDX files as distributed with MNIST:
//
//   images: 0x00000803, count, rows, cols, count*rows*cols unsigned bytes
//   labels: 0x00000801, count, count unsigned bytes
//
// Pixels are scaled by 1/255 into [0, 1] on load and rounded back on save,
// so a parse/serialize cycle reproduces the original bytes.

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "advactive/types.hpp"

namespace advactive::idx {

inline constexpr std::uint32_t kImageMagic = 0x00000803;
inline constexpr std::uint32_t kLabelMagic = 0x00000801;

struct Images {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<FeatureVector> images;  // row-major, rows*cols entries each
};

using Labels = std::vector<std::uint8_t>;
using Content = std::variant<Images, Labels>;

/// Decodes either file kind, dispatching on the magic word.
/// Throws ParseError on a bad magic word, a truncated payload or a dimension mismatch.
/// Bytes past the declared payload are ignored.
Content parse(std::span<const std::uint8_t> bytes);

Images parse_images(std::span<const std::uint8_t> bytes);
Labels parse_labels(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize(const Images& images);
std::vector<std::uint8_t> serialize(const Labels& labels);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace advactive::idx
