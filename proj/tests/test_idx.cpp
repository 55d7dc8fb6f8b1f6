#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "advactive/errors.hpp"
#include "advactive/idx.hpp"

using namespace advactive;

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::vector<std::uint8_t> image_file(std::uint32_t count, std::uint32_t rows, std::uint32_t cols, std::uint32_t seed) {
    std::vector<std::uint8_t> out;
    put_u32(out, 2051);
    put_u32(out, count);
    put_u32(out, rows);
    put_u32(out, cols);
    std::mt19937 rng(seed);
    for (std::uint32_t i = 0; i < count * rows * cols; ++i) out.push_back(static_cast<std::uint8_t>(rng() & 0xff));
    return out;
}

}  // namespace

TEST_CASE("idx: three 28x28 images decode to 784-dimensional vectors") {
    const auto bytes = image_file(3, 28, 28, 7);
    const auto images = idx::parse_images(bytes);
    CHECK(images.rows == 28);
    CHECK(images.cols == 28);
    REQUIRE(images.images.size() == 3);
    for (const auto& img : images.images) CHECK(img.size() == 784);
    // second image, pixel (row 4, col 9): header is 16 bytes, row-major payload
    const std::size_t offset = 16 + 784 + 4 * 28 + 9;
    CHECK(images.images[1][4 * 28 + 9] == doctest::Approx(bytes[offset] / 255.0));
    for (const auto& img : images.images)
        for (double v : img) CHECK((v >= 0.0 && v <= 1.0));
}

TEST_CASE("idx: empty label file") {
    std::vector<std::uint8_t> bytes;
    put_u32(bytes, 2049);
    put_u32(bytes, 0);
    CHECK(idx::parse_labels(bytes).empty());
    const auto content = idx::parse(bytes);
    REQUIRE(std::holds_alternative<idx::Labels>(content));
}

TEST_CASE("idx: label values are returned as digits") {
    std::vector<std::uint8_t> bytes;
    put_u32(bytes, 2049);
    put_u32(bytes, 4);
    for (std::uint8_t d : {5, 6, 0, 9}) bytes.push_back(d);
    CHECK(idx::parse_labels(bytes) == idx::Labels{5, 6, 0, 9});
}

TEST_CASE("idx: truncation reports expected and actual byte counts") {
    auto bytes = image_file(2, 3, 3, 1);
    const std::size_t full = bytes.size();
    bytes.resize(full - 5);
    try {
        idx::parse(bytes);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find(std::to_string(full)) != std::string::npos);
        CHECK(msg.find(std::to_string(full - 5)) != std::string::npos);
        CHECK(e.offset() == full - 5);
    }
}

TEST_CASE("idx: truncated header") {
    const std::vector<std::uint8_t> bytes{0, 0, 8, 3, 0, 0};
    CHECK_THROWS_AS(idx::parse(bytes), ParseError);
}

TEST_CASE("idx: bad magic word") {
    auto bytes = image_file(1, 2, 2, 1);
    bytes[3] = 0x04;
    CHECK_THROWS_AS(idx::parse(bytes), ParseError);
    std::vector<std::uint8_t> labels;
    put_u32(labels, 2049);
    put_u32(labels, 0);
    CHECK_THROWS_AS(idx::parse_images(labels), ParseError);
    CHECK_THROWS_AS(idx::parse_labels(image_file(1, 2, 2, 1)), ParseError);
}

TEST_CASE("idx: unsupported element type or rank") {
    std::vector<std::uint8_t> bytes;
    put_u32(bytes, 0x00000d03);  // float elements
    put_u32(bytes, 1);
    put_u32(bytes, 1);
    put_u32(bytes, 1);
    bytes.resize(bytes.size() + 4);
    CHECK_THROWS_AS(idx::parse(bytes), ParseError);

    std::vector<std::uint8_t> rank4;
    put_u32(rank4, 0x00000804);
    for (int i = 0; i < 4; ++i) put_u32(rank4, 1);
    rank4.push_back(0);
    CHECK_THROWS_AS(idx::parse(rank4), ParseError);
}

TEST_CASE("idx: round trip reproduces the bytes") {
    for (std::uint32_t seed = 0; seed < 20; ++seed) {
        const auto bytes = image_file(1 + seed % 4, 1 + seed % 5, 2 + seed % 3, seed);
        CHECK(idx::serialize(idx::parse_images(bytes)) == bytes);
    }
    std::vector<std::uint8_t> labels;
    put_u32(labels, 2049);
    put_u32(labels, 300);
    for (int i = 0; i < 300; ++i) labels.push_back(static_cast<std::uint8_t>(i % 10));
    CHECK(idx::serialize(idx::parse_labels(labels)) == labels);
}

TEST_CASE("idx: trailing bytes are ignored") {
    auto bytes = image_file(1, 2, 2, 3);
    const auto clean = idx::parse_images(bytes);
    bytes.push_back(0xab);
    CHECK(idx::parse_images(bytes).images == clean.images);
}

TEST_CASE("idx: missing file") {
    CHECK_THROWS_AS(idx::read_file("/nonexistent/idx-file"), Error);
}
