#include "advactive/idx.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "advactive/errors.hpp"

namespace advactive::idx {
namespace {

std::uint32_t read_be_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    if (bytes.size() < offset + 4) {
        std::ostringstream msg;
        msg << "IDX header truncated: expected " << offset + 4 << " bytes, got " << bytes.size();
        throw ParseError(msg.str(), bytes.size());
    }
    return (std::uint32_t(bytes[offset]) << 24) | (std::uint32_t(bytes[offset + 1]) << 16) |
           (std::uint32_t(bytes[offset + 2]) << 8) | std::uint32_t(bytes[offset + 3]);
}

void write_be_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void require_payload(std::span<const std::uint8_t> bytes, std::size_t header, std::uint64_t payload) {
    const std::uint64_t expected = header + payload;
    if (bytes.size() < expected) {
        std::ostringstream msg;
        msg << "IDX payload truncated: expected " << expected << " bytes, got " << bytes.size();
        throw ParseError(msg.str(), bytes.size());
    }
}

std::uint8_t to_byte(double v) {
    const double scaled = std::round(v * 255.0);
    if (!(scaled >= 0.0 && scaled <= 255.0)) throw ValidationError("pixel value outside [0,1]");
    return static_cast<std::uint8_t>(scaled);
}

}  // namespace

Images parse_images(std::span<const std::uint8_t> bytes) {
    const std::uint32_t magic = read_be_u32(bytes, 0);
    if (magic != kImageMagic) {
        std::ostringstream msg;
        msg << "bad IDX image magic 0x" << std::hex << magic << " (expected 0x803)";
        throw ParseError(msg.str(), 0);
    }
    const std::uint32_t count = read_be_u32(bytes, 4);
    Images out;
    out.rows = read_be_u32(bytes, 8);
    out.cols = read_be_u32(bytes, 12);
    if (out.rows == 0 || out.cols == 0) throw ParseError("IDX image dimensions must be non-zero", 8);
    const std::uint64_t pixels = std::uint64_t(out.rows) * out.cols;
    require_payload(bytes, 16, pixels * count);

    out.images.reserve(count);
    std::size_t offset = 16;
    for (std::uint32_t n = 0; n < count; ++n) {
        FeatureVector img(pixels);
        for (auto& v : img) v = bytes[offset++] / 255.0;
        out.images.push_back(std::move(img));
    }
    return out;
}

Labels parse_labels(std::span<const std::uint8_t> bytes) {
    const std::uint32_t magic = read_be_u32(bytes, 0);
    if (magic != kLabelMagic) {
        std::ostringstream msg;
        msg << "bad IDX label magic 0x" << std::hex << magic << " (expected 0x801)";
        throw ParseError(msg.str(), 0);
    }
    const std::uint32_t count = read_be_u32(bytes, 4);
    require_payload(bytes, 8, count);
    return Labels(bytes.begin() + 8, bytes.begin() + 8 + count);
}

Content parse(std::span<const std::uint8_t> bytes) {
    const std::uint32_t magic = read_be_u32(bytes, 0);
    if (magic == kImageMagic) return parse_images(bytes);
    if (magic == kLabelMagic) return parse_labels(bytes);
    // Unsigned-byte IDX with an unsupported rank.
    if ((magic & 0xFFFFFF00u) == 0x00000800u) {
        std::ostringstream msg;
        msg << "IDX dimension mismatch: rank " << (magic & 0xFFu) << " is neither 1 (labels) nor 3 (images)";
        throw ParseError(msg.str(), 3);
    }
    std::ostringstream msg;
    msg << "bad IDX magic 0x" << std::hex << magic;
    throw ParseError(msg.str(), 0);
}

std::vector<std::uint8_t> serialize(const Images& images) {
    std::vector<std::uint8_t> out;
    const std::size_t pixels = std::size_t(images.rows) * images.cols;
    out.reserve(16 + pixels * images.images.size());
    write_be_u32(out, kImageMagic);
    write_be_u32(out, static_cast<std::uint32_t>(images.images.size()));
    write_be_u32(out, images.rows);
    write_be_u32(out, images.cols);
    for (const auto& img : images.images) {
        if (img.size() != pixels) throw ValidationError("image size does not match rows*cols");
        for (double v : img) out.push_back(to_byte(v));
    }
    return out;
}

std::vector<std::uint8_t> serialize(const Labels& labels) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + labels.size());
    write_be_u32(out, kLabelMagic);
    write_be_u32(out, static_cast<std::uint32_t>(labels.size()));
    out.insert(out.end(), labels.begin(), labels.end());
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace advactive::idx
