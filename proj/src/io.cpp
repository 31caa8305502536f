#include "hitab/io.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace hitab {

namespace {

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int j = 0; j < 8; ++j)
            c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        t[i] = c;
    }
    return t;
}

} // namespace

std::uint32_t crc32(std::span<const std::uint8_t> data, std::uint32_t seed) {
    static const auto table = make_crc_table();
    std::uint32_t c = seed ^ 0xFFFFFFFFu;
    for (std::uint8_t b : data)
        c = table[(c ^ b) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

void ByteWriter::u32le(std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64le(std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::raw(std::span<const std::uint8_t> data) {
    bytes_.insert(bytes_.end(), data.begin(), data.end());
}

void ByteWriter::uint_le(std::uint64_t v, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i)
        bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::finish_with_crc() {
    u32le(crc32(bytes_));
}

void ByteReader::need(std::size_t n) const {
    if (off_ + n > data_.size())
        throw truncated_error("container truncated");
}

std::uint8_t ByteReader::u8() {
    need(1);
    return data_[off_++];
}

std::uint32_t ByteReader::u32le() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(data_[off_++]) << (8 * i);
    return v;
}

std::uint64_t ByteReader::u64le() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(data_[off_++]) << (8 * i);
    return v;
}

std::uint64_t ByteReader::uint_le(std::size_t count) {
    need(count);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < count; ++i)
        v |= static_cast<std::uint64_t>(data_[off_++]) << (8 * i);
    return v;
}

void ByteReader::raw(std::span<std::uint8_t> out) {
    need(out.size());
    std::memcpy(out.data(), data_.data() + off_, out.size());
    off_ += out.size();
}

void ByteReader::expect_magic(const char magic[4], const std::string& what) {
    need(4);
    if (std::memcmp(data_.data() + off_, magic, 4) != 0)
        throw bad_magic_error(what + ": bad magic");
    off_ += 4;
}

void ByteReader::verify_crc_since(std::size_t start, const std::string& what) {
    auto body = data_.subspan(start, off_ - start);
    std::uint32_t stored = u32le();
    if (crc32(body) != stored)
        throw bad_checksum_error(what + ": checksum mismatch");
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

} // namespace hitab
