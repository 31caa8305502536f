#pragma once
// Little-endian byte stream helpers and the CRC-32 used by the containers.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hitab/errors.hpp"

namespace hitab {

// CRC-32 (IEEE 802.3 polynomial, reflected), as in zlib's crc32().
std::uint32_t crc32(std::span<const std::uint8_t> data, std::uint32_t seed = 0);

class ByteWriter {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u32le(std::uint32_t v);
    void u64le(std::uint64_t v);
    void raw(std::span<const std::uint8_t> data);
    // Low count bytes of v, little-endian; count <= 8.
    void uint_le(std::uint64_t v, std::size_t count);

    // Appends the CRC of everything written so far.
    void finish_with_crc();

    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32le();
    std::uint64_t u64le();
    std::uint64_t uint_le(std::size_t count);
    void raw(std::span<std::uint8_t> out);
    void expect_magic(const char magic[4], const std::string& what);

    // Reads a u32 CRC and checks it against everything consumed since
    // `start`; containers nest, so each verifies only its own range.
    void verify_crc_since(std::size_t start, const std::string& what);

    std::size_t offset() const { return off_; }
    std::size_t remaining() const { return data_.size() - off_; }

private:
    void need(std::size_t n) const;

    std::span<const std::uint8_t> data_;
    std::size_t off_ = 0;
};

// Whole-file helpers.
std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);

} // namespace hitab
