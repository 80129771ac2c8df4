#pragma once
// Little-endian byte buffers with a trailing CRC32, shared by the dataset and checkpoint formats.

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace featcomp::binio {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::uint32_t crc32(const std::uint8_t* data, std::size_t size);

class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }
    template <class T>
    void le(T value) {
        static_assert(std::is_integral_v<T>);
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            buf_.push_back(static_cast<std::uint8_t>(static_cast<std::make_unsigned_t<T>>(value) >> (8 * i)));
        }
    }
    void f32(float v) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        le(bits);
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        le(bits);
    }
    void str(std::string_view s) {
        le(static_cast<std::uint16_t>(s.size()));
        bytes(s.data(), s.size());
    }
    /// Appends CRC32 of everything written so far and writes the file atomically.
    void commit(const std::filesystem::path& path);

    const std::vector<std::uint8_t>& buffer() const noexcept { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class Reader {
public:
    /// Loads the file and verifies the trailing CRC32.
    explicit Reader(const std::filesystem::path& path);

    void bytes(void* p, std::size_t n) {
        need(n);
        std::memcpy(p, data_.data() + pos_, n);
        pos_ += n;
    }
    template <class T>
    T le() {
        static_assert(std::is_integral_v<T>);
        need(sizeof(T));
        std::make_unsigned_t<T> v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            v |= static_cast<std::make_unsigned_t<T>>(data_[pos_ + i]) << (8 * i);
        }
        pos_ += sizeof(T);
        return static_cast<T>(v);
    }
    float f32() {
        auto bits = le<std::uint32_t>();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    double f64() {
        auto bits = le<std::uint64_t>();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::string str() {
        auto n = le<std::uint16_t>();
        need(n);
        std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    std::size_t remaining() const noexcept { return payload_end_ - pos_; }
    void expect_end() const {
        if (pos_ != payload_end_) throw FormatError("trailing bytes after payload");
    }

private:
    void need(std::size_t n) const {
        if (n > payload_end_ - pos_) throw FormatError("truncated payload");
    }

    std::vector<std::uint8_t> data_;
    std::size_t pos_ = 0;
    std::size_t payload_end_ = 0;
};

}  // namespace featcomp::binio
