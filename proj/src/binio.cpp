#include "featcomp/binio.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include <zlib.h>

namespace featcomp::binio {

std::uint32_t crc32(const std::uint8_t* data, std::size_t size) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    while (size > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
        crc = ::crc32(crc, data, chunk);
        data += chunk;
        size -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

void Writer::commit(const std::filesystem::path& path) {
    if (path.empty()) throw std::runtime_error("cannot write to an empty path");
    le(crc32(buf_.data(), buf_.size()));
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out.write(reinterpret_cast<const char*>(buf_.data()), static_cast<std::streamsize>(buf_.size()));
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
    buf_.resize(buf_.size() - 4);
}

Reader::Reader(const std::filesystem::path& path) {
    if (path.empty()) throw std::runtime_error("cannot read from an empty path");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    if (data_.size() < 4) throw FormatError("file too short for a checksum");
    payload_end_ = data_.size() - 4;
    std::uint32_t stored = 0;
    for (std::size_t i = 0; i < 4; ++i) stored |= static_cast<std::uint32_t>(data_[payload_end_ + i]) << (8 * i);
    if (stored != crc32(data_.data(), payload_end_)) throw FormatError("checksum mismatch");
}

}  // namespace featcomp::binio
