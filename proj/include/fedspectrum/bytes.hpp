#ifndef FEDSPECTRUM_BYTES_HPP
#define FEDSPECTRUM_BYTES_HPP
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace fedspectrum::bytes {

using buffer = std::vector<std::uint8_t>;

inline void put_f64_le(buffer& out, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::uint8_t>(bits & 0xFFu));
        bits >>= 8;
    }
}

inline void put_text(buffer& out, std::string_view s) { out.insert(out.end(), s.begin(), s.end()); }

/// Sequential reader over a byte span; every read checks for truncation.
class reader {
public:
    explicit reader(std::span<const std::uint8_t> data, std::string what)
        : data_{data}, what_{std::move(what)} {}

    bool at_end() const noexcept { return pos_ == data_.size(); }
    std::size_t remaining() const noexcept { return data_.size() - pos_; }

    /// Reads up to (not including) the next '\n'.
    std::string line(const char* field) {
        std::string s;
        while (pos_ < data_.size() && data_[pos_] != '\n') {
            s.push_back(static_cast<char>(data_[pos_++]));
        }
        if (pos_ == data_.size()) {
            throw format_error(what_ + ": truncated while reading " + field);
        }
        ++pos_;
        return s;
    }

    double f64_le(const char* field) {
        need(8, field);
        std::uint64_t bits = 0;
        for (int i = 7; i >= 0; --i) {
            bits = (bits << 8) | data_[pos_ + static_cast<std::size_t>(i)];
        }
        pos_ += 8;
        return std::bit_cast<double>(bits);
    }

    std::uint8_t u8(const char* field) {
        need(1, field);
        return data_[pos_++];
    }

    void need(std::size_t n, const char* field) const {
        if (remaining() < n) {
            throw format_error(what_ + ": truncated payload in " + field);
        }
    }

private:
    std::span<const std::uint8_t> data_;
    std::string what_;
    std::size_t pos_ = 0;
};

inline void write_file(const std::string& path, const buffer& data) {
    std::ofstream f{path, std::ios::binary | std::ios::trunc};
    if (!f) {
        throw io_error("cannot open for writing: " + path);
    }
    f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!f) {
        throw io_error("write failed: " + path);
    }
}

inline buffer read_file(const std::string& path) {
    std::ifstream f{path, std::ios::binary};
    if (!f) {
        throw io_error("cannot open for reading: " + path);
    }
    return buffer{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace fedspectrum::bytes

#endif  // FEDSPECTRUM_BYTES_HPP
