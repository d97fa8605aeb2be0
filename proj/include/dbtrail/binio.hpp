#pragma once

#include "dbtrail/error.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace dbtrail::binio {

// Little-endian fixed-width encoding for the index files.

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void bytes(std::string_view s) { buf_.append(s); }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s);
    }

    const std::string& data() const { return buf_; }
    std::string take() { return std::move(buf_); }

private:
    std::string buf_;
};

class Reader {
public:
    Reader(std::string_view data, std::string name) : data_(data), name_(std::move(name)) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
    std::uint32_t u32() {
        auto s = take(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[static_cast<std::size_t>(i)]);
        return v;
    }
    std::uint64_t u64() {
        auto s = take(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[static_cast<std::size_t>(i)]);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string_view bytes(std::size_t n) { return take(n); }
    std::string str() { return std::string(take(u32())); }

    void expect_magic(std::string_view magic) {
        if (data_.size() < magic.size() || data_.substr(0, magic.size()) != magic) {
            throw ParseError(name_ + ": bad magic header (expected " + std::string(magic) + ")");
        }
        pos_ = magic.size();
    }
    bool at_end() const { return pos_ == data_.size(); }
    void expect_end() const {
        if (!at_end()) throw ParseError(name_ + ": trailing bytes");
    }

private:
    std::string_view take(std::size_t n) {
        if (data_.size() - pos_ < n) throw ParseError(name_ + ": truncated");
        auto s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    std::string_view data_;
    std::string name_;
    std::size_t pos_ = 0;
};

} // namespace dbtrail::binio
