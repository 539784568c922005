#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace leezk {

// Little-endian primitive codec shared by commitment payloads, protocol
// messages and wire frames.

inline void put_u8(std::vector<uint8_t>& out, uint8_t v) { out.push_back(v); }

inline void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_i16(std::vector<uint8_t>& out, int16_t v) {
    put_u16(out, static_cast<uint16_t>(v));
}

inline void put_bytes(std::vector<uint8_t>& out, std::span<const uint8_t> b) {
    out.insert(out.end(), b.begin(), b.end());
}

// Bounds-checked sequential reader over a byte span. Every accessor returns
// nullopt instead of reading past the end, so decoders built on it cannot
// overrun adversarial input.
class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return remaining() == 0; }

    std::optional<uint8_t> u8() {
        if (remaining() < 1) return std::nullopt;
        return data_[pos_++];
    }

    std::optional<uint16_t> u16() {
        if (remaining() < 2) return std::nullopt;
        uint16_t v = static_cast<uint16_t>(data_[pos_]) |
                     static_cast<uint16_t>(data_[pos_ + 1]) << 8;
        pos_ += 2;
        return v;
    }

    std::optional<uint32_t> u32() {
        if (remaining() < 4) return std::nullopt;
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::optional<uint64_t> u64() {
        if (remaining() < 8) return std::nullopt;
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }

    std::optional<int16_t> i16() {
        auto v = u16();
        if (!v) return std::nullopt;
        return static_cast<int16_t>(*v);
    }

    std::optional<std::span<const uint8_t>> bytes(size_t n) {
        if (remaining() < n) return std::nullopt;
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

private:
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

}  // namespace leezk
