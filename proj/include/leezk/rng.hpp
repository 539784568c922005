#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace leezk {

// Deterministic seedable random stream. One instance per call context; never
// shared between concurrent tasks. Child streams are derived with split():
// the child is seeded with the parent's next 64-bit draw.
//
// Not a cryptographically strong source: drawing salts and masks from it
// keeps transcripts reproducible for tests. A production deployment would
// inject an OS-backed stream here instead.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform integer in [lo, hi], rejection-sampled so there is no modulo
    // bias. Requires lo <= hi.
    int64_t uniform(int64_t lo, int64_t hi) {
        uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
        if (span == 0) return static_cast<int64_t>(next_u64());
        uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + static_cast<int64_t>(v % span);
    }

    void fill_bytes(uint8_t* out, size_t n) {
        size_t i = 0;
        while (i < n) {
            uint64_t v = next_u64();
            for (int b = 0; b < 8 && i < n; ++b, ++i) {
                out[i] = static_cast<uint8_t>(v >> (8 * b));
            }
        }
    }

    std::array<uint8_t, 32> salt32() {
        std::array<uint8_t, 32> s{};
        fill_bytes(s.data(), s.size());
        return s;
    }

    Rng split() { return Rng(next_u64()); }

    // Fisher-Yates.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform(0, static_cast<int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace leezk
