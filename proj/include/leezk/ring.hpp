#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leezk/rng.hpp"

namespace leezk {

// Arithmetic over Z_m with centered representatives.
//
// Odd m = 2l+1: entries lie in {-l, ..., l}.
// Even m = 2l:  entries lie in {-l+1, ..., l}; the shared class l == -l
// (mod m) is always written +l so that every element has a unique encoding.
//
// m is restricted to [4, 65535] so representatives fit a signed 16-bit
// integer, which fixes the width of the canonical byte encoding.
struct Modulus {
    int32_t m = 0;
    int32_t ell = 0;

    Modulus() = default;
    explicit Modulus(int32_t modulus);

    bool odd() const { return (m & 1) != 0; }
    int32_t min_rep() const { return odd() ? -ell : -ell + 1; }
    int32_t max_rep() const { return ell; }
    bool canonical(int64_t x) const { return x >= min_rep() && x <= max_rep(); }

    friend bool operator==(const Modulus&, const Modulus&) = default;
};

// Centered representative of x mod m.
int16_t center_mod(int64_t x, const Modulus& mod);

// Immutable vector over Z_m in canonical form. All arithmetic reduces
// eagerly, so canonical form never drifts across modules.
class ZmVector {
public:
    ZmVector() = default;
    ZmVector(const Modulus& mod, std::span<const int64_t> raw);
    ZmVector(const Modulus& mod, std::initializer_list<int64_t> raw)
        : ZmVector(mod, std::span<const int64_t>(raw.begin(), raw.size())) {}

    static ZmVector zeros(const Modulus& mod, size_t n);
    // Validates that every entry is already canonical; throws otherwise.
    static ZmVector from_canonical(const Modulus& mod, std::vector<int16_t> entries);
    static ZmVector random(const Modulus& mod, size_t n, Rng& rng);

    size_t size() const { return entries_.size(); }
    int16_t operator[](size_t i) const { return entries_[i]; }
    const std::vector<int16_t>& entries() const { return entries_; }
    const Modulus& modulus() const { return mod_; }

    ZmVector negated() const;
    ZmVector scaled(int64_t c) const;
    ZmVector slice(size_t from, size_t len) const;

    friend bool operator==(const ZmVector&, const ZmVector&) = default;

private:
    Modulus mod_;
    std::vector<int16_t> entries_;
};

ZmVector operator+(const ZmVector& a, const ZmVector& b);
ZmVector operator-(const ZmVector& a, const ZmVector& b);
ZmVector concat(const ZmVector& a, const ZmVector& b);

// Immutable row-major matrix over Z_m in canonical form.
class ZmMatrix {
public:
    ZmMatrix() = default;
    ZmMatrix(const Modulus& mod, size_t rows, size_t cols, std::span<const int64_t> raw);
    ZmMatrix(const Modulus& mod, size_t rows, size_t cols, std::initializer_list<int64_t> raw)
        : ZmMatrix(mod, rows, cols, std::span<const int64_t>(raw.begin(), raw.size())) {}

    static ZmMatrix zeros(const Modulus& mod, size_t rows, size_t cols);
    static ZmMatrix identity(const Modulus& mod, size_t n);
    static ZmMatrix from_canonical(const Modulus& mod, size_t rows, size_t cols,
                                   std::vector<int16_t> entries);
    static ZmMatrix random(const Modulus& mod, size_t rows, size_t cols, Rng& rng);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    int16_t at(size_t r, size_t c) const { return entries_[r * cols_ + c]; }
    std::span<const int16_t> row(size_t r) const {
        return std::span<const int16_t>(entries_).subspan(r * cols_, cols_);
    }
    const std::vector<int16_t>& entries() const { return entries_; }
    const Modulus& modulus() const { return mod_; }

    ZmMatrix negated() const;
    ZmMatrix scaled(int64_t c) const;
    // Result row i is source row images[i]-1 (1-based image list).
    ZmMatrix permuted_rows(const std::vector<uint32_t>& images) const;
    // Rows of `top` followed by rows of `bottom`.
    static ZmMatrix stack(const ZmMatrix& top, const ZmMatrix& bottom);

    friend bool operator==(const ZmMatrix&, const ZmMatrix&) = default;

private:
    Modulus mod_;
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<int16_t> entries_;
};

ZmMatrix operator+(const ZmMatrix& a, const ZmMatrix& b);
ZmMatrix operator-(const ZmMatrix& a, const ZmMatrix& b);

// Lee weight: sum of |entry| over the centered representatives.
int64_t lee_weight(const ZmVector& v);
// Lee distance = lee_weight(x - y); throws on length/modulus mismatch.
int64_t lee_distance(const ZmVector& x, const ZmVector& y);
// Real integer sum of the representatives, NOT reduced mod m.
int64_t vector_sum(const ZmVector& v);
inline bool is_balanced(const ZmVector& v) { return vector_sum(v) == 0; }

// v * H reduced to canonical form; length(v) must equal rows(H).
ZmVector syndrome(const ZmVector& v, const ZmMatrix& H);

// Canonical byte encodings (wire and commitment contract):
//   element: 2-byte little-endian two's-complement signed representative
//   vector:  4-byte LE count, then elements
//   matrix:  4-byte LE rows, 4-byte LE cols, then row-major elements
std::vector<uint8_t> encode_vector(const ZmVector& v);
std::vector<uint8_t> encode_matrix(const ZmMatrix& m);
// Decoders validate counts, canonical ranges and exact consumption.
std::optional<ZmVector> decode_vector(std::span<const uint8_t> bytes, const Modulus& mod,
                                      std::string* err = nullptr);
std::optional<ZmMatrix> decode_matrix(std::span<const uint8_t> bytes, const Modulus& mod,
                                      std::string* err = nullptr);

}  // namespace leezk
