#include "leezk/commit.hpp"

#include <openssl/evp.h>

#include <numeric>
#include <stdexcept>

#include "leezk/bytes.hpp"

namespace leezk {

Permutation::Permutation(std::vector<uint32_t> images) : images_(std::move(images)) {
    if (!is_bijection(images_)) throw std::invalid_argument("not a bijection on {1..N}");
}

Permutation Permutation::identity(size_t n) {
    Permutation p;
    p.images_.resize(n);
    std::iota(p.images_.begin(), p.images_.end(), 1u);
    return p;
}

Permutation Permutation::random(size_t n, Rng& rng) {
    Permutation p = identity(n);
    rng.shuffle(p.images_);
    return p;
}

Permutation Permutation::inverse() const {
    Permutation p;
    p.images_.resize(size());
    for (size_t i = 0; i < size(); ++i) p.images_[images_[i] - 1] = static_cast<uint32_t>(i + 1);
    return p;
}

bool Permutation::is_bijection(std::span<const uint32_t> images) {
    std::vector<bool> seen(images.size(), false);
    for (uint32_t img : images) {
        if (img < 1 || img > images.size() || seen[img - 1]) return false;
        seen[img - 1] = true;
    }
    return true;
}

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) {
    std::array<uint8_t, 32> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    return out;
}

Commitment commit(const Opening& opening) {
    std::vector<uint8_t> preimage;
    preimage.reserve(2 + opening.salt.size() + opening.payload.size());
    put_u8(preimage, kCommitVersion);
    put_u8(preimage, opening.tag);
    put_bytes(preimage, opening.salt);
    put_bytes(preimage, opening.payload);
    return Commitment{sha256(preimage)};
}

bool verify_opening(const Commitment& c, const Opening& opening) {
    return commit(opening).digest == c.digest;
}

Opening make_opening(uint8_t tag, std::vector<uint8_t> payload, Rng& rng) {
    Opening o;
    o.tag = tag;
    o.salt = rng.salt32();
    o.payload = std::move(payload);
    return o;
}

std::vector<uint8_t> encode_permutation(const Permutation& p) {
    std::vector<uint8_t> out;
    out.reserve(4 + 4 * p.size());
    put_u32(out, static_cast<uint32_t>(p.size()));
    for (uint32_t img : p.images()) put_u32(out, img);
    return out;
}

std::vector<uint8_t> encode_ternary(const TernaryVector& f) {
    std::vector<uint8_t> out;
    out.reserve(4 + 2 * f.size());
    put_u32(out, static_cast<uint32_t>(f.size()));
    for (int8_t x : f.entries()) put_i16(out, x);
    return out;
}

std::optional<Permutation> decode_permutation(std::span<const uint8_t> bytes, std::string* err) {
    ByteReader r(bytes);
    auto count = r.u32();
    if (!count || r.remaining() != 4 * size_t(*count)) {
        if (err) *err = "bad permutation length";
        return std::nullopt;
    }
    std::vector<uint32_t> images;
    images.reserve(*count);
    for (uint32_t i = 0; i < *count; ++i) images.push_back(*r.u32());
    if (!Permutation::is_bijection(images)) {
        if (err) *err = "image list is not a bijection";
        return std::nullopt;
    }
    return Permutation(std::move(images));
}

std::optional<TernaryVector> decode_ternary(std::span<const uint8_t> bytes, std::string* err) {
    ByteReader r(bytes);
    auto count = r.u32();
    if (!count || r.remaining() != 2 * size_t(*count)) {
        if (err) *err = "bad ternary vector length";
        return std::nullopt;
    }
    std::vector<int8_t> entries;
    entries.reserve(*count);
    for (uint32_t i = 0; i < *count; ++i) {
        int16_t x = *r.i16();
        if (x < -1 || x > 1) {
            if (err) *err = "entry outside {-1,0,1}";
            return std::nullopt;
        }
        entries.push_back(static_cast<int8_t>(x));
    }
    return TernaryVector(std::move(entries));
}

std::pair<uint8_t, std::vector<uint8_t>> encode_object(const ZmVector& v) {
    return {obj_tag::kVector, encode_vector(v)};
}

std::pair<uint8_t, std::vector<uint8_t>> encode_object(const ZmMatrix& m) {
    return {obj_tag::kMatrix, encode_matrix(m)};
}

std::pair<uint8_t, std::vector<uint8_t>> encode_object(const Permutation& p) {
    return {obj_tag::kPermutation, encode_permutation(p)};
}

std::pair<uint8_t, std::vector<uint8_t>> encode_object(const TernaryVector& f) {
    return {obj_tag::kTernary, encode_ternary(f)};
}

}  // namespace leezk
