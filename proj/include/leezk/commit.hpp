#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "leezk/problems.hpp"
#include "leezk/ring.hpp"
#include "leezk/rng.hpp"

namespace leezk {

// Salted hash commitments: digest = SHA-256(version || tag || salt || payload).
// The version byte keeps transcripts forward-compatible; the one-byte tag
// domain-separates object kinds and protocol slots so an opening cannot be
// replayed in another slot. Computationally binding and hiding under
// standard assumptions on SHA-256; no stronger claim is made.

constexpr uint8_t kCommitVersion = 0x01;

// Generic object-kind tags used by encode_object. Protocol slot tags live in
// protocol.hpp and occupy a disjoint byte range.
namespace obj_tag {
constexpr uint8_t kVector = 0x01;
constexpr uint8_t kMatrix = 0x02;
constexpr uint8_t kPermutation = 0x03;
constexpr uint8_t kTernary = 0x04;
}  // namespace obj_tag

struct Commitment {
    std::array<uint8_t, 32> digest{};
    friend bool operator==(const Commitment&, const Commitment&) = default;
};

struct Opening {
    uint8_t tag = 0;
    std::array<uint8_t, 32> salt{};
    std::vector<uint8_t> payload;
    friend bool operator==(const Opening&, const Opening&) = default;
};

// Permutation on {1,...,N} stored as the image list (pi(1), ..., pi(N)).
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<uint32_t> images);  // validates bijection

    static Permutation identity(size_t n);
    static Permutation random(size_t n, Rng& rng);

    size_t size() const { return images_.size(); }
    const std::vector<uint32_t>& images() const { return images_; }
    Permutation inverse() const;

    static bool is_bijection(std::span<const uint32_t> images);

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<uint32_t> images_;
};

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data);

Commitment commit(const Opening& opening);
bool verify_opening(const Commitment& c, const Opening& opening);
Opening make_opening(uint8_t tag, std::vector<uint8_t> payload, Rng& rng);

// Canonical payload encodings. Ternary vectors share the vector element
// layout; permutations are a 4-byte LE count followed by 4-byte LE images.
std::vector<uint8_t> encode_permutation(const Permutation& p);
std::vector<uint8_t> encode_ternary(const TernaryVector& f);
std::optional<Permutation> decode_permutation(std::span<const uint8_t> bytes,
                                              std::string* err = nullptr);
std::optional<TernaryVector> decode_ternary(std::span<const uint8_t> bytes,
                                            std::string* err = nullptr);

// (kind tag, payload) for each committable object kind.
std::pair<uint8_t, std::vector<uint8_t>> encode_object(const ZmVector& v);
std::pair<uint8_t, std::vector<uint8_t>> encode_object(const ZmMatrix& m);
std::pair<uint8_t, std::vector<uint8_t>> encode_object(const Permutation& p);
std::pair<uint8_t, std::vector<uint8_t>> encode_object(const TernaryVector& f);

}  // namespace leezk
