#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leezk/ring.hpp"
#include "leezk/rng.hpp"

namespace leezk {

// The three syndrome-decoding variants:
//   General:  e*H = s, lee_weight(e) <= w
//   Balanced: additionally vector_sum(e) == 0, with w even, w <= n(l-1)
//   Ternary:  f in {-1,0,1}^(n*l), f*H~ = s, lee_weight(f) == w, sum f == 0
enum class Variant { General, Balanced, Ternary };

const char* variant_name(Variant v);

// Vector over {-1,0,1}. Used as the witness form inside the protocol, where
// it carries exactly w/2 entries +1 and w/2 entries -1.
class TernaryVector {
public:
    TernaryVector() = default;
    explicit TernaryVector(std::vector<int8_t> entries);

    static TernaryVector zeros(size_t n);
    // Uniform over vectors with exactly weight/2 ones and weight/2 minus
    // ones among len positions.
    static TernaryVector random_balanced(size_t len, int64_t weight, Rng& rng);

    size_t size() const { return entries_.size(); }
    int8_t operator[](size_t i) const { return entries_[i]; }
    const std::vector<int8_t>& entries() const { return entries_; }

    int64_t weight() const;  // count of nonzero entries
    int64_t sum() const;
    bool balanced() const { return sum() == 0; }

    ZmVector to_zm(const Modulus& mod) const;

    friend bool operator==(const TernaryVector&, const TernaryVector&) = default;

private:
    std::vector<int8_t> entries_;
};

// g[i] = f[images[i]-1], the same row-permutation convention as ZmMatrix.
TernaryVector permuted(const TernaryVector& f, const std::vector<uint32_t>& images);

// A syndrome-decoding instance. H has n rows for General/Balanced and n*l
// rows for Ternary (the expanded matrix); in all cases H has n-k columns.
struct SdInstance {
    Variant variant = Variant::General;
    Modulus modulus;
    ZmMatrix H;
    ZmVector s;
    int64_t w = 0;
    size_t n = 0;
    size_t k = 0;

    static SdInstance make(Variant variant, const Modulus& mod, ZmMatrix H, ZmVector s,
                           int64_t w, size_t n, size_t k);

    size_t witness_length() const;
    size_t redundancy() const { return H.cols(); }

    friend bool operator==(const SdInstance&, const SdInstance&) = default;
};

// True iff e satisfies every condition of the instance's variant. Throws on
// dimension or modulus mismatch.
bool check_witness(const SdInstance& inst, const ZmVector& e);
bool check_witness(const SdInstance& inst, const TernaryVector& f);

enum class Decision { Yes, No, BudgetExceeded };

struct BruteForceResult {
    Decision decision = Decision::No;
    std::optional<ZmVector> witness;  // first witness in enumeration order
};

// Exhaustive decision oracle. Candidates are enumerated in lexicographic
// order, leftmost coordinate most significant, digits ascending over the
// canonical range (over {-1,0,1} for Ternary instances). Refuses with
// BudgetExceeded when the search space exceeds `budget`; never samples.
BruteForceResult decide_bruteforce(const SdInstance& inst, uint64_t budget);

struct PlantedInstance {
    SdInstance instance;
    ZmVector witness;
};

// Planted Balanced instance: H uniform, witness drawn as a uniform ternary
// vector with w/2 ones and w/2 minus-ones over n*l positions and then
// block-accumulated, s = e*H. check_witness always holds on the output.
PlantedInstance sample_instance(size_t n, size_t k, int64_t w, const Modulus& mod, Rng& rng);

// Instance JSON: fields variant, m, n, k, w, H (row-major array of centered
// integers), s, optional e. Field names are part of the file contract.
std::string instance_to_json(const SdInstance& inst, const ZmVector* witness = nullptr);
SdInstance instance_from_json(const std::string& text);
// Reads the "e" field and validates it against the instance's shape.
ZmVector witness_from_json(const std::string& text, const SdInstance& inst);

}  // namespace leezk
