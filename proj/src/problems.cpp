#include "leezk/problems.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace leezk {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::General: return "general";
        case Variant::Balanced: return "balanced";
        case Variant::Ternary: return "ternary";
    }
    return "?";
}

TernaryVector::TernaryVector(std::vector<int8_t> entries) : entries_(std::move(entries)) {
    for (int8_t x : entries_) {
        if (x < -1 || x > 1) throw std::invalid_argument("ternary entry outside {-1,0,1}");
    }
}

TernaryVector TernaryVector::zeros(size_t n) {
    TernaryVector f;
    f.entries_.assign(n, 0);
    return f;
}

TernaryVector TernaryVector::random_balanced(size_t len, int64_t weight, Rng& rng) {
    if (weight < 0 || weight % 2 != 0) throw std::invalid_argument("weight must be even");
    if (static_cast<uint64_t>(weight) > len) throw std::invalid_argument("weight exceeds length");
    std::vector<int8_t> entries(len, 0);
    for (int64_t i = 0; i < weight / 2; ++i) entries[i] = 1;
    for (int64_t i = weight / 2; i < weight; ++i) entries[i] = -1;
    rng.shuffle(entries);
    TernaryVector f;
    f.entries_ = std::move(entries);
    return f;
}

int64_t TernaryVector::weight() const {
    int64_t w = 0;
    for (int8_t x : entries_) w += x != 0;
    return w;
}

int64_t TernaryVector::sum() const {
    int64_t s = 0;
    for (int8_t x : entries_) s += x;
    return s;
}

ZmVector TernaryVector::to_zm(const Modulus& mod) const {
    std::vector<int16_t> out(entries_.begin(), entries_.end());
    return ZmVector::from_canonical(mod, std::move(out));
}

TernaryVector permuted(const TernaryVector& f, const std::vector<uint32_t>& images) {
    if (images.size() != f.size()) throw std::invalid_argument("permutation size mismatch");
    std::vector<int8_t> out(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        if (images[i] < 1 || images[i] > f.size()) throw std::out_of_range("permutation image");
        out[i] = f[images[i] - 1];
    }
    return TernaryVector(std::move(out));
}

SdInstance SdInstance::make(Variant variant, const Modulus& mod, ZmMatrix H, ZmVector s,
                            int64_t w, size_t n, size_t k) {
    if (H.modulus() != mod || s.modulus() != mod) throw std::invalid_argument("modulus mismatch");
    if (n == 0 || k > n) throw std::invalid_argument("invalid code parameters");
    size_t expected_rows = variant == Variant::Ternary ? n * size_t(mod.ell) : n;
    if (H.rows() != expected_rows) throw std::invalid_argument("matrix row count mismatch");
    if (H.cols() != n - k) throw std::invalid_argument("matrix column count mismatch");
    if (s.size() != n - k) throw std::invalid_argument("syndrome length mismatch");
    if (w < 0) throw std::invalid_argument("negative weight bound");
    if (variant != Variant::General) {
        if (w % 2 != 0) throw std::invalid_argument("weight bound must be even");
        if (w > int64_t(n) * (mod.ell - 1)) {
            throw std::invalid_argument("weight bound exceeds n*(ell-1)");
        }
    }
    SdInstance inst;
    inst.variant = variant;
    inst.modulus = mod;
    inst.H = std::move(H);
    inst.s = std::move(s);
    inst.w = w;
    inst.n = n;
    inst.k = k;
    return inst;
}

size_t SdInstance::witness_length() const { return H.rows(); }

bool check_witness(const SdInstance& inst, const ZmVector& e) {
    if (e.modulus() != inst.modulus) throw std::invalid_argument("modulus mismatch");
    if (e.size() != inst.witness_length()) throw std::invalid_argument("witness length mismatch");
    if (syndrome(e, inst.H) != inst.s) return false;
    switch (inst.variant) {
        case Variant::General:
            return lee_weight(e) <= inst.w;
        case Variant::Balanced:
            return lee_weight(e) <= inst.w && is_balanced(e);
        case Variant::Ternary:
            for (int16_t x : e.entries()) {
                if (x < -1 || x > 1) return false;
            }
            return lee_weight(e) == inst.w && is_balanced(e);
    }
    return false;
}

bool check_witness(const SdInstance& inst, const TernaryVector& f) {
    return check_witness(inst, f.to_zm(inst.modulus));
}

namespace {

std::optional<uint64_t> checked_pow(uint64_t base, uint64_t exp, uint64_t cap) {
    uint64_t r = 1;
    for (uint64_t i = 0; i < exp; ++i) {
        if (r > cap / base) return std::nullopt;
        r *= base;
    }
    return r;
}

}  // namespace

BruteForceResult decide_bruteforce(const SdInstance& inst, uint64_t budget) {
    const size_t len = inst.witness_length();
    int32_t lo, hi;
    if (inst.variant == Variant::Ternary) {
        lo = -1;
        hi = 1;
    } else {
        lo = inst.modulus.min_rep();
        hi = inst.modulus.max_rep();
    }
    const uint64_t base = uint64_t(hi - lo + 1);
    auto space = checked_pow(base, len, budget);
    if (!space) return {Decision::BudgetExceeded, std::nullopt};

    std::vector<int16_t> digits(len, static_cast<int16_t>(lo));
    for (uint64_t count = 0; count < *space; ++count) {
        ZmVector cand = ZmVector::from_canonical(inst.modulus,
                                                 std::vector<int16_t>(digits.begin(), digits.end()));
        if (check_witness(inst, cand)) return {Decision::Yes, cand};
        // odometer: last coordinate fastest = lexicographic ascending
        for (size_t i = len; i-- > 0;) {
            if (digits[i] < hi) {
                ++digits[i];
                break;
            }
            digits[i] = static_cast<int16_t>(lo);
        }
    }
    return {Decision::No, std::nullopt};
}

PlantedInstance sample_instance(size_t n, size_t k, int64_t w, const Modulus& mod, Rng& rng) {
    if (k < 1 || k >= n) throw std::invalid_argument("require 1 <= k < n");
    if (w < 0 || w % 2 != 0) throw std::invalid_argument("weight must be even");
    if (w > int64_t(n) * (mod.ell - 1)) throw std::invalid_argument("weight exceeds n*(ell-1)");

    ZmMatrix H = ZmMatrix::random(mod, n, n - k, rng);
    const size_t ell = size_t(mod.ell);
    std::vector<int8_t> f(n * ell, 0);
    for (int64_t i = 0; i < w / 2; ++i) f[size_t(i)] = 1;
    for (int64_t i = w / 2; i < w; ++i) f[size_t(i)] = -1;
    rng.shuffle(f);

    std::vector<int64_t> sums(n, 0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < ell; ++j) sums[i] += f[i * ell + j];
    }
    if (!mod.odd()) {
        // For even m an all-minus-one block sums to exactly -ell, whose
        // canonical form +ell would unbalance the accumulated witness. Swap
        // one of its -1 entries with a +1 from a positive-sum block; such a
        // donor always exists while any block is negative.
        for (size_t i = 0; i < n; ++i) {
            if (sums[i] != -mod.ell) continue;
            size_t donor = n;
            for (size_t d = 0; d < n && donor == n; ++d) {
                if (sums[d] >= 1) donor = d;
            }
            // total sum is 0, so a positive block exists while any is negative
            if (donor == n) throw std::logic_error("no donor block for witness repair");
            size_t take = i * ell;  // every entry of the bad block is -1
            size_t give = donor * ell;
            while (f[give] != 1) ++give;
            std::swap(f[take], f[give]);
            sums[i] += 2;
            sums[donor] -= 2;
        }
    }
    ZmVector e(mod, sums);
    ZmVector s = syndrome(e, H);
    SdInstance inst = SdInstance::make(Variant::Balanced, mod, std::move(H), std::move(s), w, n, k);
    return {std::move(inst), std::move(e)};
}

namespace {

using nlohmann::json;

json vector_to_json(const ZmVector& v) {
    json arr = json::array();
    for (int16_t x : v.entries()) arr.push_back(x);
    return arr;
}

ZmVector vector_from_json(const json& arr, const Modulus& mod) {
    if (!arr.is_array()) throw std::runtime_error("expected array of integers");
    std::vector<int16_t> entries;
    entries.reserve(arr.size());
    for (const auto& x : arr) {
        if (!x.is_number_integer()) throw std::runtime_error("expected integer entry");
        int64_t v = x.get<int64_t>();
        if (!mod.canonical(v)) throw std::runtime_error("entry outside canonical range");
        entries.push_back(static_cast<int16_t>(v));
    }
    return ZmVector::from_canonical(mod, std::move(entries));
}

Variant variant_from_string(const std::string& s) {
    if (s == "general") return Variant::General;
    if (s == "balanced") return Variant::Balanced;
    if (s == "ternary") return Variant::Ternary;
    throw std::runtime_error("unknown variant: " + s);
}

}  // namespace

std::string instance_to_json(const SdInstance& inst, const ZmVector* witness) {
    json j;
    j["variant"] = variant_name(inst.variant);
    j["m"] = inst.modulus.m;
    j["n"] = inst.n;
    j["k"] = inst.k;
    j["w"] = inst.w;
    json H = json::array();
    for (int16_t x : inst.H.entries()) H.push_back(x);
    j["H"] = H;
    j["s"] = vector_to_json(inst.s);
    if (witness != nullptr) j["e"] = vector_to_json(*witness);
    return j.dump(2) + "\n";
}

SdInstance instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("invalid JSON: ") + e.what());
    }
    try {
        Variant variant = variant_from_string(j.at("variant").get<std::string>());
        Modulus mod(j.at("m").get<int32_t>());
        size_t n = j.at("n").get<size_t>();
        size_t k = j.at("k").get<size_t>();
        int64_t w = j.at("w").get<int64_t>();
        if (k > n) throw std::runtime_error("k exceeds n");
        size_t rows = variant == Variant::Ternary ? n * size_t(mod.ell) : n;
        size_t cols = n - k;
        const json& Hj = j.at("H");
        if (!Hj.is_array() || Hj.size() != rows * cols) {
            throw std::runtime_error("H has wrong entry count");
        }
        std::vector<int16_t> entries;
        entries.reserve(Hj.size());
        for (const auto& x : Hj) {
            int64_t v = x.get<int64_t>();
            if (!mod.canonical(v)) throw std::runtime_error("H entry outside canonical range");
            entries.push_back(static_cast<int16_t>(v));
        }
        ZmMatrix H = ZmMatrix::from_canonical(mod, rows, cols, std::move(entries));
        ZmVector s = vector_from_json(j.at("s"), mod);
        return SdInstance::make(variant, mod, std::move(H), std::move(s), w, n, k);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("instance JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("instance JSON: ") + e.what());
    }
}

ZmVector witness_from_json(const std::string& text, const SdInstance& inst) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("invalid JSON: ") + e.what());
    }
    if (!j.contains("e")) throw std::runtime_error("witness file lacks field \"e\"");
    ZmVector e = vector_from_json(j.at("e"), inst.modulus);
    if (e.size() != inst.witness_length()) throw std::runtime_error("witness length mismatch");
    return e;
}

}  // namespace leezk
