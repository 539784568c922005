#include "leezk/reductions.hpp"

#include <numeric>
#include <stdexcept>

namespace leezk {

int64_t mod_inverse(int64_t a, int64_t m) {
    a %= m;
    if (a < 0) a += m;
    int64_t r0 = m, r1 = a, t0 = 0, t1 = 1;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        int64_t r2 = r0 - q * r1;
        int64_t t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) throw std::invalid_argument("not invertible: gcd != 1");
    t0 %= m;
    if (t0 < 0) t0 += m;
    return t0;
}

BalancedReduction to_balanced(const SdInstance& general, std::optional<int32_t> c_opt) {
    if (general.variant != Variant::General) {
        throw std::invalid_argument("to_balanced expects a General instance");
    }
    const Modulus& mod = general.modulus;
    int32_t c;
    if (c_opt) {
        c = *c_opt;
    } else if (mod.odd()) {
        c = 2;
    } else {
        throw std::invalid_argument("even modulus requires an explicit multiplier c");
    }
    if (std::gcd(int64_t(mod.m), int64_t(c)) != 1) {
        throw std::invalid_argument("gcd(m, c) must be 1");
    }

    const size_t n = general.n;
    const size_t k = general.k;
    const size_t ell = size_t(mod.ell);
    const size_t pad = (n + (ell - 1) - 1) / (ell - 1);  // ceil(n/(ell-1))
    const size_t nbar = n + pad;
    const int64_t w_eff = std::min<int64_t>(general.w, int64_t(n) * mod.ell);

    // Hbar = [ H 0 ; 0 I_pad ], (nbar) x (nbar - k)
    ZmMatrix Hbar = ZmMatrix::zeros(mod, nbar, nbar - k);
    {
        std::vector<int16_t> entries(nbar * (nbar - k), 0);
        const size_t cols = nbar - k;
        for (size_t i = 0; i < n; ++i) {
            auto r = general.H.row(i);
            for (size_t j = 0; j < r.size(); ++j) entries[i * cols + j] = r[j];
        }
        for (size_t i = 0; i < pad; ++i) entries[(n + i) * cols + (n - k) + i] = 1;
        Hbar = ZmMatrix::from_canonical(mod, nbar, nbar - k, std::move(entries));
    }
    ZmVector sbar = concat(general.s, ZmVector::zeros(mod, pad));

    ZmMatrix Hpm = ZmMatrix::stack(Hbar, Hbar.scaled(-(int64_t(c) - 1)));
    ZmVector target_s = sbar.scaled(c);

    SdInstance target = SdInstance::make(Variant::Balanced, mod, std::move(Hpm),
                                         std::move(target_s), 2 * w_eff, 2 * nbar, nbar + k);

    BalancedReduction red;
    red.source = general;
    red.target = std::move(target);
    red.c = c;
    red.pad = pad;
    red.nbar = nbar;
    return red;
}

ZmVector lift_witness(const BalancedReduction& red, const ZmVector& e) {
    if (!check_witness(red.source, e)) {
        throw std::invalid_argument("e is not a witness of the source instance");
    }
    ZmVector ebar = concat(e, ZmVector::zeros(red.source.modulus, red.pad));
    return concat(ebar, ebar.negated());
}

ExtractedWitness extract_witness(const BalancedReduction& red, const ZmVector& g) {
    const Modulus& mod = red.source.modulus;
    if (g.modulus() != mod) throw std::invalid_argument("modulus mismatch");
    if (g.size() != 2 * red.nbar) throw std::invalid_argument("g has wrong length");
    if (syndrome(g, red.target.H) != red.target.s) {
        throw std::domain_error("g does not satisfy the target syndrome condition");
    }
    ZmVector left = g.slice(0, red.nbar);
    ZmVector right = g.slice(red.nbar, red.nbar);
    int64_t inv_c = mod_inverse(red.c, mod.m);
    ZmVector u = (left - right.scaled(int64_t(red.c) - 1)).scaled(inv_c);
    for (size_t i = red.source.n; i < red.nbar; ++i) {
        if (u[i] != 0) throw std::domain_error("forced-zero tail is nonzero; malformed g");
    }
    ZmVector e = u.slice(0, red.source.n);
    return {e, lee_weight(e)};
}

ZmMatrix expand_matrix(const ZmMatrix& H, int32_t ell) {
    if (ell < 1) throw std::invalid_argument("ell must be positive");
    std::vector<int16_t> entries;
    entries.reserve(H.rows() * size_t(ell) * H.cols());
    for (size_t i = 0; i < H.rows(); ++i) {
        auto r = H.row(i);
        for (int32_t rep = 0; rep < ell; ++rep) entries.insert(entries.end(), r.begin(), r.end());
    }
    return ZmMatrix::from_canonical(H.modulus(), H.rows() * size_t(ell), H.cols(),
                                    std::move(entries));
}

TernaryVector expand_witness(const ZmVector& e) {
    if (!is_balanced(e)) throw std::invalid_argument("expand_witness requires a balanced vector");
    const size_t ell = size_t(e.modulus().ell);
    std::vector<int8_t> out;
    out.reserve(e.size() * ell);
    for (size_t i = 0; i < e.size(); ++i) {
        int32_t v = e[i];
        int8_t sign = v > 0 ? int8_t(1) : (v < 0 ? int8_t(-1) : int8_t(0));
        size_t abs = size_t(v < 0 ? -v : v);
        for (size_t j = 0; j < ell; ++j) out.push_back(j < abs ? sign : int8_t(0));
    }
    return TernaryVector(std::move(out));
}

TernaryVector pad_to_weight(TernaryVector ep, int64_t w, int32_t ell) {
    if (ell < 2) throw std::invalid_argument("ell must be at least 2");
    if (ep.size() % size_t(ell) != 0) throw std::invalid_argument("length not divisible by ell");
    if (!ep.balanced()) throw std::invalid_argument("input not balanced");
    const size_t n = ep.size() / size_t(ell);
    if (w % 2 != 0) throw std::invalid_argument("target weight must be even");
    if (w > int64_t(n) * (ell - 1)) throw std::invalid_argument("target weight exceeds n*(ell-1)");
    int64_t weight = ep.weight();
    if (weight > w) throw std::invalid_argument("input weight exceeds target");

    std::vector<int8_t> f = ep.entries();
    while (weight < w) {
        bool placed = false;
        for (size_t b = 0; b < n && !placed; ++b) {
            size_t z1 = ep.size(), z2 = ep.size();
            for (size_t j = b * size_t(ell); j < (b + 1) * size_t(ell); ++j) {
                if (f[j] != 0) continue;
                if (z1 == ep.size()) {
                    z1 = j;
                } else {
                    z2 = j;
                    break;
                }
            }
            if (z2 != ep.size()) {
                f[z1] = 1;
                f[z2] = -1;
                weight += 2;
                placed = true;
            }
        }
        if (!placed) throw std::logic_error("no block with two zeros; preconditions violated");
    }
    return TernaryVector(std::move(f));
}

ZmVector accumulate(const TernaryVector& f, const Modulus& mod) {
    const size_t ell = size_t(mod.ell);
    if (f.size() % ell != 0) throw std::invalid_argument("length not divisible by ell");
    const size_t n = f.size() / ell;
    std::vector<int64_t> sums(n, 0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < ell; ++j) sums[i] += f[i * ell + j];
    }
    return ZmVector(mod, sums);
}

SdInstance to_ternary(const SdInstance& balanced) {
    if (balanced.variant != Variant::Balanced) {
        throw std::invalid_argument("to_ternary expects a Balanced instance");
    }
    return SdInstance::make(Variant::Ternary, balanced.modulus,
                            expand_matrix(balanced.H, balanced.modulus.ell), balanced.s,
                            balanced.w, balanced.n, balanced.k);
}

}  // namespace leezk
