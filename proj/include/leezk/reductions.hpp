#pragma once

#include <cstdint>
#include <optional>

#include "leezk/problems.hpp"
#include "leezk/ring.hpp"

namespace leezk {

// Reduction of a General instance (H, s, w) to a Balanced one over length
// 2*nbar, nbar = n + ceil(n/(ell-1)):
//   Hbar = [ H  0 ; 0  I_pad ],   sbar = (s | 0)
//   Hpm  = [ Hbar ; -(c-1)*Hbar ]
//   target = (Hpm, c*sbar, 2*w_eff) with gcd(m, c) = 1 (c = 2 for odd m).
// w_eff = min(w, n*ell): weights above n*ell constrain nothing, and the cap
// keeps the target within the balanced problem's w <= n'(ell-1) bound.
struct BalancedReduction {
    SdInstance source;  // General
    SdInstance target;  // Balanced
    int32_t c = 2;
    size_t pad = 0;   // ceil(n/(ell-1))
    size_t nbar = 0;  // n + pad
};

// c defaults to 2 for odd m; even m requires an explicit c with gcd(m,c)=1.
BalancedReduction to_balanced(const SdInstance& general,
                              std::optional<int32_t> c = std::nullopt);

// (ebar | -ebar) with ebar = (e | 0_pad). Requires check_witness(source, e);
// the result is balanced, has weight 2*lee_weight(e), and satisfies
// check_witness(target, .).
ZmVector lift_witness(const BalancedReduction& red, const ZmVector& e);

struct ExtractedWitness {
    ZmVector e;
    int64_t weight = 0;  // measured, NOT checked against source.w
};

// Inverse direction: from any g with g*Hpm = c*sbar recovers e with
// e*H = s by forming c^-1 * (g_left - (c-1)*g_right) and stripping the
// forced-zero tail. The syndrome condition on e is guaranteed; the weight
// bound is only measured and reported.
ExtractedWitness extract_witness(const BalancedReduction& red, const ZmVector& g);

// Each row of H repeated ell times.
ZmMatrix expand_matrix(const ZmMatrix& H, int32_t ell);
inline ZmMatrix expand_matrix(const ZmMatrix& H) { return expand_matrix(H, H.modulus().ell); }

// Block expansion of a balanced vector: block i holds |e_i| copies of
// sign(e_i) followed by ell - |e_i| zeros. Preserves Lee weight, balance,
// and the syndrome under the expanded matrix.
TernaryVector expand_witness(const ZmVector& e);

// Raises the weight of a balanced ternary vector to exactly w: scans blocks
// left to right and replaces the leftmost two zeros of the first block
// holding at least two zeros with (+1, -1), repeating until the weight is w.
// The syndrome under any expanded matrix is unchanged.
TernaryVector pad_to_weight(TernaryVector ep, int64_t w, int32_t ell);

// Block-wise accumulation: e_i = sum of block i of f. Block sums lie in
// [-ell, ell]; for even m a sum of exactly -ell is written +ell (same class,
// same Lee weight; the integer sum then moves by m).
ZmVector accumulate(const TernaryVector& f, const Modulus& mod);

// The Ternary reformulation of a Balanced instance: same (s, w, n, k) with
// the row-expanded matrix.
SdInstance to_ternary(const SdInstance& balanced);

// Modular inverse of a mod m; throws if gcd(a, m) != 1.
int64_t mod_inverse(int64_t a, int64_t m);

}  // namespace leezk
