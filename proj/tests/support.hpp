#pragma once

// Shared helpers for the protocol test suites: honest-round builders and the
// single-check tamper matrix. Test-only code; not part of the library.

#include <functional>
#include <string>
#include <vector>

#include "leezk/analysis.hpp"
#include "leezk/problems.hpp"
#include "leezk/protocol.hpp"
#include "leezk/reductions.hpp"

namespace leezk::testsupport {

// Replaces one slot's opening (fresh salt) and its digest, so a mutated
// object is properly committed and only the semantic check can fire.
inline void reseat_slot(ProverRoundState& st, CommitMessage& cm, Slot slot,
                        std::vector<uint8_t> payload, Rng& rng) {
    size_t i = slot_index(slot);
    st.openings[i] = make_opening(static_cast<uint8_t>(slot), std::move(payload), rng);
    cm.digests[i] = commit(st.openings[i]);
}

struct TamperResult {
    std::string name;
    Check expected;
    Verdict verdict;
    bool caught_as_expected() const { return !verdict.accept && verdict.failed == expected; }
};

// Runs every named single-check tamper against fresh honest rounds.
// Requires an instance with w >= 2 and at least two zero positions in the
// ternary form (n*ell - w >= 2).
inline std::vector<TamperResult> run_tamper_matrix(const SdInstance& inst,
                                                   const ZmVector& witness, Rng& rng) {
    std::vector<TamperResult> results;
    const Modulus& mod = inst.modulus;

    auto fresh = [&]() { return prover_commit(inst, witness, rng); };
    auto record = [&](const char* name, Check expected, ChallengeTag ch,
                      const ProverRoundState& st, const CommitMessage& cm) {
        Response resp = prover_respond_rewind(st, ch);
        results.push_back({name, expected, verifier_check(inst, cm, ch, resp)});
    };

    auto bump_matrix_entry = [&](const ZmMatrix& m, size_t r, size_t c) {
        std::vector<int16_t> entries = m.entries();
        entries[r * m.cols() + c] = center_mod(int64_t(entries[r * m.cols() + c]) + 1, mod);
        return ZmMatrix::from_canonical(mod, m.rows(), m.cols(), std::move(entries));
    };
    auto bump_vector_entry = [&](const ZmVector& v, size_t i) {
        std::vector<int16_t> entries = v.entries();
        entries[i] = center_mod(int64_t(entries[i]) + 1, mod);
        return ZmVector::from_canonical(mod, std::move(entries));
    };
    auto first_nonzero = [](const TernaryVector& f) {
        size_t j = 0;
        while (f[j] == 0) ++j;
        return j;
    };

    {  // a1: the opened pair no longer sums to H
        auto [st, cm] = fresh();
        reseat_slot(st, cm, Slot::Complement, encode_matrix(bump_matrix_entry(st.complement, 0, 0)),
                    rng);
        record("a1 mask sum", Check::A1, ChallengeTag::A, st, cm);
    }
    {  // a2: expanded mask tampered
        auto [st, cm] = fresh();
        reseat_slot(st, cm, Slot::MaskExpPerm,
                    encode_matrix(bump_matrix_entry(st.mask_exp_perm, 0, 0)), rng);
        record("a2 expanded mask", Check::A2, ChallengeTag::A, st, cm);
    }
    {  // a2: expanded complement tampered
        auto [st, cm] = fresh();
        reseat_slot(st, cm, Slot::CompExpPerm,
                    encode_matrix(bump_matrix_entry(st.comp_exp_perm, 0, 0)), rng);
        record("a2 expanded complement", Check::A2, ChallengeTag::A, st, cm);
    }
    {  // b1: share_b shifted by one
        auto [st, cm] = fresh();
        reseat_slot(st, cm, Slot::ShareB, encode_vector(bump_vector_entry(st.share_b, 0)), rng);
        record("b1 share sum", Check::B1, ChallengeTag::B, st, cm);
    }
    {  // b2: expanded mask row touched where the ternary vector is nonzero
        auto [st, cm] = fresh();
        size_t j = first_nonzero(st.ternary_perm);
        reseat_slot(st, cm, Slot::MaskExpPerm,
                    encode_matrix(bump_matrix_entry(st.mask_exp_perm, j, 0)), rng);
        record("b2 mask product", Check::B2, ChallengeTag::B, st, cm);
    }
    {  // b3: weight raised with shares fixed up so earlier checks pass
        auto [st, cm] = fresh();
        std::vector<int8_t> f = st.ternary_perm.entries();
        size_t placed = 0;
        for (size_t i = 0; i < f.size() && placed < 2; ++i) {
            if (f[i] == 0) f[i] = placed++ == 0 ? 1 : -1;
        }
        TernaryVector heavy(std::move(f));
        ZmVector a = syndrome(heavy.to_zm(mod), st.mask_exp_perm);
        reseat_slot(st, cm, Slot::TernaryPerm, encode_ternary(heavy), rng);
        reseat_slot(st, cm, Slot::ShareA, encode_vector(a), rng);
        reseat_slot(st, cm, Slot::ShareB, encode_vector(inst.s - a), rng);
        record("b3 weight", Check::B3, ChallengeTag::B, st, cm);
    }
    {  // b4: one +1 flipped to -1 (weight intact, balance broken), shares fixed
        auto [st, cm] = fresh();
        std::vector<int8_t> f = st.ternary_perm.entries();
        for (size_t i = 0; i < f.size(); ++i) {
            if (f[i] == 1) {
                f[i] = -1;
                break;
            }
        }
        TernaryVector skewed(std::move(f));
        ZmVector a = syndrome(skewed.to_zm(mod), st.mask_exp_perm);
        reseat_slot(st, cm, Slot::TernaryPerm, encode_ternary(skewed), rng);
        reseat_slot(st, cm, Slot::ShareA, encode_vector(a), rng);
        reseat_slot(st, cm, Slot::ShareB, encode_vector(inst.s - a), rng);
        record("b4 balance", Check::B4, ChallengeTag::B, st, cm);
    }
    {  // c1
        auto [st, cm] = fresh();
        reseat_slot(st, cm, Slot::ShareA, encode_vector(bump_vector_entry(st.share_a, 0)), rng);
        record("c1 share sum", Check::C1, ChallengeTag::C, st, cm);
    }
    {  // c2
        auto [st, cm] = fresh();
        size_t j = first_nonzero(st.ternary_perm);
        reseat_slot(st, cm, Slot::CompExpPerm,
                    encode_matrix(bump_matrix_entry(st.comp_exp_perm, j, 0)), rng);
        record("c2 complement product", Check::C2, ChallengeTag::C, st, cm);
    }
    {  // c3
        auto [st, cm] = fresh();
        std::vector<int8_t> f = st.ternary_perm.entries();
        size_t placed = 0;
        for (size_t i = 0; i < f.size() && placed < 2; ++i) {
            if (f[i] == 0) f[i] = placed++ == 0 ? 1 : -1;
        }
        TernaryVector heavy(std::move(f));
        ZmVector b = syndrome(heavy.to_zm(mod), st.comp_exp_perm);
        reseat_slot(st, cm, Slot::TernaryPerm, encode_ternary(heavy), rng);
        reseat_slot(st, cm, Slot::ShareB, encode_vector(b), rng);
        reseat_slot(st, cm, Slot::ShareA, encode_vector(inst.s - b), rng);
        record("c3 weight", Check::C3, ChallengeTag::C, st, cm);
    }
    {  // c4
        auto [st, cm] = fresh();
        std::vector<int8_t> f = st.ternary_perm.entries();
        for (size_t i = 0; i < f.size(); ++i) {
            if (f[i] == 1) {
                f[i] = -1;
                break;
            }
        }
        TernaryVector skewed(std::move(f));
        ZmVector b = syndrome(skewed.to_zm(mod), st.comp_exp_perm);
        reseat_slot(st, cm, Slot::TernaryPerm, encode_ternary(skewed), rng);
        reseat_slot(st, cm, Slot::ShareB, encode_vector(b), rng);
        reseat_slot(st, cm, Slot::ShareA, encode_vector(inst.s - b), rng);
        record("c4 balance", Check::C4, ChallengeTag::C, st, cm);
    }
    {  // range: ternary entry outside {-1,0,1}
        auto [st, cm] = fresh();
        std::vector<uint8_t> payload = encode_ternary(st.ternary_perm);
        payload[4] = 2;
        payload[5] = 0;
        reseat_slot(st, cm, Slot::TernaryPerm, std::move(payload), rng);
        record("range ternary entry", Check::Range, ChallengeTag::B, st, cm);
    }
    {  // range: image list is not a bijection
        auto [st, cm] = fresh();
        std::vector<uint8_t> payload = encode_permutation(st.perm);
        for (int b = 0; b < 4; ++b) payload[4 + b] = payload[8 + b];
        reseat_slot(st, cm, Slot::Perm, std::move(payload), rng);
        record("range permutation", Check::Range, ChallengeTag::A, st, cm);
    }
    {  // range: matrix entry outside the canonical range
        auto [st, cm] = fresh();
        std::vector<uint8_t> payload = encode_matrix(st.mask);
        uint16_t big = static_cast<uint16_t>(mod.ell + 1);
        payload[8] = static_cast<uint8_t>(big & 0xff);
        payload[9] = static_cast<uint8_t>(big >> 8);
        reseat_slot(st, cm, Slot::Mask, std::move(payload), rng);
        record("range matrix entry", Check::Range, ChallengeTag::A, st, cm);
    }
    {  // range: share vector of the wrong length
        auto [st, cm] = fresh();
        ZmVector short_share = st.share_a.slice(0, st.share_a.size() - 1);
        reseat_slot(st, cm, Slot::ShareA, encode_vector(short_share), rng);
        record("range share length", Check::Range, ChallengeTag::B, st, cm);
    }
    {  // opening: payload flipped after committing
        auto [st, cm] = fresh();
        Response resp = prover_respond_rewind(st, ChallengeTag::B);
        resp.openings[0].second.payload[5] ^= 0x01;
        results.push_back({"opening digest", Check::Opening,
                           verifier_check(inst, cm, ChallengeTag::B, resp)});
    }
    {  // opening: right payload under the wrong domain tag
        auto [st, cm] = fresh();
        Response resp = prover_respond_rewind(st, ChallengeTag::B);
        resp.openings[0].second.tag = static_cast<uint8_t>(Slot::ShareB);
        results.push_back({"opening domain tag", Check::Opening,
                           verifier_check(inst, cm, ChallengeTag::B, resp)});
    }
    {  // slot set: opening missing
        auto [st, cm] = fresh();
        Response resp = prover_respond_rewind(st, ChallengeTag::A);
        resp.openings.pop_back();
        results.push_back({"slotset missing", Check::SlotSet,
                           verifier_check(inst, cm, ChallengeTag::A, resp)});
    }
    {  // slot set: openings reordered
        auto [st, cm] = fresh();
        Response resp = prover_respond_rewind(st, ChallengeTag::B);
        std::swap(resp.openings[0], resp.openings[1]);
        results.push_back({"slotset order", Check::SlotSet,
                           verifier_check(inst, cm, ChallengeTag::B, resp)});
    }
    return results;
}

// Views produced by a broken prover that skips the shuffle (identity
// permutation); negative control for the transcript distribution test.
inline Response identity_perm_view(const SdInstance& inst, const ZmVector& witness,
                                   ChallengeTag ch, Rng& rng) {
    const Modulus& mod = inst.modulus;
    const size_t nl = inst.n * size_t(mod.ell);
    TernaryVector f = pad_to_weight(expand_witness(witness), inst.w, mod.ell);
    ZmMatrix mask = ZmMatrix::random(mod, inst.n, inst.redundancy(), rng);
    ZmMatrix complement = inst.H - mask;
    Permutation perm = Permutation::identity(nl);
    ZmMatrix mask_exp = expand_matrix(mask, mod.ell);
    ZmMatrix comp_exp = expand_matrix(complement, mod.ell);
    ZmVector share_a = syndrome(witness, mask);
    ZmVector share_b = syndrome(witness, complement);

    Response r;
    auto open = [&](Slot slot, std::vector<uint8_t> payload) {
        r.openings.emplace_back(slot,
                                make_opening(static_cast<uint8_t>(slot), std::move(payload), rng));
    };
    for (Slot slot : slots_for(ch)) {
        switch (slot) {
            case Slot::Mask: open(slot, encode_matrix(mask)); break;
            case Slot::Complement: open(slot, encode_matrix(complement)); break;
            case Slot::ShareA: open(slot, encode_vector(share_a)); break;
            case Slot::ShareB: open(slot, encode_vector(share_b)); break;
            case Slot::Perm: open(slot, encode_permutation(perm)); break;
            case Slot::MaskExpPerm: open(slot, encode_matrix(mask_exp)); break;
            case Slot::CompExpPerm: open(slot, encode_matrix(comp_exp)); break;
            case Slot::TernaryPerm: open(slot, encode_ternary(f)); break;
        }
    }
    return r;
}

}  // namespace leezk::testsupport
