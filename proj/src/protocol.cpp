#include "leezk/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "leezk/bytes.hpp"

namespace leezk {

const char* challenge_name(ChallengeTag t) {
    switch (t) {
        case ChallengeTag::A: return "A";
        case ChallengeTag::B: return "B";
        case ChallengeTag::C: return "C";
    }
    return "?";
}

size_t slot_index(Slot s) {
    for (size_t i = 0; i < kSlotOrder.size(); ++i) {
        if (kSlotOrder[i] == s) return i;
    }
    throw std::invalid_argument("unknown slot");
}

const char* slot_name(Slot s) {
    switch (s) {
        case Slot::Mask: return "mask";
        case Slot::Complement: return "complement";
        case Slot::ShareA: return "share_a";
        case Slot::ShareB: return "share_b";
        case Slot::Perm: return "perm";
        case Slot::MaskExpPerm: return "mask_exp_perm";
        case Slot::CompExpPerm: return "comp_exp_perm";
        case Slot::TernaryPerm: return "ternary_perm";
    }
    return "?";
}

const std::vector<Slot>& slots_for(ChallengeTag t) {
    static const std::vector<Slot> a = {Slot::Mask, Slot::Complement, Slot::Perm,
                                        Slot::MaskExpPerm, Slot::CompExpPerm};
    static const std::vector<Slot> b = {Slot::ShareA, Slot::ShareB, Slot::MaskExpPerm,
                                        Slot::TernaryPerm};
    static const std::vector<Slot> c = {Slot::ShareA, Slot::ShareB, Slot::CompExpPerm,
                                        Slot::TernaryPerm};
    switch (t) {
        case ChallengeTag::A: return a;
        case ChallengeTag::B: return b;
        case ChallengeTag::C: return c;
    }
    throw std::invalid_argument("unknown challenge");
}

const char* check_name(Check c) {
    switch (c) {
        case Check::None: return "none";
        case Check::A1: return "a1";
        case Check::A2: return "a2";
        case Check::B1: return "b1";
        case Check::B2: return "b2";
        case Check::B3: return "b3";
        case Check::B4: return "b4";
        case Check::C1: return "c1";
        case Check::C2: return "c2";
        case Check::C3: return "c3";
        case Check::C4: return "c4";
        case Check::Range: return "range";
        case Check::Opening: return "opening";
        case Check::SlotSet: return "slotset";
    }
    return "?";
}

ProverCommitResult prover_commit(const SdInstance& inst, const ZmVector& witness, Rng& rng) {
    if (inst.variant != Variant::Balanced) {
        throw std::invalid_argument("the protocol runs on Balanced instances");
    }
    if (!check_witness(inst, witness)) throw std::invalid_argument("invalid witness");

    const Modulus& mod = inst.modulus;
    const size_t n = inst.n;
    const size_t cols = inst.redundancy();
    const size_t nl = n * size_t(mod.ell);

    ProverRoundState st;
    st.ternary = pad_to_weight(expand_witness(witness), inst.w, mod.ell);
    st.mask = ZmMatrix::random(mod, n, cols, rng);
    st.complement = inst.H - st.mask;
    st.share_a = syndrome(witness, st.mask);
    st.share_b = syndrome(witness, st.complement);
    st.perm = Permutation::random(nl, rng);
    st.mask_exp_perm = expand_matrix(st.mask, mod.ell).permuted_rows(st.perm.images());
    st.comp_exp_perm = expand_matrix(st.complement, mod.ell).permuted_rows(st.perm.images());
    st.ternary_perm = permuted(st.ternary, st.perm.images());

    ProverCommitResult out;
    auto open_slot = [&](Slot slot, std::vector<uint8_t> payload) {
        size_t i = slot_index(slot);
        st.openings[i] = make_opening(static_cast<uint8_t>(slot), std::move(payload), rng);
    };
    open_slot(Slot::Mask, encode_matrix(st.mask));
    open_slot(Slot::Complement, encode_matrix(st.complement));
    open_slot(Slot::ShareA, encode_vector(st.share_a));
    open_slot(Slot::ShareB, encode_vector(st.share_b));
    open_slot(Slot::Perm, encode_permutation(st.perm));
    open_slot(Slot::MaskExpPerm, encode_matrix(st.mask_exp_perm));
    open_slot(Slot::CompExpPerm, encode_matrix(st.comp_exp_perm));
    open_slot(Slot::TernaryPerm, encode_ternary(st.ternary_perm));

    for (size_t i = 0; i < kSlotOrder.size(); ++i) out.msg.digests[i] = commit(st.openings[i]);
    out.state = std::move(st);
    return out;
}

ChallengeTag verifier_challenge(Rng& rng) {
    return static_cast<ChallengeTag>(rng.uniform(0, 2));
}

static Response respond_from(const ProverRoundState& state, ChallengeTag ch) {
    Response r;
    for (Slot slot : slots_for(ch)) {
        r.openings.emplace_back(slot, state.openings[slot_index(slot)]);
    }
    return r;
}

Response prover_respond(ProverRoundState& state, ChallengeTag ch) {
    if (state.consumed) {
        throw std::logic_error("round state already consumed; a state answers one challenge");
    }
    state.consumed = true;
    return respond_from(state, ch);
}

Response prover_respond_rewind(const ProverRoundState& state, ChallengeTag ch) {
    return respond_from(state, ch);
}

namespace {

struct OpenedObjects {
    std::optional<ZmMatrix> mask, complement, mask_exp_perm, comp_exp_perm;
    std::optional<ZmVector> share_a, share_b;
    std::optional<Permutation> perm;
    std::optional<TernaryVector> ternary_perm;
};

Verdict reject(Check c, std::string detail) { return {false, c, std::move(detail)}; }

// Decode one opened payload into its typed object, enforcing the dimensions
// the instance dictates for that slot.
Verdict decode_slot(const SdInstance& inst, Slot slot, const Opening& opening,
                    OpenedObjects& out) {
    const Modulus& mod = inst.modulus;
    const size_t n = inst.n;
    const size_t cols = inst.redundancy();
    const size_t nl = n * size_t(mod.ell);
    std::string err;
    auto bad = [&](const std::string& why) {
        return reject(Check::Range, std::string(slot_name(slot)) + ": " + why);
    };
    switch (slot) {
        case Slot::Mask:
        case Slot::Complement:
        case Slot::MaskExpPerm:
        case Slot::CompExpPerm: {
            auto m = decode_matrix(opening.payload, mod, &err);
            if (!m) return bad(err);
            size_t want_rows = (slot == Slot::Mask || slot == Slot::Complement) ? n : nl;
            if (m->rows() != want_rows || m->cols() != cols) return bad("wrong dimensions");
            if (slot == Slot::Mask) out.mask = std::move(m);
            else if (slot == Slot::Complement) out.complement = std::move(m);
            else if (slot == Slot::MaskExpPerm) out.mask_exp_perm = std::move(m);
            else out.comp_exp_perm = std::move(m);
            return Verdict::ok();
        }
        case Slot::ShareA:
        case Slot::ShareB: {
            auto v = decode_vector(opening.payload, mod, &err);
            if (!v) return bad(err);
            if (v->size() != cols) return bad("wrong length");
            if (slot == Slot::ShareA) out.share_a = std::move(v);
            else out.share_b = std::move(v);
            return Verdict::ok();
        }
        case Slot::Perm: {
            auto p = decode_permutation(opening.payload, &err);
            if (!p) return bad(err);
            if (p->size() != nl) return bad("wrong degree");
            out.perm = std::move(p);
            return Verdict::ok();
        }
        case Slot::TernaryPerm: {
            auto f = decode_ternary(opening.payload, &err);
            if (!f) return bad(err);
            if (f->size() != nl) return bad("wrong length");
            out.ternary_perm = std::move(f);
            return Verdict::ok();
        }
    }
    return bad("unknown slot");
}

}  // namespace

Verdict verifier_check(const SdInstance& inst, const CommitMessage& cm, ChallengeTag ch,
                       const Response& resp) {
    const auto& expected = slots_for(ch);
    if (resp.openings.size() != expected.size()) {
        return reject(Check::SlotSet, "wrong number of openings");
    }
    for (size_t i = 0; i < expected.size(); ++i) {
        if (resp.openings[i].first != expected[i]) {
            return reject(Check::SlotSet, "unexpected slot order");
        }
    }

    OpenedObjects obj;
    for (const auto& [slot, opening] : resp.openings) {
        if (opening.tag != static_cast<uint8_t>(slot)) {
            return reject(Check::Opening, std::string(slot_name(slot)) + ": wrong domain tag");
        }
        if (!verify_opening(cm.digests[slot_index(slot)], opening)) {
            return reject(Check::Opening, std::string(slot_name(slot)) + ": digest mismatch");
        }
        Verdict v = decode_slot(inst, slot, opening, obj);
        if (!v.accept) return v;
    }

    const Modulus& mod = inst.modulus;
    switch (ch) {
        case ChallengeTag::A: {
            if (*obj.mask + *obj.complement != inst.H) return reject(Check::A1, "mask sum");
            ZmMatrix want_mask = expand_matrix(*obj.mask, mod.ell).permuted_rows(obj.perm->images());
            ZmMatrix want_comp =
                expand_matrix(*obj.complement, mod.ell).permuted_rows(obj.perm->images());
            if (want_mask != *obj.mask_exp_perm || want_comp != *obj.comp_exp_perm) {
                return reject(Check::A2, "expanded matrices not formed properly");
            }
            return Verdict::ok();
        }
        case ChallengeTag::B: {
            if (*obj.share_a + *obj.share_b != inst.s) return reject(Check::B1, "share sum");
            ZmVector prod = syndrome(obj.ternary_perm->to_zm(mod), *obj.mask_exp_perm);
            if (prod != *obj.share_a) return reject(Check::B2, "mask share product");
            if (obj.ternary_perm->weight() != inst.w) return reject(Check::B3, "weight");
            if (!obj.ternary_perm->balanced()) return reject(Check::B4, "balance");
            return Verdict::ok();
        }
        case ChallengeTag::C: {
            if (*obj.share_a + *obj.share_b != inst.s) return reject(Check::C1, "share sum");
            ZmVector prod = syndrome(obj.ternary_perm->to_zm(mod), *obj.comp_exp_perm);
            if (prod != *obj.share_b) return reject(Check::C2, "complement share product");
            if (obj.ternary_perm->weight() != inst.w) return reject(Check::C3, "weight");
            if (!obj.ternary_perm->balanced()) return reject(Check::C4, "balance");
            return Verdict::ok();
        }
    }
    return reject(Check::SlotSet, "unknown challenge");
}

SessionReport run_session(const SdInstance& inst, const ZmVector& witness, size_t t,
                          Rng& prover_rng, Rng& verifier_rng) {
    if (t < 1) throw std::invalid_argument("at least one round required");
    SessionReport report;
    report.accepted = true;
    report.rounds.reserve(t);
    for (size_t r = 0; r < t; ++r) {
        RoundTranscript rt;
        auto [state, cm] = prover_commit(inst, witness, prover_rng);
        rt.commit_msg = cm;
        rt.challenge = verifier_challenge(verifier_rng);
        rt.response = prover_respond(state, rt.challenge);
        rt.verdict = verifier_check(inst, cm, rt.challenge, rt.response);
        rt.commit_bytes = encode_commit_message(cm).size();
        rt.challenge_bytes = encode_challenge(rt.challenge).size();
        rt.response_bytes = encode_response(rt.response).size();
        report.total_bytes += rt.commit_bytes + rt.challenge_bytes + rt.response_bytes;
        report.accepted = report.accepted && rt.verdict.accept;
        report.rounds.push_back(std::move(rt));
    }
    return report;
}

SessionReport run_session(const SdInstance& inst, const ZmVector& witness, size_t t, Rng& rng) {
    Rng prover = rng.split();
    Rng verifier = rng.split();
    return run_session(inst, witness, t, prover, verifier);
}

double comm_cost_bits(size_t n, size_t k, int32_t m) {
    if (m < 4) throw std::invalid_argument("modulus must be at least 4");
    if (k > n || n == 0) throw std::invalid_argument("require k <= n, n >= 1");
    const double ell = std::floor(double(m) / 2.0);
    const double nd = double(n);
    const double red = double(n - k);
    const double log2m = std::log2(double(m));
    const double nl = nd * ell;
    return 2.0 * nd * red * log2m + nl * std::log2(nl) + 2.0 * nl * red * log2m;
}

std::vector<uint8_t> encode_commit_message(const CommitMessage& cm) {
    std::vector<uint8_t> out;
    out.reserve(8 * 32);
    for (const Commitment& c : cm.digests) put_bytes(out, c.digest);
    return out;
}

std::optional<CommitMessage> decode_commit_message(std::span<const uint8_t> bytes,
                                                   std::string* err) {
    if (bytes.size() != 8 * 32) {
        if (err) *err = "commit message must be exactly 8 digests";
        return std::nullopt;
    }
    CommitMessage cm;
    for (size_t i = 0; i < 8; ++i) {
        std::copy(bytes.begin() + i * 32, bytes.begin() + (i + 1) * 32, cm.digests[i].digest.begin());
    }
    return cm;
}

std::vector<uint8_t> encode_challenge(ChallengeTag t) {
    return {static_cast<uint8_t>(t)};
}

std::optional<ChallengeTag> decode_challenge(std::span<const uint8_t> bytes, std::string* err) {
    if (bytes.size() != 1 || bytes[0] > 2) {
        if (err) *err = "challenge must be one byte 0/1/2";
        return std::nullopt;
    }
    return static_cast<ChallengeTag>(bytes[0]);
}

std::vector<uint8_t> encode_response(const Response& r) {
    std::vector<uint8_t> out;
    put_u8(out, static_cast<uint8_t>(r.openings.size()));
    for (const auto& [slot, opening] : r.openings) {
        put_u8(out, static_cast<uint8_t>(slot));
        put_bytes(out, opening.salt);
        put_u32(out, static_cast<uint32_t>(opening.payload.size()));
        put_bytes(out, opening.payload);
    }
    return out;
}

std::optional<Response> decode_response(std::span<const uint8_t> bytes, std::string* err) {
    ByteReader r(bytes);
    auto count = r.u8();
    if (!count || *count > 8) {
        if (err) *err = "bad opening count";
        return std::nullopt;
    }
    Response resp;
    for (uint8_t i = 0; i < *count; ++i) {
        auto slot_byte = r.u8();
        if (!slot_byte || *slot_byte < static_cast<uint8_t>(Slot::Mask) ||
            *slot_byte > static_cast<uint8_t>(Slot::TernaryPerm)) {
            if (err) *err = "bad slot byte";
            return std::nullopt;
        }
        auto salt = r.bytes(32);
        auto len = r.u32();
        if (!salt || !len || r.remaining() < *len) {
            if (err) *err = "truncated opening";
            return std::nullopt;
        }
        Opening o;
        o.tag = *slot_byte;
        std::copy(salt->begin(), salt->end(), o.salt.begin());
        auto payload = r.bytes(*len);
        o.payload.assign(payload->begin(), payload->end());
        resp.openings.emplace_back(static_cast<Slot>(*slot_byte), std::move(o));
    }
    if (!r.done()) {
        if (err) *err = "trailing bytes after response";
        return std::nullopt;
    }
    return resp;
}

}  // namespace leezk
