#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leezk/commit.hpp"
#include "leezk/problems.hpp"
#include "leezk/reductions.hpp"
#include "leezk/ring.hpp"
#include "leezk/rng.hpp"

namespace leezk {

// One round of the three-challenge identification protocol on a Balanced
// instance. The prover commits to eight objects; the verifier opens one of
// three fixed slot subsets and checks the corresponding relations.

enum class ChallengeTag : uint8_t { A = 0, B = 1, C = 2 };

const char* challenge_name(ChallengeTag t);

// Commitment slots in wire order. Each slot byte doubles as the opening's
// domain-separation tag.
enum class Slot : uint8_t {
    Mask = 0x11,         // uniform matrix R
    Complement = 0x12,   // H - R
    ShareA = 0x13,       // e*R, first syndrome share
    ShareB = 0x14,       // e*(H-R), second share (a + b = s)
    Perm = 0x15,         // row shuffle on {1..n*ell}
    MaskExpPerm = 0x16,  // expanded mask, rows permuted
    CompExpPerm = 0x17,  // expanded complement, rows permuted
    TernaryPerm = 0x18,  // permuted ternary witness form
};

constexpr std::array<Slot, 8> kSlotOrder = {
    Slot::Mask,   Slot::Complement,  Slot::ShareA,      Slot::ShareB,
    Slot::Perm,   Slot::MaskExpPerm, Slot::CompExpPerm, Slot::TernaryPerm,
};

size_t slot_index(Slot s);  // position in kSlotOrder
const char* slot_name(Slot s);
// The slot set opened under each challenge, in response order.
const std::vector<Slot>& slots_for(ChallengeTag t);

struct CommitMessage {
    std::array<Commitment, 8> digests{};  // kSlotOrder positions
    friend bool operator==(const CommitMessage&, const CommitMessage&) = default;
};

struct Response {
    std::vector<std::pair<Slot, Opening>> openings;
};

// All per-round prover material. Single-use: answering two challenges from
// one state would hand the verifier complementary openings and break the
// hiding of the witness, so prover_respond consumes the state.
struct ProverRoundState {
    TernaryVector ternary;  // the weight-w balanced form of the witness
    ZmMatrix mask;
    ZmMatrix complement;
    ZmVector share_a;
    ZmVector share_b;
    Permutation perm;
    ZmMatrix mask_exp_perm;
    ZmMatrix comp_exp_perm;
    TernaryVector ternary_perm;
    std::array<Opening, 8> openings;  // kSlotOrder positions
    bool consumed = false;
};

struct ProverCommitResult {
    ProverRoundState state;
    CommitMessage msg;
};

// Steps 1-5: derive the ternary form, draw the mask and the shuffle, build
// the eight salted commitments. Draw order from rng: mask entries
// (row-major), shuffle, then salts in slot order.
ProverCommitResult prover_commit(const SdInstance& inst, const ZmVector& witness, Rng& rng);

ChallengeTag verifier_challenge(Rng& rng);

// Opens exactly the slot set of the challenge and consumes the state.
Response prover_respond(ProverRoundState& state, ChallengeTag ch);

// Rewind hook for the test harness and the knowledge-extractor device ONLY:
// answers without consuming, which a real prover must never do.
Response prover_respond_rewind(const ProverRoundState& state, ChallengeTag ch);

enum class Check {
    None,
    A1,  // mask + complement == H
    A2,  // expanded/permuted matrices formed properly
    B1,  // share_a + share_b == s
    B2,  // ternary_perm * mask_exp_perm == share_a
    B3,  // lee_weight(ternary_perm) == w
    B4,  // ternary_perm balanced
    C1,  // share_a + share_b == s
    C2,  // ternary_perm * comp_exp_perm == share_b
    C3,  // lee_weight(ternary_perm) == w
    C4,  // ternary_perm balanced
    Range,    // dimensions, canonical ranges, bijection, ternary entries
    Opening,  // digest mismatch or wrong domain tag
    SlotSet,  // response does not carry the challenge's slot set
};

const char* check_name(Check c);

struct Verdict {
    bool accept = false;
    Check failed = Check::None;
    std::string detail;

    static Verdict ok() { return {true, Check::None, {}}; }
};

// Verifies every opening against its committed slot, range-checks every
// opened object, then runs the challenge's relation checks in order.
// Malformed input of any kind yields a structured reject, never a throw.
Verdict verifier_check(const SdInstance& inst, const CommitMessage& cm, ChallengeTag ch,
                       const Response& resp);

struct RoundTranscript {
    CommitMessage commit_msg;
    ChallengeTag challenge = ChallengeTag::A;
    Response response;
    Verdict verdict;
    size_t commit_bytes = 0;
    size_t challenge_bytes = 0;
    size_t response_bytes = 0;
};

struct SessionReport {
    bool accepted = false;
    std::vector<RoundTranscript> rounds;
    uint64_t total_bytes = 0;
};

// t sequential rounds with fresh randomness; accepts iff every round does.
// Prover and verifier consume separate streams so that a session split
// across two processes with the same two seeds reproduces this run exactly.
SessionReport run_session(const SdInstance& inst, const ZmVector& witness, size_t t,
                          Rng& prover_rng, Rng& verifier_rng);
SessionReport run_session(const SdInstance& inst, const ZmVector& witness, size_t t, Rng& rng);

// Per-round size in bits of the dominant openings (both matrices, the
// shuffle, and both expanded matrices), with ell = floor(m/2):
//   2n(n-k)log2(m) + n*ell*log2(n*ell) + 2n*ell(n-k)log2(m).
double comm_cost_bits(size_t n, size_t k, int32_t m);

// Message encodings (wire contract). The challenge is a single byte 0/1/2.
std::vector<uint8_t> encode_commit_message(const CommitMessage& cm);
std::optional<CommitMessage> decode_commit_message(std::span<const uint8_t> bytes,
                                                   std::string* err = nullptr);
std::vector<uint8_t> encode_challenge(ChallengeTag t);
std::optional<ChallengeTag> decode_challenge(std::span<const uint8_t> bytes,
                                             std::string* err = nullptr);
std::vector<uint8_t> encode_response(const Response& r);
std::optional<Response> decode_response(std::span<const uint8_t> bytes,
                                        std::string* err = nullptr);

}  // namespace leezk
