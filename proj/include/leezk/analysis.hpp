#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leezk/problems.hpp"
#include "leezk/protocol.hpp"
#include "leezk/rng.hpp"

namespace leezk {

// Executable counterparts of the protocol's security argument: a simulator
// that produces accepting views for any single challenge without the
// witness, scripted cheating provers that pass exactly two of the three
// challenges, and a chi-squared comparison of revealed transcripts.

struct SimulatedView {
    ChallengeTag challenge = ChallengeTag::A;
    CommitMessage msg;
    Response response;
};

// Samples a view for the given challenge using only public data. Unopened
// slots are commitments to freshly sampled dummy objects of the right shape.
// The produced (msg, response) pair always passes verifier_check.
SimulatedView simulate_view(const SdInstance& inst, ChallengeTag ch, Rng& rng);

// The pair of challenges a scripted adversary prepares to answer.
enum class CheatPair { AB, AC, BC };

std::array<ChallengeTag, 2> covered(CheatPair p);
ChallengeTag uncovered(CheatPair p);
const char* cheat_name(CheatPair p);

// A witness-less prover committed to one round. respond() may be called for
// any challenge (the harness owns rewinding); challenges in the covered
// pair are answered acceptably, the uncovered one is rejected with
// probability 1.
class CheatingProver {
public:
    const CommitMessage& commit_message() const { return msg_; }
    Response respond(ChallengeTag ch) const;

private:
    friend CheatingProver cheating_prover_round(const SdInstance&, CheatPair, Rng&);
    CommitMessage msg_;
    std::array<Opening, 8> openings_;
};

// Builds the commitments for one cheating round. AB/AC use an honest
// mask/shuffle with a fabricated ternary vector; BC fabricates both
// expanded matrices so the share products close, which check a1 exposes.
// Requires w >= 2 for BC (it needs a nonzero entry to steer the fake
// matrix) and an instance the adversary has no witness for.
CheatingProver cheating_prover_round(const SdInstance& inst, CheatPair strat, Rng& rng);

struct DistributionReport {
    double statistic = 0.0;
    int64_t degrees = 0;
    double p_value = 1.0;
    size_t n_x = 0;
    size_t n_y = 0;
    std::string to_json() const;
};

// Chi-squared homogeneity test between two collections of accepted
// responses for the same challenge on the same instance shape. Features are
// one observation per sample: the first entry of the opened share, the
// placement of the first +1/-1 of the revealed ternary vector (B/C), and
// the first image of the shuffle plus the first mask entry (A). Bins with
// pooled expectation below 5 are merged. Throws if either side has fewer
// than 100 samples.
DistributionReport transcript_distribution_test(const SdInstance& inst, ChallengeTag ch,
                                                const std::vector<Response>& xs,
                                                const std::vector<Response>& ys);

struct ExtractorOutcome {
    bool all_accepted = false;
    bool binding_break = false;
    std::optional<ZmVector> witness;
    std::string detail;
};

// Knowledge-extractor device: given one commit message answered on all
// three challenges, recovers the ternary vector through the openings,
// un-shuffles it and accumulates it into a candidate witness. If all three
// responses verify but two openings of one slot disagree, that is a
// commitment-binding break and is flagged as such.
ExtractorOutcome extract_from_rewind(const SdInstance& inst, const CommitMessage& cm,
                                     const Response& resp_a, const Response& resp_b,
                                     const Response& resp_c);

}  // namespace leezk
