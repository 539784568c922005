// Acceptance suite: end-to-end checks of the protocol stack at its stated
// tolerances, one pass/fail line per criterion. Exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "leezk/analysis.hpp"
#include "leezk/problems.hpp"
#include "leezk/protocol.hpp"
#include "leezk/reductions.hpp"
#include "leezk/wire.hpp"
#include "support.hpp"

using namespace leezk;

namespace {

const Modulus m7(7);
const Modulus m5(5);

int g_failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int id, const char* what, bool pass, const std::string& note, double secs) {
    std::printf("[%s] criterion %d: %s%s%s (%.1fs)\n", pass ? "PASS" : "FAIL", id, what,
                note.empty() ? "" : " — ", note.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

// --------------------------------------------------------------------------
// 1. Golden witness transformations

void criterion_1() {
    Timer t;
    const ZmVector e(m7, {-2, 0, 1, 3, -1, -1});
    const TernaryVector expanded_want(
        {-1, -1, 0, 0, 0, 0, 1, 0, 0, 1, 1, 1, -1, 0, 0, -1, 0, 0});
    const TernaryVector padded_want(
        {-1, -1, 0, 1, -1, 0, 1, 0, 0, 1, 1, 1, -1, 0, 0, -1, 0, 0});

    TernaryVector expanded = expand_witness(e);
    TernaryVector padded = pad_to_weight(expanded, 10, 3);
    bool ok = expanded == expanded_want && padded == padded_want &&
              accumulate(padded, m7) == e && lee_weight(e) == 8 && padded.weight() == 10 &&
              expanded.weight() == 8;
    report(1, "golden witness transformations", ok, "", t.seconds());
}

// --------------------------------------------------------------------------
// 2. Balanced and ternary formulations decide identically at desk scale

std::vector<ZmVector> all_vectors(const Modulus& mod, size_t len) {
    std::vector<ZmVector> out;
    std::vector<int16_t> digits(len, static_cast<int16_t>(mod.min_rep()));
    size_t count = 1;
    for (size_t i = 0; i < len; ++i) count *= size_t(mod.m);
    for (size_t c = 0; c < count; ++c) {
        out.push_back(ZmVector::from_canonical(mod, std::vector<int16_t>(digits.begin(),
                                                                         digits.end())));
        for (size_t i = len; i-- > 0;) {
            if (digits[i] < mod.max_rep()) {
                ++digits[i];
                break;
            }
            digits[i] = static_cast<int16_t>(mod.min_rep());
        }
    }
    return out;
}

void criterion_2() {
    Timer t;
    Rng rng(2002);
    const auto syndromes = all_vectors(m5, 2);
    size_t instances = 0, yes = 0;
    bool ok = true;
    for (int h = 0; h < 100 && ok; ++h) {
        ZmMatrix H = ZmMatrix::random(m5, 3, 2, rng);
        for (const ZmVector& s : syndromes) {
            for (int64_t w : {0, 2}) {
                SdInstance bal = SdInstance::make(Variant::Balanced, m5, H, s, w, 3, 1);
                BruteForceResult rb = decide_bruteforce(bal, 1u << 20);
                BruteForceResult rt = decide_bruteforce(to_ternary(bal), 1u << 20);
                ++instances;
                ok = ok && rb.decision != Decision::BudgetExceeded &&
                     rt.decision != Decision::BudgetExceeded && rb.decision == rt.decision;
                yes += rb.decision == Decision::Yes;
                if (!ok) break;
            }
        }
    }
    report(2, "balanced/ternary decision equivalence", ok,
           std::to_string(instances) + " instances, " + std::to_string(yes) + " solvable",
           t.seconds());
}

// --------------------------------------------------------------------------
// 3. General -> balanced reduction: forward lift, exhaustive reverse probe

// Minimum Lee weight of g = (u + r | r) over r, subject to the integer sum
// of the representatives vanishing. Exact DP over coordinates; the running
// sum of one pair is bounded by 2*ell per coordinate.
int64_t min_balanced_weight(const ZmVector& u) {
    const Modulus& mod = u.modulus();
    const int64_t span = 2 * int64_t(mod.ell) * int64_t(u.size());
    const int64_t kInf = INT64_MAX / 4;
    std::vector<int64_t> dp(size_t(2 * span + 1), kInf);
    dp[size_t(span)] = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        std::vector<int64_t> next(dp.size(), kInf);
        for (size_t off = 0; off < dp.size(); ++off) {
            if (dp[off] == kInf) continue;
            for (int64_t r = mod.min_rep(); r <= mod.max_rep(); ++r) {
                int64_t left = center_mod(u[i] + r, mod);
                int64_t idx = int64_t(off) + left + r;
                if (idx < 0 || idx >= int64_t(next.size())) continue;
                int64_t wt = dp[off] + std::llabs(left) + std::llabs(r);
                if (wt < next[size_t(idx)]) next[size_t(idx)] = wt;
            }
        }
        dp.swap(next);
    }
    return dp[size_t(span)];
}

// Exhaustive minimum over the explicit (e'-solution, r) parameterization of
// the target solution set; slow path used to cross-check the DP.
int64_t min_balanced_weight_direct(const ZmVector& u) {
    const Modulus& mod = u.modulus();
    const size_t len = u.size();
    int64_t best = INT64_MAX / 4;
    std::vector<int16_t> digits(len, static_cast<int16_t>(mod.min_rep()));
    size_t count = 1;
    for (size_t i = 0; i < len; ++i) count *= size_t(mod.m);
    for (size_t c = 0; c < count; ++c) {
        ZmVector r = ZmVector::from_canonical(mod,
                                              std::vector<int16_t>(digits.begin(), digits.end()));
        ZmVector g_left = u + r;
        if (vector_sum(g_left) + vector_sum(r) == 0) {
            best = std::min(best, lee_weight(g_left) + lee_weight(r));
        }
        for (size_t i = len; i-- > 0;) {
            if (digits[i] < mod.max_rep()) {
                ++digits[i];
                break;
            }
            digits[i] = static_cast<int16_t>(mod.min_rep());
        }
    }
    return best;
}

void criterion_3() {
    Timer t;
    Rng rng(2003);
    const auto syndromes = all_vectors(m5, 2);
    const auto candidates = all_vectors(m5, 3);

    size_t instances = 0, lifted = 0, findings = 0;
    bool forward_ok = true, dp_consistent = true;
    std::string finding_note;
    std::optional<SdInstance> first_finding;

    for (int h = 0; h < 100; ++h) {
        ZmMatrix H = ZmMatrix::random(m5, 3, 2, rng);
        for (const ZmVector& s : syndromes) {
            for (int64_t w = 0; w <= 3; ++w) {
                SdInstance src = SdInstance::make(Variant::General, m5, H, s, w, 3, 1);
                BalancedReduction red = to_balanced(src);
                ++instances;

                // forward: every source witness lifts to a target witness
                bool src_yes = false;
                for (const ZmVector& e : candidates) {
                    if (!check_witness(src, e)) continue;
                    src_yes = true;
                    ZmVector g = lift_witness(red, e);
                    forward_ok = forward_ok && check_witness(red.target, g);
                    ++lifted;
                }

                // reverse probe: exact decision for the target over the
                // coset parameterization g = (u + r | r), u = (e' | 0),
                // e' H = 2s
                bool tgt_yes = false;
                for (const ZmVector& ep : candidates) {
                    if (syndrome(ep, src.H) != src.s.scaled(red.c)) continue;
                    ZmVector u = concat(ep, ZmVector::zeros(m5, red.pad));
                    if (min_balanced_weight(u) <= red.target.w) {
                        tgt_yes = true;
                        break;
                    }
                }

                if (src_yes && !tgt_yes) {
                    // contradicts the verified forward lift
                    forward_ok = false;
                } else if (!src_yes && tgt_yes) {
                    ++findings;
                    if (!first_finding) {
                        first_finding = src;
                        finding_note = "first at w=" + std::to_string(w);
                    }
                }
            }
        }
    }

    // validate the first finding concretely: exhibit a target witness whose
    // extraction exceeds the source weight bound
    bool finding_valid = true;
    if (first_finding) {
        const SdInstance& src = *first_finding;
        BalancedReduction red = to_balanced(src);
        std::optional<ZmVector> exhibit;
        for (const ZmVector& ep : candidates) {
            if (exhibit) break;
            if (syndrome(ep, src.H) != src.s.scaled(red.c)) continue;
            ZmVector u = concat(ep, ZmVector::zeros(m5, red.pad));
            for (const ZmVector& r : all_vectors(m5, red.nbar)) {
                ZmVector left = u + r;
                if (vector_sum(left) + vector_sum(r) != 0) continue;
                if (lee_weight(left) + lee_weight(r) > red.target.w) continue;
                exhibit = concat(left, r);
                break;
            }
        }
        finding_valid = exhibit.has_value() && check_witness(red.target, *exhibit) &&
                        extract_witness(red, *exhibit).weight > src.w;
        if (finding_valid) {
            finding_note += ", counterexample exhibited: target witness of weight " +
                            std::to_string(lee_weight(*exhibit)) + " extracts to source weight " +
                            std::to_string(extract_witness(red, *exhibit).weight) + " > w=" +
                            std::to_string(src.w);
        }
    }

    // DP cross-check against the direct enumeration on a small sample
    Rng check_rng(2033);
    for (int trial = 0; trial < 5; ++trial) {
        ZmVector ep = ZmVector::random(m5, 3, check_rng);
        ZmVector u = concat(ep, ZmVector::zeros(m5, 3));
        dp_consistent = dp_consistent && min_balanced_weight(u) == min_balanced_weight_direct(u);
    }

    // parameterization probe: uniform vectors satisfy the target syndrome
    // iff they have the coset form
    bool param_ok = true;
    {
        ZmMatrix H = ZmMatrix::random(m5, 3, 2, check_rng);
        ZmVector s = ZmVector::random(m5, 2, check_rng);
        SdInstance src = SdInstance::make(Variant::General, m5, H, s, 2, 3, 1);
        BalancedReduction red = to_balanced(src);
        std::set<std::vector<int16_t>> ep_solutions;
        for (const ZmVector& ep : candidates) {
            if (syndrome(ep, src.H) == src.s.scaled(2)) ep_solutions.insert(ep.entries());
        }
        for (int trial = 0; trial < 20000; ++trial) {
            ZmVector g = ZmVector::random(m5, 2 * red.nbar, check_rng);
            bool satisfies = syndrome(g, red.target.H) == red.target.s;
            ZmVector u = g.slice(0, red.nbar) - g.slice(red.nbar, red.nbar);
            bool tail_zero = true;
            for (size_t i = 3; i < red.nbar; ++i) tail_zero = tail_zero && u[i] == 0;
            bool coset_form = tail_zero && ep_solutions.count(u.slice(0, 3).entries()) == 1;
            param_ok = param_ok && satisfies == coset_form;
        }
    }

    bool ok = forward_ok && dp_consistent && param_ok && finding_valid;
    std::string note = std::to_string(lifted) + " witnesses lifted over " +
                       std::to_string(instances) + " instances; reverse probe findings: " +
                       std::to_string(findings) +
                       (findings > 0 ? " (" + finding_note + ")" : "");
    report(3, "general->balanced reduction, forward exact + reverse probe", ok, note,
           t.seconds());
}

// --------------------------------------------------------------------------
// 4. Completeness

void criterion_4() {
    Timer t;
    Rng rng(2004);
    const size_t sessions = 1000;
    size_t accepted = 0;
    for (size_t i = 0; i < sessions; ++i) {
        int64_t w = 2 * rng.uniform(0, 20);  // even, <= n(ell-1) = 40 <= 120
        PlantedInstance planted = sample_instance(20, 10, w, m7, rng);
        SessionReport rep = run_session(planted.instance, planted.witness, 16, rng);
        accepted += rep.accepted;
    }
    report(4, "completeness: 1000 honest sessions at t=16", accepted == sessions,
           std::to_string(accepted) + "/" + std::to_string(sessions) + " accepted", t.seconds());
}

// --------------------------------------------------------------------------
// 5. Soundness ceiling

void criterion_5() {
    Timer t;
    Rng rng(2055);
    PlantedInstance planted = sample_instance(10, 5, 6, m7, rng);
    const SdInstance& inst = planted.instance;  // adversary never sees the witness

    bool ok = true;
    std::string note;
    const int rounds = 30000;
    const double sigma = std::sqrt((2.0 / 3.0) * (1.0 / 3.0) / rounds);
    for (CheatPair strat : {CheatPair::AB, CheatPair::AC, CheatPair::BC}) {
        int accepts = 0;
        int uncovered_accepts = 0;
        for (int i = 0; i < rounds; ++i) {
            CheatingProver prover = cheating_prover_round(inst, strat, rng);
            ChallengeTag ch = verifier_challenge(rng);
            Verdict v = verifier_check(inst, prover.commit_message(), ch, prover.respond(ch));
            accepts += v.accept;
            if (ch == uncovered(strat) && v.accept) ++uncovered_accepts;
        }
        double rate = double(accepts) / rounds;
        bool in_band = std::fabs(rate - 2.0 / 3.0) <= 4 * sigma;
        ok = ok && in_band && uncovered_accepts == 0;
        note += std::string(cheat_name(strat)) + "=" + std::to_string(rate).substr(0, 6) + " ";
    }

    // t = 24 sessions: rejection on any round rejects the session
    const int sessions = 10000;
    int session_accepts = 0;
    CheatPair strats[3] = {CheatPair::AB, CheatPair::AC, CheatPair::BC};
    for (int s = 0; s < sessions; ++s) {
        CheatPair strat = strats[s % 3];
        bool all_rounds = true;
        for (int r = 0; r < 24 && all_rounds; ++r) {
            CheatingProver prover = cheating_prover_round(inst, strat, rng);
            ChallengeTag ch = verifier_challenge(rng);
            Verdict v = verifier_check(inst, prover.commit_message(), ch, prover.respond(ch));
            all_rounds = v.accept;
        }
        session_accepts += all_rounds;
    }
    ok = ok && session_accepts == 0;
    note += "| t=24 session accepts: " + std::to_string(session_accepts) + "/10000";
    report(5, "soundness: per-round 2/3 ceiling and (2/3)^24 sessions", ok, note, t.seconds());
}

// --------------------------------------------------------------------------
// 6. Zero-knowledge proxies

std::vector<Response> honest_views(const SdInstance& inst, const ZmVector& witness,
                                   ChallengeTag ch, size_t count, Rng& rng) {
    std::vector<Response> views;
    views.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        auto [state, cm] = prover_commit(inst, witness, rng);
        views.push_back(prover_respond(state, ch));
    }
    return views;
}

void criterion_6() {
    Timer t;
    Rng rng(2006);

    // (i) every revealed ternary vector has the witness-independent shape
    bool shape_ok = true;
    for (int trial = 0; trial < 3000; ++trial) {
        int64_t w = 2 * rng.uniform(1, 6);
        PlantedInstance planted = sample_instance(6, 3, w, m7, rng);
        auto [state, cm] = prover_commit(planted.instance, planted.witness, rng);
        ChallengeTag ch = rng.uniform(0, 1) == 0 ? ChallengeTag::B : ChallengeTag::C;
        Response resp = prover_respond(state, ch);
        auto tern = decode_ternary(resp.openings[3].second.payload);
        int64_t plus = 0, minus = 0, zero = 0;
        for (int8_t x : tern->entries()) {
            plus += x == 1;
            minus += x == -1;
            zero += x == 0;
        }
        shape_ok = shape_ok && plus == w / 2 && minus == w / 2 && zero == 18 - w;
    }

    // (ii) distribution tests at 5000 samples per arm
    PlantedInstance p1 = sample_instance(6, 3, 8, m7, rng);
    PlantedInstance p2 = sample_instance(6, 3, 8, m7, rng);

    auto xs = honest_views(p1.instance, p1.witness, ChallengeTag::B, 5000, rng);
    auto ys = honest_views(p2.instance, p2.witness, ChallengeTag::B, 5000, rng);
    DistributionReport two_witnesses =
        transcript_distribution_test(p1.instance, ChallengeTag::B, xs, ys);

    auto real_a = honest_views(p1.instance, p1.witness, ChallengeTag::A, 5000, rng);
    std::vector<Response> sim_a;
    for (int i = 0; i < 5000; ++i) {
        sim_a.push_back(simulate_view(p1.instance, ChallengeTag::A, rng).response);
    }
    DistributionReport real_vs_sim =
        transcript_distribution_test(p1.instance, ChallengeTag::A, real_a, sim_a);

    std::vector<Response> broken, sim_b;
    for (int i = 0; i < 5000; ++i) {
        broken.push_back(
            testsupport::identity_perm_view(p1.instance, p1.witness, ChallengeTag::B, rng));
        sim_b.push_back(simulate_view(p1.instance, ChallengeTag::B, rng).response);
    }
    DistributionReport negative =
        transcript_distribution_test(p1.instance, ChallengeTag::B, broken, sim_b);

    bool ok = shape_ok && two_witnesses.p_value > 0.01 && real_vs_sim.p_value > 0.01 &&
              negative.p_value < 0.001;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "shape exact; p(two witnesses)=%.3f p(real vs sim)=%.3f p(negative)=%.2e",
                  two_witnesses.p_value, real_vs_sim.p_value, negative.p_value);
    report(6, "zero-knowledge proxies", ok, buf, t.seconds());
}

// --------------------------------------------------------------------------
// 7. Extractor

void criterion_7() {
    Timer t;
    Rng rng(2007);
    size_t good = 0;
    const size_t trials = 1000;
    for (size_t i = 0; i < trials; ++i) {
        int64_t w = 2 * rng.uniform(0, 6);
        PlantedInstance planted = sample_instance(6, 3, w, m7, rng);
        auto [state, cm] = prover_commit(planted.instance, planted.witness, rng);
        ExtractorOutcome out = extract_from_rewind(
            planted.instance, cm, prover_respond_rewind(state, ChallengeTag::A),
            prover_respond_rewind(state, ChallengeTag::B),
            prover_respond_rewind(state, ChallengeTag::C));
        good += out.all_accepted && !out.binding_break && out.witness.has_value() &&
                check_witness(planted.instance, *out.witness);
    }
    report(7, "extractor: rewound rounds yield verified witnesses", good == trials,
           std::to_string(good) + "/" + std::to_string(trials), t.seconds());
}

// --------------------------------------------------------------------------
// 8. Communication cost

void criterion_8() {
    Timer t;
    double bits = comm_cost_bits(425, 229, 4);
    bool formula_ok = bits >= 0.98e6 && bits <= 1.03e6;

    Rng rng(2008);
    PlantedInstance planted = sample_instance(425, 229, 424, Modulus(4), rng);
    auto [state, cm] = prover_commit(planted.instance, planted.witness, rng);
    size_t worst = 0;
    for (ChallengeTag ch : {ChallengeTag::A, ChallengeTag::B, ChallengeTag::C}) {
        worst = std::max(worst, encode_response(prover_respond_rewind(state, ch)).size());
    }
    bool envelope_ok = double(worst) <= 1.25 * bits;

    char buf[160];
    std::snprintf(buf, sizeof buf, "formula=%.4g bits, worst response=%zu bytes (%.2fx)", bits,
                  worst, double(worst) / bits);
    report(8, "communication cost at (425, 229, m=4)", formula_ok && envelope_ok, buf,
           t.seconds());
}

// --------------------------------------------------------------------------
// 9. Robustness

void criterion_9() {
    Timer t;
    Rng rng(2009);

    // 100k fuzzed frames through the structural decoder
    size_t decoded = 0;
    for (int trial = 0; trial < 100000; ++trial) {
        std::vector<uint8_t> junk(size_t(rng.uniform(0, 100)));
        rng.fill_bytes(junk.data(), junk.size());
        std::string err;
        auto f = decode_frame(junk, nullptr, &err);
        if (f) ++decoded;
        if (!f && err.empty()) {
            report(9, "robustness", false, "frame decode failed without a reason", t.seconds());
            return;
        }
    }
    // oversized length claims are rejected unread
    std::vector<uint8_t> oversized = {1, 0, 0xff, 0xff, 0xff, 0x7f};
    std::string err;
    bool cap_ok = !decode_frame(oversized, nullptr, &err) && err == "frame length exceeds cap";

    // the named-check tamper matrix
    PlantedInstance planted = sample_instance(6, 3, 8, m7, rng);
    auto results = testsupport::run_tamper_matrix(planted.instance, planted.witness, rng);
    bool tampers_ok = results.size() >= 16;
    std::string tamper_note;
    for (const auto& r : results) {
        if (!r.caught_as_expected()) {
            tampers_ok = false;
            tamper_note = r.name + std::string(" caught as ") + check_name(r.verdict.failed);
        }
    }

    // random single-byte flips in honest responses never crash or pass
    bool flips_ok = true;
    for (int trial = 0; trial < 2000; ++trial) {
        auto [state, cm] = prover_commit(planted.instance, planted.witness, rng);
        ChallengeTag ch = verifier_challenge(rng);
        std::vector<uint8_t> bytes = encode_response(prover_respond(state, ch));
        bytes[size_t(rng.uniform(0, int64_t(bytes.size()) - 1))] ^= uint8_t(rng.uniform(1, 255));
        auto resp = decode_response(bytes);
        if (!resp) continue;
        Verdict v = verifier_check(planted.instance, cm, ch, *resp);
        flips_ok = flips_ok && !v.accept;
    }

    bool ok = cap_ok && tampers_ok && flips_ok;
    report(9, "robustness: fuzzed frames and tampered responses", ok,
           "100000 frames fuzzed, " + std::to_string(results.size()) + " named tampers" +
               (tamper_note.empty() ? "" : "; " + tamper_note),
           t.seconds());
}

}  // namespace

int main() {
    using CriterionFn = void (*)();
    const CriterionFn criteria[] = {criterion_1, criterion_2, criterion_3,
                                    criterion_4, criterion_5, criterion_6,
                                    criterion_7, criterion_8, criterion_9};
    for (size_t i = 0; i < std::size(criteria); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(int(i) + 1, "criterion threw", false, e.what(), 0.0);
        }
    }
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
