#include "leezk/analysis.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <stdexcept>

#include "json.hpp"
#include "leezk/reductions.hpp"

namespace leezk {

namespace {

struct SlotObjects {
    std::array<Opening, 8> openings;

    void set(Slot slot, std::vector<uint8_t> payload, Rng& rng) {
        openings[slot_index(slot)] =
            make_opening(static_cast<uint8_t>(slot), std::move(payload), rng);
    }

    CommitMessage commit_all() const {
        CommitMessage cm;
        for (size_t i = 0; i < openings.size(); ++i) cm.digests[i] = commit(openings[i]);
        return cm;
    }

    Response response_for(ChallengeTag ch) const {
        Response r;
        for (Slot slot : slots_for(ch)) r.openings.emplace_back(slot, openings[slot_index(slot)]);
        return r;
    }
};

}  // namespace

SimulatedView simulate_view(const SdInstance& inst, ChallengeTag ch, Rng& rng) {
    if (inst.variant != Variant::Balanced) {
        throw std::invalid_argument("simulator runs on Balanced instances");
    }
    const Modulus& mod = inst.modulus;
    const size_t n = inst.n;
    const size_t cols = inst.redundancy();
    const size_t nl = n * size_t(mod.ell);

    SlotObjects slots;
    auto dummy_matrix = [&](Slot s, size_t rows) {
        slots.set(s, encode_matrix(ZmMatrix::random(mod, rows, cols, rng)), rng);
    };
    auto dummy_vector = [&](Slot s) {
        slots.set(s, encode_vector(ZmVector::random(mod, cols, rng)), rng);
    };

    switch (ch) {
        case ChallengeTag::A: {
            ZmMatrix mask = ZmMatrix::random(mod, n, cols, rng);
            ZmMatrix complement = inst.H - mask;
            Permutation perm = Permutation::random(nl, rng);
            slots.set(Slot::Mask, encode_matrix(mask), rng);
            slots.set(Slot::Complement, encode_matrix(complement), rng);
            slots.set(Slot::Perm, encode_permutation(perm), rng);
            slots.set(Slot::MaskExpPerm,
                      encode_matrix(expand_matrix(mask, mod.ell).permuted_rows(perm.images())),
                      rng);
            slots.set(Slot::CompExpPerm,
                      encode_matrix(expand_matrix(complement, mod.ell).permuted_rows(perm.images())),
                      rng);
            dummy_vector(Slot::ShareA);
            dummy_vector(Slot::ShareB);
            slots.set(Slot::TernaryPerm,
                      encode_ternary(TernaryVector::random_balanced(nl, inst.w, rng)), rng);
            break;
        }
        case ChallengeTag::B: {
            ZmMatrix mask = ZmMatrix::random(mod, n, cols, rng);
            Permutation perm = Permutation::random(nl, rng);
            ZmMatrix mask_exp_perm = expand_matrix(mask, mod.ell).permuted_rows(perm.images());
            TernaryVector g = TernaryVector::random_balanced(nl, inst.w, rng);
            ZmVector share_a = syndrome(g.to_zm(mod), mask_exp_perm);
            ZmVector share_b = inst.s - share_a;
            slots.set(Slot::ShareA, encode_vector(share_a), rng);
            slots.set(Slot::ShareB, encode_vector(share_b), rng);
            slots.set(Slot::MaskExpPerm, encode_matrix(mask_exp_perm), rng);
            slots.set(Slot::TernaryPerm, encode_ternary(g), rng);
            slots.set(Slot::Mask, encode_matrix(mask), rng);
            slots.set(Slot::Perm, encode_permutation(perm), rng);
            dummy_matrix(Slot::Complement, n);
            dummy_matrix(Slot::CompExpPerm, nl);
            break;
        }
        case ChallengeTag::C: {
            ZmMatrix complement = ZmMatrix::random(mod, n, cols, rng);
            Permutation perm = Permutation::random(nl, rng);
            ZmMatrix comp_exp_perm = expand_matrix(complement, mod.ell).permuted_rows(perm.images());
            TernaryVector g = TernaryVector::random_balanced(nl, inst.w, rng);
            ZmVector share_b = syndrome(g.to_zm(mod), comp_exp_perm);
            ZmVector share_a = inst.s - share_b;
            slots.set(Slot::ShareA, encode_vector(share_a), rng);
            slots.set(Slot::ShareB, encode_vector(share_b), rng);
            slots.set(Slot::CompExpPerm, encode_matrix(comp_exp_perm), rng);
            slots.set(Slot::TernaryPerm, encode_ternary(g), rng);
            slots.set(Slot::Complement, encode_matrix(complement), rng);
            slots.set(Slot::Perm, encode_permutation(perm), rng);
            dummy_matrix(Slot::Mask, n);
            dummy_matrix(Slot::MaskExpPerm, nl);
            break;
        }
    }

    SimulatedView view;
    view.challenge = ch;
    view.msg = slots.commit_all();
    view.response = slots.response_for(ch);
    return view;
}

std::array<ChallengeTag, 2> covered(CheatPair p) {
    switch (p) {
        case CheatPair::AB: return {ChallengeTag::A, ChallengeTag::B};
        case CheatPair::AC: return {ChallengeTag::A, ChallengeTag::C};
        case CheatPair::BC: return {ChallengeTag::B, ChallengeTag::C};
    }
    throw std::invalid_argument("unknown strategy");
}

ChallengeTag uncovered(CheatPair p) {
    switch (p) {
        case CheatPair::AB: return ChallengeTag::C;
        case CheatPair::AC: return ChallengeTag::B;
        case CheatPair::BC: return ChallengeTag::A;
    }
    throw std::invalid_argument("unknown strategy");
}

const char* cheat_name(CheatPair p) {
    switch (p) {
        case CheatPair::AB: return "AB";
        case CheatPair::AC: return "AC";
        case CheatPair::BC: return "BC";
    }
    return "?";
}

Response CheatingProver::respond(ChallengeTag ch) const {
    Response r;
    for (Slot slot : slots_for(ch)) r.openings.emplace_back(slot, openings_[slot_index(slot)]);
    return r;
}

CheatingProver cheating_prover_round(const SdInstance& inst, CheatPair strat, Rng& rng) {
    if (inst.variant != Variant::Balanced) {
        throw std::invalid_argument("adversary runs on Balanced instances");
    }
    const Modulus& mod = inst.modulus;
    const size_t n = inst.n;
    const size_t cols = inst.redundancy();
    const size_t nl = n * size_t(mod.ell);

    SlotObjects slots;

    if (strat == CheatPair::AB || strat == CheatPair::AC) {
        ZmMatrix mask = ZmMatrix::random(mod, n, cols, rng);
        ZmMatrix complement = inst.H - mask;
        Permutation perm = Permutation::random(nl, rng);
        ZmMatrix mask_exp_perm = expand_matrix(mask, mod.ell).permuted_rows(perm.images());
        ZmMatrix comp_exp_perm = expand_matrix(complement, mod.ell).permuted_rows(perm.images());
        ZmMatrix expanded_h = expand_matrix(inst.H, mod.ell).permuted_rows(perm.images());

        // A fabricated ternary vector that is NOT a solution: if a draw ever
        // satisfied the expanded syndrome the adversary would have found a
        // witness, which contradicts the premise of the strategy.
        TernaryVector g;
        bool found = false;
        for (int attempt = 0; attempt < 10000; ++attempt) {
            g = TernaryVector::random_balanced(nl, inst.w, rng);
            if (syndrome(g.to_zm(mod), expanded_h) != inst.s) {
                found = true;
                break;
            }
        }
        if (!found) throw std::runtime_error("instance too degenerate to cheat on");

        ZmVector share_a, share_b;
        if (strat == CheatPair::AB) {
            share_a = syndrome(g.to_zm(mod), mask_exp_perm);
            share_b = inst.s - share_a;
        } else {
            share_b = syndrome(g.to_zm(mod), comp_exp_perm);
            share_a = inst.s - share_b;
        }

        slots.set(Slot::Mask, encode_matrix(mask), rng);
        slots.set(Slot::Complement, encode_matrix(complement), rng);
        slots.set(Slot::ShareA, encode_vector(share_a), rng);
        slots.set(Slot::ShareB, encode_vector(share_b), rng);
        slots.set(Slot::Perm, encode_permutation(perm), rng);
        slots.set(Slot::MaskExpPerm, encode_matrix(mask_exp_perm), rng);
        slots.set(Slot::CompExpPerm, encode_matrix(comp_exp_perm), rng);
        slots.set(Slot::TernaryPerm, encode_ternary(g), rng);
    } else {
        if (inst.w < 2) throw std::invalid_argument("BC strategy needs w >= 2");
        TernaryVector g = TernaryVector::random_balanced(nl, inst.w, rng);

        // Neither fake expanded matrix has the repeated-row structure; only
        // challenge A would notice, and this round never answers A honestly.
        ZmMatrix fake_mask_exp = ZmMatrix::random(mod, nl, cols, rng);
        ZmVector share_a = syndrome(g.to_zm(mod), fake_mask_exp);
        ZmVector share_b = inst.s - share_a;

        ZmMatrix fake_comp_exp = ZmMatrix::random(mod, nl, cols, rng);
        size_t steer = 0;
        while (g[steer] == 0) ++steer;
        ZmVector diff = share_b - syndrome(g.to_zm(mod), fake_comp_exp);
        {
            std::vector<int16_t> entries = fake_comp_exp.entries();
            for (size_t j = 0; j < cols; ++j) {
                entries[steer * cols + j] = center_mod(
                    int64_t(entries[steer * cols + j]) + int64_t(g[steer]) * diff[j], mod);
            }
            fake_comp_exp = ZmMatrix::from_canonical(mod, nl, cols, std::move(entries));
        }

        // Commitments for the A-slots are deliberately inconsistent: the
        // mask pair does not sum to H, so check a1 fires on challenge A.
        ZmMatrix mask = ZmMatrix::random(mod, n, cols, rng);
        ZmMatrix complement = inst.H - mask;
        {
            std::vector<int16_t> entries = complement.entries();
            entries[0] = center_mod(int64_t(entries[0]) + 1, mod);
            complement = ZmMatrix::from_canonical(mod, n, cols, std::move(entries));
        }

        slots.set(Slot::Mask, encode_matrix(mask), rng);
        slots.set(Slot::Complement, encode_matrix(complement), rng);
        slots.set(Slot::ShareA, encode_vector(share_a), rng);
        slots.set(Slot::ShareB, encode_vector(share_b), rng);
        slots.set(Slot::Perm, encode_permutation(Permutation::random(nl, rng)), rng);
        slots.set(Slot::MaskExpPerm, encode_matrix(fake_mask_exp), rng);
        slots.set(Slot::CompExpPerm, encode_matrix(fake_comp_exp), rng);
        slots.set(Slot::TernaryPerm, encode_ternary(g), rng);
    }

    CheatingProver prover;
    prover.openings_ = std::move(slots.openings);
    for (size_t i = 0; i < prover.openings_.size(); ++i) {
        prover.msg_.digests[i] = commit(prover.openings_[i]);
    }
    return prover;
}

namespace {

// One 2xK homogeneity table. Columns whose pooled expectation under the
// pooled proportions would fall below 5 are merged greedily left to right.
struct FeatureTable {
    std::vector<int64_t> x, y;

    void init(size_t cells) {
        x.assign(cells, 0);
        y.assign(cells, 0);
    }

    void add_chi2(double& stat, int64_t& df) const {
        double nx = 0, ny = 0;
        for (int64_t v : x) nx += double(v);
        for (int64_t v : y) ny += double(v);
        double total = nx + ny;
        if (total == 0 || nx == 0 || ny == 0) return;
        double min_share = std::min(nx, ny) / total;

        std::vector<std::pair<double, double>> merged;
        double ax = 0, ay = 0;
        for (size_t j = 0; j < x.size(); ++j) {
            ax += double(x[j]);
            ay += double(y[j]);
            if ((ax + ay) * min_share >= 5.0) {
                merged.emplace_back(ax, ay);
                ax = ay = 0;
            }
        }
        if (ax + ay > 0) {
            if (merged.empty()) {
                merged.emplace_back(ax, ay);
            } else {
                merged.back().first += ax;
                merged.back().second += ay;
            }
        }
        if (merged.size() < 2) return;
        for (const auto& [cx, cy] : merged) {
            double t = cx + cy;
            double ex = t * nx / total;
            double ey = t * ny / total;
            stat += (cx - ex) * (cx - ex) / ex + (cy - ey) * (cy - ey) / ey;
        }
        df += int64_t(merged.size()) - 1;
    }
};

const Opening* find_slot(const Response& r, Slot slot) {
    for (const auto& [s, o] : r.openings) {
        if (s == slot) return &o;
    }
    return nullptr;
}

}  // namespace

DistributionReport transcript_distribution_test(const SdInstance& inst, ChallengeTag ch,
                                                const std::vector<Response>& xs,
                                                const std::vector<Response>& ys) {
    if (xs.size() < 100 || ys.size() < 100) {
        throw std::invalid_argument("insufficient samples for distribution test");
    }
    const Modulus& mod = inst.modulus;
    const size_t nl = inst.n * size_t(mod.ell);
    const size_t m_cells = size_t(mod.m);

    FeatureTable first_pos_plus, first_pos_minus, share_entry, perm_first, mask_entry;
    first_pos_plus.init(nl + 1);
    first_pos_minus.init(nl + 1);
    share_entry.init(m_cells);
    perm_first.init(nl);
    mask_entry.init(m_cells);

    auto rep_cell = [&](int32_t rep) { return size_t(rep - mod.min_rep()); };

    auto ingest = [&](const Response& r, bool into_x) {
        auto bump = [&](FeatureTable& t, size_t cell) { (into_x ? t.x : t.y)[cell] += 1; };
        if (ch == ChallengeTag::A) {
            const Opening* perm_op = find_slot(r, Slot::Perm);
            const Opening* mask_op = find_slot(r, Slot::Mask);
            if (!perm_op || !mask_op) throw std::invalid_argument("response lacks A-slots");
            auto perm = decode_permutation(perm_op->payload);
            auto mask = decode_matrix(mask_op->payload, mod);
            if (!perm || !mask) throw std::invalid_argument("undecodable A-slots");
            bump(perm_first, perm->images()[0] - 1);
            bump(mask_entry, rep_cell(mask->at(0, 0)));
            return;
        }
        Slot share_slot = ch == ChallengeTag::B ? Slot::ShareA : Slot::ShareB;
        const Opening* tern_op = find_slot(r, Slot::TernaryPerm);
        const Opening* share_op = find_slot(r, share_slot);
        if (!tern_op || !share_op) throw std::invalid_argument("response lacks B/C-slots");
        auto tern = decode_ternary(tern_op->payload);
        auto share = decode_vector(share_op->payload, mod);
        if (!tern || !share) throw std::invalid_argument("undecodable B/C-slots");
        size_t plus = nl, minus = nl;
        for (size_t i = 0; i < tern->size(); ++i) {
            if ((*tern)[i] == 1 && plus == nl) plus = i;
            if ((*tern)[i] == -1 && minus == nl) minus = i;
            if (plus != nl && minus != nl) break;
        }
        bump(first_pos_plus, plus);
        bump(first_pos_minus, minus);
        if (share->size() > 0) bump(share_entry, rep_cell((*share)[0]));
    };

    for (const Response& r : xs) ingest(r, true);
    for (const Response& r : ys) ingest(r, false);

    DistributionReport report;
    report.n_x = xs.size();
    report.n_y = ys.size();
    for (const FeatureTable* t :
         {&first_pos_plus, &first_pos_minus, &share_entry, &perm_first, &mask_entry}) {
        t->add_chi2(report.statistic, report.degrees);
    }
    if (report.degrees > 0) {
        boost::math::chi_squared dist{double(report.degrees)};
        report.p_value = boost::math::cdf(boost::math::complement(dist, report.statistic));
    }
    return report;
}

std::string DistributionReport::to_json() const {
    nlohmann::json j;
    j["statistic"] = statistic;
    j["degrees"] = degrees;
    j["p_value"] = p_value;
    j["n_x"] = n_x;
    j["n_y"] = n_y;
    return j.dump();
}

ExtractorOutcome extract_from_rewind(const SdInstance& inst, const CommitMessage& cm,
                                     const Response& resp_a, const Response& resp_b,
                                     const Response& resp_c) {
    ExtractorOutcome out;
    Verdict va = verifier_check(inst, cm, ChallengeTag::A, resp_a);
    Verdict vb = verifier_check(inst, cm, ChallengeTag::B, resp_b);
    Verdict vc = verifier_check(inst, cm, ChallengeTag::C, resp_c);
    if (!va.accept || !vb.accept || !vc.accept) {
        out.detail = std::string("not all challenges accepted: a=") + check_name(va.failed) +
                     " b=" + check_name(vb.failed) + " c=" + check_name(vc.failed);
        return out;
    }
    out.all_accepted = true;

    const Opening* tern_b = find_slot(resp_b, Slot::TernaryPerm);
    const Opening* tern_c = find_slot(resp_c, Slot::TernaryPerm);
    const Opening* perm_op = find_slot(resp_a, Slot::Perm);
    if (tern_b->payload != tern_c->payload) {
        out.binding_break = true;
        out.detail = "two verified openings of the ternary slot disagree";
        return out;
    }

    auto perm = decode_permutation(perm_op->payload);
    auto tern = decode_ternary(tern_b->payload);
    std::vector<int8_t> f(tern->size(), 0);
    const auto& images = perm->images();
    for (size_t i = 0; i < tern->size(); ++i) f[images[i] - 1] = (*tern)[i];
    ZmVector e = accumulate(TernaryVector(std::move(f)), inst.modulus);
    if (check_witness(inst, e)) {
        out.witness = std::move(e);
    } else {
        out.detail = "accumulated vector fails check_witness";
    }
    return out;
}

}  // namespace leezk
