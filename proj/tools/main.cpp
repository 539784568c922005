#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "leezk/analysis.hpp"
#include "leezk/problems.hpp"
#include "leezk/protocol.hpp"
#include "leezk/reductions.hpp"
#include "leezk/wire.hpp"

namespace {

using namespace leezk;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

uint64_t seed_or_random(std::optional<uint64_t> seed) {
    if (seed) return *seed;
    std::random_device rd;
    return (uint64_t(rd()) << 32) | rd();
}

ChallengeTag parse_challenge(const std::string& s) {
    if (s == "A" || s == "a" || s == "0") return ChallengeTag::A;
    if (s == "B" || s == "b" || s == "1") return ChallengeTag::B;
    if (s == "C" || s == "c" || s == "2") return ChallengeTag::C;
    throw std::runtime_error("challenge must be A, B or C");
}

void print_verdict(const SessionOutcome& out) {
    std::cout << (out.accepted ? "accept" : "reject") << "\n";
    for (size_t i = 0; i < out.verdict.rounds.size(); ++i) {
        const auto& [accept, check] = out.verdict.rounds[i];
        if (!accept) {
            std::cerr << "round " << i + 1 << ": rejected (check " << check_name(check) << ")\n";
        }
    }
    if (!out.error.empty()) std::cerr << out.error << "\n";
}

int cmd_gen(size_t n, size_t k, int32_t m, int64_t w, std::optional<uint64_t> seed,
            const std::string& out_path, const std::string& witness_path) {
    Rng rng(seed_or_random(seed));
    PlantedInstance planted = sample_instance(n, k, w, Modulus(m), rng);
    write_text_file(out_path, instance_to_json(planted.instance));
    write_text_file(witness_path, instance_to_json(planted.instance, &planted.witness));
    std::cerr << "wrote instance to " << out_path << " and witness to " << witness_path << "\n";
    return kExitAccept;
}

int cmd_reduce(const std::string& in_path, const std::string& mode, std::optional<int32_t> c,
               const std::string& out_path) {
    std::string text = read_text_file(in_path);
    SdInstance inst = instance_from_json(text);
    std::optional<ZmVector> witness;
    try {
        witness = witness_from_json(text, inst);
    } catch (const std::exception&) {
        witness.reset();
    }

    std::string output;
    if (mode == "balanced") {
        BalancedReduction red = to_balanced(inst, c);
        std::optional<ZmVector> lifted;
        if (witness) lifted = lift_witness(red, *witness);
        output = instance_to_json(red.target, lifted ? &*lifted : nullptr);
        std::cerr << "balanced reduction: n " << inst.n << " -> " << red.target.n << ", c = "
                  << red.c << "\n";
    } else if (mode == "ternary") {
        SdInstance target = to_ternary(inst);
        std::optional<ZmVector> expanded;
        if (witness) {
            TernaryVector f =
                pad_to_weight(expand_witness(*witness), inst.w, inst.modulus.ell);
            expanded = f.to_zm(inst.modulus);
        }
        output = instance_to_json(target, expanded ? &*expanded : nullptr);
        std::cerr << "ternary reformulation: rows " << inst.H.rows() << " -> "
                  << target.H.rows() << "\n";
    } else {
        throw std::runtime_error("mode must be balanced or ternary");
    }
    if (out_path.empty()) {
        std::cout << output;
    } else {
        write_text_file(out_path, output);
    }
    return kExitAccept;
}

int cmd_oracle(const std::string& in_path, uint64_t budget) {
    SdInstance inst = instance_from_json(read_text_file(in_path));
    BruteForceResult result = decide_bruteforce(inst, budget);
    switch (result.decision) {
        case Decision::Yes:
            std::cout << "yes\n" << instance_to_json(inst, &*result.witness);
            return kExitAccept;
        case Decision::No:
            std::cout << "no\n";
            return kExitReject;
        case Decision::BudgetExceeded:
            std::cerr << "search space exceeds budget " << budget << "\n";
            return kExitUsage;
    }
    return kExitUsage;
}

int cmd_prove(const std::string& instance_path, const std::string& witness_path, uint32_t rounds,
              const std::string& listen, const std::string& transcript_out,
              std::optional<uint64_t> seed) {
    SdInstance inst = instance_from_json(read_text_file(instance_path));
    ZmVector witness = witness_from_json(read_text_file(witness_path), inst);
    if (!check_witness(inst, witness)) throw std::runtime_error("witness does not check out");

    Rng root(seed_or_random(seed));
    if (!listen.empty()) {
        std::string err;
        auto listener = TcpListener::bind(listen, &err);
        if (!listener) {
            std::cerr << "listen failed: " << err << "\n";
            return kExitProtocol;
        }
        std::cerr << "listening on port " << listener->port() << "\n";
        auto stream = listener->accept_one(&err);
        if (!stream) {
            std::cerr << "accept failed: " << err << "\n";
            return kExitProtocol;
        }
        SessionOutcome out = prover_serve(*stream, inst, witness, rounds, root);
        print_verdict(out);
        return out.exit_code;
    }
    if (!transcript_out.empty()) {
        Rng prover_rng = root.split();
        Rng challenge_rng = root.split();
        SessionOutcome out =
            record_transcript(transcript_out, inst, witness, rounds, prover_rng, challenge_rng);
        print_verdict(out);
        return out.exit_code;
    }
    throw std::runtime_error("prove requires --listen or --transcript-out");
}

int cmd_verify(const std::string& instance_path, uint32_t rounds, const std::string& connect,
               const std::string& transcript_in, std::optional<uint64_t> seed) {
    SdInstance inst = instance_from_json(read_text_file(instance_path));
    if (!connect.empty()) {
        Rng rng(seed_or_random(seed));
        std::string err;
        auto stream = tcp_connect(connect, &err);
        if (!stream) {
            std::cerr << "connect failed: " << err << "\n";
            return kExitProtocol;
        }
        SessionOutcome out = verifier_drive(*stream, inst, rounds, rng);
        print_verdict(out);
        return out.exit_code;
    }
    if (!transcript_in.empty()) {
        SessionOutcome out = replay_transcript(transcript_in, inst);
        print_verdict(out);
        return out.exit_code;
    }
    throw std::runtime_error("verify requires --connect or --transcript-in");
}

int cmd_simulate(const std::string& instance_path, const std::string& challenge, size_t samples,
                 std::optional<uint64_t> seed) {
    SdInstance inst = instance_from_json(read_text_file(instance_path));
    ChallengeTag tag = parse_challenge(challenge);
    Rng rng(seed_or_random(seed));
    size_t accepts = 0;
    for (size_t i = 0; i < samples; ++i) {
        SimulatedView view = simulate_view(inst, tag, rng);
        Verdict v = verifier_check(inst, view.msg, view.challenge, view.response);
        accepts += v.accept ? 1 : 0;
    }
    nlohmann::json j;
    j["challenge"] = challenge_name(tag);
    j["samples"] = samples;
    j["accepts"] = accepts;
    j["accept_rate"] = samples == 0 ? 0.0 : double(accepts) / double(samples);
    std::cout << j.dump(2) << "\n";
    return accepts == samples ? kExitAccept : kExitReject;
}

int cmd_bench(size_t n, size_t k, int32_t m, bool measure, std::optional<uint64_t> seed) {
    double bits = comm_cost_bits(n, k, m);
    nlohmann::json j;
    j["n"] = n;
    j["k"] = k;
    j["m"] = m;
    j["formula_bits"] = bits;
    if (measure) {
        Modulus mod(m);
        int64_t w = int64_t(n) * (mod.ell - 1);
        if (w % 2 != 0) --w;
        Rng rng(seed_or_random(seed));
        PlantedInstance planted = sample_instance(n, k, w, mod, rng);
        auto [state, cm] = prover_commit(planted.instance, planted.witness, rng);
        size_t worst = 0;
        for (ChallengeTag tag : {ChallengeTag::A, ChallengeTag::B, ChallengeTag::C}) {
            Response resp = prover_respond_rewind(state, tag);
            worst = std::max(worst, encode_response(resp).size());
        }
        j["w"] = w;
        j["measured_max_response_bytes"] = worst;
        j["ratio_vs_formula"] = double(worst) / bits;
    }
    std::cout << j.dump(2) << "\n";
    return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prover/verifier toolkit for Lee-metric syndrome decoding"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a planted balanced instance");
    size_t gen_n = 0, gen_k = 0;
    int32_t gen_m = 0;
    int64_t gen_w = 0;
    std::optional<uint64_t> gen_seed;
    std::string gen_out, gen_witness_out;
    gen->add_option("--n", gen_n, "code length")->required();
    gen->add_option("--k", gen_k, "code dimension")->required();
    gen->add_option("--m", gen_m, "modulus")->required();
    gen->add_option("--w", gen_w, "weight bound (even)")->required();
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--out", gen_out, "instance file")->required();
    gen->add_option("--witness-out", gen_witness_out, "witness file")->required();

    // reduce
    auto* reduce = app.add_subcommand("reduce", "Reduce general->balanced or balanced->ternary");
    std::string red_in, red_mode, red_out;
    std::optional<int32_t> red_c;
    reduce->add_option("--in", red_in, "input instance file")->required();
    reduce->add_option("--mode", red_mode, "balanced|ternary")->required();
    reduce->add_option("--c", red_c, "multiplier with gcd(m,c)=1 (even m)");
    reduce->add_option("--out", red_out, "output instance file (default stdout)");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Brute-force decision at desk scale");
    std::string ora_in;
    uint64_t ora_budget = 1u << 24;
    oracle->add_option("--in", ora_in, "instance file")->required();
    oracle->add_option("--budget", ora_budget, "candidate budget");

    // prove
    auto* prove = app.add_subcommand("prove", "Run the prover");
    std::string prv_instance, prv_witness, prv_listen, prv_transcript;
    uint32_t prv_rounds = 16;
    std::optional<uint64_t> prv_seed;
    prove->add_option("--instance", prv_instance, "instance file")->required();
    prove->add_option("--witness", prv_witness, "witness file")->required();
    prove->add_option("--rounds", prv_rounds, "repetitions");
    prove->add_option("--listen", prv_listen, "host:port to serve one session on");
    prove->add_option("--transcript-out", prv_transcript, "record a self-played session");
    prove->add_option("--seed", prv_seed, "rng seed");

    // verify
    auto* verify = app.add_subcommand("verify", "Run the verifier");
    std::string ver_instance, ver_connect, ver_transcript;
    uint32_t ver_rounds = 16;
    std::optional<uint64_t> ver_seed;
    verify->add_option("--instance", ver_instance, "instance file")->required();
    verify->add_option("--rounds", ver_rounds, "repetitions");
    verify->add_option("--connect", ver_connect, "host:port of the prover");
    verify->add_option("--transcript-in", ver_transcript, "replay a recorded session");
    verify->add_option("--seed", ver_seed, "rng seed");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Sample and check simulator views");
    std::string sim_instance, sim_challenge = "B";
    size_t sim_samples = 1000;
    std::optional<uint64_t> sim_seed;
    simulate->add_option("--instance", sim_instance, "instance file")->required();
    simulate->add_option("--challenge", sim_challenge, "A|B|C");
    simulate->add_option("--samples", sim_samples, "number of views");
    simulate->add_option("--seed", sim_seed, "rng seed");

    // bench
    auto* bench = app.add_subcommand("bench", "Per-round communication cost");
    size_t ben_n = 0, ben_k = 0;
    int32_t ben_m = 0;
    bool ben_measure = false;
    std::optional<uint64_t> ben_seed;
    bench->add_option("--n", ben_n, "code length")->required();
    bench->add_option("--k", ben_k, "code dimension")->required();
    bench->add_option("--m", ben_m, "modulus")->required();
    bench->add_flag("--measure", ben_measure, "also measure serialized response bytes");
    bench->add_option("--seed", ben_seed, "rng seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return leezk::kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen(gen_n, gen_k, gen_m, gen_w, gen_seed, gen_out, gen_witness_out);
        }
        if (reduce->parsed()) return cmd_reduce(red_in, red_mode, red_c, red_out);
        if (oracle->parsed()) return cmd_oracle(ora_in, ora_budget);
        if (prove->parsed()) {
            return cmd_prove(prv_instance, prv_witness, prv_rounds, prv_listen, prv_transcript,
                             prv_seed);
        }
        if (verify->parsed()) {
            return cmd_verify(ver_instance, ver_rounds, ver_connect, ver_transcript, ver_seed);
        }
        if (simulate->parsed()) {
            return cmd_simulate(sim_instance, sim_challenge, sim_samples, sim_seed);
        }
        if (bench->parsed()) return cmd_bench(ben_n, ben_k, ben_m, ben_measure, ben_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return leezk::kExitUsage;
    }
    return leezk::kExitUsage;
}
