#include "leezk/wire.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "json.hpp"
#include "leezk/bytes.hpp"
#include "leezk/commit.hpp"

namespace leezk {

std::vector<uint8_t> encode_frame(const Frame& f) {
    std::vector<uint8_t> out;
    out.reserve(6 + f.body.size());
    put_u8(out, f.version);
    put_u8(out, static_cast<uint8_t>(f.type));
    put_u32(out, static_cast<uint32_t>(f.body.size()));
    put_bytes(out, f.body);
    return out;
}

std::optional<Frame> decode_frame(std::span<const uint8_t> bytes, size_t* consumed,
                                  std::string* err) {
    ByteReader r(bytes);
    auto version = r.u8();
    auto type = r.u8();
    auto len = r.u32();
    if (!version || !type || !len) {
        if (err) *err = "truncated frame header";
        return std::nullopt;
    }
    if (*version != kWireVersion) {
        if (err) *err = "unsupported frame version";
        return std::nullopt;
    }
    if (*type > static_cast<uint8_t>(MsgType::SessionParams)) {
        if (err) *err = "unknown message type";
        return std::nullopt;
    }
    if (*len > kMaxFrameBody) {
        if (err) *err = "frame length exceeds cap";
        return std::nullopt;
    }
    auto body = r.bytes(*len);
    if (!body) {
        if (err) *err = "truncated frame body";
        return std::nullopt;
    }
    Frame f;
    f.version = *version;
    f.type = static_cast<MsgType>(*type);
    f.body.assign(body->begin(), body->end());
    if (consumed) *consumed = 6 + size_t(*len);
    return f;
}

std::optional<Frame> read_frame(ByteStream& s, std::string* err) {
    uint8_t header[6];
    if (!s.read_exact(header, sizeof header)) {
        if (err) *err = "stream closed while reading frame header";
        return std::nullopt;
    }
    uint8_t version = header[0];
    uint8_t type = header[1];
    uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= uint32_t(header[2 + i]) << (8 * i);
    if (version != kWireVersion) {
        if (err) *err = "unsupported frame version";
        return std::nullopt;
    }
    if (type > static_cast<uint8_t>(MsgType::SessionParams)) {
        if (err) *err = "unknown message type";
        return std::nullopt;
    }
    if (len > kMaxFrameBody) {
        if (err) *err = "frame length exceeds cap";
        return std::nullopt;
    }
    Frame f;
    f.version = version;
    f.type = static_cast<MsgType>(type);
    f.body.resize(len);
    if (len > 0 && !s.read_exact(f.body.data(), len)) {
        if (err) *err = "stream closed while reading frame body";
        return std::nullopt;
    }
    return f;
}

bool write_frame(ByteStream& s, MsgType type, std::span<const uint8_t> body) {
    Frame f;
    f.type = type;
    f.body.assign(body.begin(), body.end());
    auto bytes = encode_frame(f);
    return s.write_all(bytes.data(), bytes.size());
}

std::vector<uint8_t> encode_session_params(const SessionParams& p) {
    std::vector<uint8_t> out;
    put_u8(out, p.protocol_version);
    put_u32(out, p.rounds);
    put_bytes(out, p.instance_hash);
    return out;
}

std::optional<SessionParams> decode_session_params(std::span<const uint8_t> body,
                                                   std::string* err) {
    if (body.size() != 1 + 4 + 32) {
        if (err) *err = "bad session params length";
        return std::nullopt;
    }
    ByteReader r(body);
    SessionParams p;
    p.protocol_version = *r.u8();
    p.rounds = *r.u32();
    auto hash = r.bytes(32);
    std::copy(hash->begin(), hash->end(), p.instance_hash.begin());
    return p;
}

std::array<uint8_t, 32> instance_hash(const SdInstance& inst) {
    std::vector<uint8_t> buf;
    put_u8(buf, static_cast<uint8_t>(inst.variant));
    put_u32(buf, static_cast<uint32_t>(inst.modulus.m));
    put_u64(buf, static_cast<uint64_t>(inst.w));
    put_u32(buf, static_cast<uint32_t>(inst.n));
    put_u32(buf, static_cast<uint32_t>(inst.k));
    put_bytes(buf, encode_matrix(inst.H));
    put_bytes(buf, encode_vector(inst.s));
    return sha256(buf);
}

std::vector<uint8_t> encode_verdict(const WireVerdict& v) {
    std::vector<uint8_t> out;
    put_u8(out, v.accepted ? 1 : 0);
    put_u32(out, static_cast<uint32_t>(v.rounds.size()));
    for (const auto& [accept, check] : v.rounds) {
        put_u8(out, accept ? 1 : 0);
        put_u8(out, static_cast<uint8_t>(check));
    }
    return out;
}

std::optional<WireVerdict> decode_verdict(std::span<const uint8_t> body, std::string* err) {
    ByteReader r(body);
    auto accepted = r.u8();
    auto count = r.u32();
    if (!accepted || !count || *accepted > 1 || r.remaining() != 2 * size_t(*count)) {
        if (err) *err = "bad verdict body";
        return std::nullopt;
    }
    WireVerdict v;
    v.accepted = *accepted == 1;
    for (uint32_t i = 0; i < *count; ++i) {
        uint8_t a = *r.u8();
        uint8_t c = *r.u8();
        if (a > 1 || c > static_cast<uint8_t>(Check::SlotSet)) {
            if (err) *err = "bad verdict entry";
            return std::nullopt;
        }
        v.rounds.emplace_back(a == 1, static_cast<Check>(c));
    }
    return v;
}

namespace {

SessionOutcome protocol_failure(std::string why) {
    SessionOutcome o;
    o.exit_code = kExitProtocol;
    o.error = std::move(why);
    return o;
}

struct CountingStream : ByteStream {
    ByteStream& inner;
    uint64_t sent = 0;
    uint64_t received = 0;
    explicit CountingStream(ByteStream& s) : inner(s) {}
    bool read_exact(uint8_t* buf, size_t n) override {
        if (!inner.read_exact(buf, n)) return false;
        received += n;
        return true;
    }
    bool write_all(const uint8_t* buf, size_t n) override {
        if (!inner.write_all(buf, n)) return false;
        sent += n;
        return true;
    }
};

std::optional<Frame> expect_frame(ByteStream& s, MsgType type, std::string* err) {
    auto f = read_frame(s, err);
    if (!f) return std::nullopt;
    if (f->type != type) {
        if (err) *err = "unexpected message type";
        return std::nullopt;
    }
    return f;
}

}  // namespace

SessionOutcome prover_serve(ByteStream& raw, const SdInstance& inst, const ZmVector& witness,
                            uint32_t rounds, Rng& rng) {
    CountingStream stream(raw);
    std::string err;

    auto params_frame = expect_frame(stream, MsgType::SessionParams, &err);
    if (!params_frame) return protocol_failure("session params: " + err);
    auto peer = decode_session_params(params_frame->body, &err);
    if (!peer) return protocol_failure("session params: " + err);

    SessionParams own;
    own.rounds = rounds;
    own.instance_hash = instance_hash(inst);
    if (*peer != own) {
        // Announce our view before aborting so the mismatch is diagnosable.
        write_frame(stream, MsgType::SessionParams, encode_session_params(own));
        return protocol_failure("session parameter mismatch; aborting before round 1");
    }
    if (!write_frame(stream, MsgType::SessionParams, encode_session_params(own))) {
        return protocol_failure("failed to send session params");
    }

    for (uint32_t r = 0; r < rounds; ++r) {
        auto [state, cm] = prover_commit(inst, witness, rng);
        if (!write_frame(stream, MsgType::CommitMsg, encode_commit_message(cm))) {
            return protocol_failure("failed to send commit message");
        }
        auto ch_frame = expect_frame(stream, MsgType::Challenge, &err);
        if (!ch_frame) return protocol_failure("challenge: " + err);
        auto ch = decode_challenge(ch_frame->body, &err);
        if (!ch) return protocol_failure("challenge: " + err);
        Response resp = prover_respond(state, *ch);
        if (!write_frame(stream, MsgType::Response, encode_response(resp))) {
            return protocol_failure("failed to send response");
        }
    }

    auto verdict_frame = expect_frame(stream, MsgType::Verdict, &err);
    if (!verdict_frame) return protocol_failure("verdict: " + err);
    auto verdict = decode_verdict(verdict_frame->body, &err);
    if (!verdict) return protocol_failure("verdict: " + err);

    SessionOutcome out;
    out.accepted = verdict->accepted;
    out.exit_code = verdict->accepted ? kExitAccept : kExitReject;
    out.verdict = std::move(*verdict);
    out.bytes_sent = stream.sent;
    out.bytes_received = stream.received;
    return out;
}

SessionOutcome verifier_drive(ByteStream& raw, const SdInstance& inst, uint32_t rounds,
                              Rng& rng) {
    CountingStream stream(raw);
    std::string err;

    SessionParams own;
    own.rounds = rounds;
    own.instance_hash = instance_hash(inst);
    if (!write_frame(stream, MsgType::SessionParams, encode_session_params(own))) {
        return protocol_failure("failed to send session params");
    }
    auto ack_frame = expect_frame(stream, MsgType::SessionParams, &err);
    if (!ack_frame) return protocol_failure("session params ack: " + err);
    auto ack = decode_session_params(ack_frame->body, &err);
    if (!ack) return protocol_failure("session params ack: " + err);
    if (*ack != own) return protocol_failure("session parameter mismatch; aborting before round 1");

    WireVerdict verdict;
    verdict.accepted = true;
    for (uint32_t r = 0; r < rounds; ++r) {
        auto cm_frame = expect_frame(stream, MsgType::CommitMsg, &err);
        if (!cm_frame) return protocol_failure("commit message: " + err);
        auto cm = decode_commit_message(cm_frame->body, &err);
        if (!cm) return protocol_failure("commit message: " + err);

        ChallengeTag ch = verifier_challenge(rng);
        if (!write_frame(stream, MsgType::Challenge, encode_challenge(ch))) {
            return protocol_failure("failed to send challenge");
        }

        auto resp_frame = expect_frame(stream, MsgType::Response, &err);
        if (!resp_frame) return protocol_failure("response: " + err);
        auto resp = decode_response(resp_frame->body, &err);
        Verdict round_verdict;
        if (!resp) {
            round_verdict = {false, Check::SlotSet, "undecodable response: " + err};
        } else {
            round_verdict = verifier_check(inst, *cm, ch, *resp);
        }
        verdict.rounds.emplace_back(round_verdict.accept, round_verdict.failed);
        verdict.accepted = verdict.accepted && round_verdict.accept;
    }

    if (!write_frame(stream, MsgType::Verdict, encode_verdict(verdict))) {
        return protocol_failure("failed to send verdict");
    }

    SessionOutcome out;
    out.accepted = verdict.accepted;
    out.exit_code = verdict.accepted ? kExitAccept : kExitReject;
    out.verdict = std::move(verdict);
    out.bytes_sent = stream.sent;
    out.bytes_received = stream.received;
    return out;
}

// ---------------------------------------------------------------------------
// In-memory duplex stream

struct StreamPair {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<uint8_t> a_to_b;
    std::deque<uint8_t> b_to_a;
    bool closed = false;
};

std::pair<std::unique_ptr<MemoryStream>, std::unique_ptr<MemoryStream>> MemoryStream::make_pair() {
    auto shared = std::make_shared<StreamPair>();
    std::unique_ptr<MemoryStream> a(new MemoryStream());
    std::unique_ptr<MemoryStream> b(new MemoryStream());
    a->shared_ = shared;
    a->first_ = true;
    b->shared_ = shared;
    b->first_ = false;
    return {std::move(a), std::move(b)};
}

MemoryStream::~MemoryStream() {
    if (!shared_) return;
    std::lock_guard<std::mutex> lock(shared_->mu);
    shared_->closed = true;
    shared_->cv.notify_all();
}

bool MemoryStream::read_exact(uint8_t* buf, size_t n) {
    auto& q = first_ ? shared_->b_to_a : shared_->a_to_b;
    std::unique_lock<std::mutex> lock(shared_->mu);
    for (size_t i = 0; i < n; ++i) {
        shared_->cv.wait(lock, [&] { return !q.empty() || shared_->closed; });
        if (q.empty()) return false;
        buf[i] = q.front();
        q.pop_front();
    }
    return true;
}

bool MemoryStream::write_all(const uint8_t* buf, size_t n) {
    auto& q = first_ ? shared_->a_to_b : shared_->b_to_a;
    std::lock_guard<std::mutex> lock(shared_->mu);
    if (shared_->closed) return false;
    q.insert(q.end(), buf, buf + n);
    shared_->cv.notify_all();
    return true;
}

// ---------------------------------------------------------------------------
// TCP

TcpStream::~TcpStream() {
    if (fd_ >= 0) ::close(fd_);
}

bool TcpStream::read_exact(uint8_t* buf, size_t n) {
    size_t got = 0;
    while (got < n) {
        ssize_t r = ::recv(fd_, buf + got, n - got, 0);
        if (r == 0) return false;
        if (r < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        got += size_t(r);
    }
    return true;
}

bool TcpStream::write_all(const uint8_t* buf, size_t n) {
    size_t sent = 0;
    while (sent < n) {
        ssize_t r = ::send(fd_, buf + sent, n - sent, 0);
        if (r < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        sent += size_t(r);
    }
    return true;
}

namespace {

std::optional<sockaddr_in> parse_address(const std::string& address, std::string* err) {
    auto colon = address.rfind(':');
    if (colon == std::string::npos) {
        if (err) *err = "address must be host:port";
        return std::nullopt;
    }
    std::string host = address.substr(0, colon);
    std::string port_str = address.substr(colon + 1);
    int port;
    try {
        port = std::stoi(port_str);
    } catch (...) {
        if (err) *err = "invalid port";
        return std::nullopt;
    }
    if (port < 0 || port > 65535) {
        if (err) *err = "invalid port";
        return std::nullopt;
    }
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (host.empty()) host = "127.0.0.1";
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        if (err) *err = "invalid IPv4 host";
        return std::nullopt;
    }
    return addr;
}

}  // namespace

std::optional<TcpStream> tcp_connect(const std::string& address, std::string* err) {
    auto addr = parse_address(address, err);
    if (!addr) return std::nullopt;
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        if (err) *err = std::strerror(errno);
        return std::nullopt;
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&*addr), sizeof *addr) < 0) {
        if (err) *err = std::strerror(errno);
        ::close(fd);
        return std::nullopt;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return TcpStream(fd);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::optional<TcpListener> TcpListener::bind(const std::string& address, std::string* err) {
    auto addr = parse_address(address, err);
    if (!addr) return std::nullopt;
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        if (err) *err = std::strerror(errno);
        return std::nullopt;
    }
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&*addr), sizeof *addr) < 0 ||
        ::listen(fd, 4) < 0) {
        if (err) *err = std::strerror(errno);
        ::close(fd);
        return std::nullopt;
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    if (::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len) < 0) {
        if (err) *err = std::strerror(errno);
        ::close(fd);
        return std::nullopt;
    }
    return TcpListener(fd, ntohs(bound.sin_port));
}

std::optional<TcpStream> TcpListener::accept_one(std::string* err) {
    for (;;) {
        int fd = ::accept(fd_, nullptr, nullptr);
        if (fd >= 0) {
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return TcpStream(fd);
        }
        if (errno == EINTR) continue;
        if (err) *err = std::strerror(errno);
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Transcripts

namespace {

std::optional<std::vector<uint8_t>> read_file(const std::string& path, std::string* err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (err) *err = "cannot open " + path;
        return std::nullopt;
    }
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return bytes;
}

bool write_file(const std::string& path, std::span<const uint8_t> bytes, std::string* err) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        if (err) *err = "cannot write " + path;
        return false;
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    return bool(out);
}

void write_sidecar(const std::string& path, const Transcript& t, uint64_t total_bytes) {
    nlohmann::json j;
    j["rounds"] = t.params.rounds;
    j["accepted"] = t.verdict.accepted;
    j["total_bytes"] = total_bytes;
    nlohmann::json rounds = nlohmann::json::array();
    for (size_t i = 0; i < t.rounds.size(); ++i) {
        nlohmann::json r;
        r["challenge"] = challenge_name(t.rounds[i].challenge);
        if (i < t.verdict.rounds.size()) {
            r["accepted"] = t.verdict.rounds[i].first;
            r["check"] = check_name(t.verdict.rounds[i].second);
        }
        rounds.push_back(r);
    }
    j["per_round"] = rounds;
    std::ofstream out(path + ".json", std::ios::trunc);
    out << j.dump(2) << "\n";
}

}  // namespace

std::optional<Transcript> parse_transcript(std::span<const uint8_t> bytes, std::string* err) {
    size_t pos = 0;
    auto next = [&](MsgType want) -> std::optional<Frame> {
        size_t used = 0;
        auto f = decode_frame(bytes.subspan(pos), &used, err);
        if (!f) return std::nullopt;
        if (f->type != want) {
            if (err) *err = "unexpected frame order in transcript";
            return std::nullopt;
        }
        pos += used;
        return f;
    };

    Transcript t;
    auto params_frame = next(MsgType::SessionParams);
    if (!params_frame) return std::nullopt;
    auto params = decode_session_params(params_frame->body, err);
    if (!params) return std::nullopt;
    t.params = *params;

    for (uint32_t r = 0; r < t.params.rounds; ++r) {
        auto cm_frame = next(MsgType::CommitMsg);
        if (!cm_frame) return std::nullopt;
        auto cm = decode_commit_message(cm_frame->body, err);
        if (!cm) return std::nullopt;
        auto ch_frame = next(MsgType::Challenge);
        if (!ch_frame) return std::nullopt;
        auto ch = decode_challenge(ch_frame->body, err);
        if (!ch) return std::nullopt;
        auto resp_frame = next(MsgType::Response);
        if (!resp_frame) return std::nullopt;
        auto resp = decode_response(resp_frame->body, err);
        if (!resp) return std::nullopt;
        t.rounds.push_back({*cm, *ch, std::move(*resp)});
    }

    auto verdict_frame = next(MsgType::Verdict);
    if (!verdict_frame) return std::nullopt;
    auto verdict = decode_verdict(verdict_frame->body, err);
    if (!verdict) return std::nullopt;
    t.verdict = std::move(*verdict);
    if (pos != bytes.size()) {
        if (err) *err = "trailing bytes after transcript";
        return std::nullopt;
    }
    return t;
}

SessionOutcome record_transcript(const std::string& path, const SdInstance& inst,
                                 const ZmVector& witness, uint32_t rounds, Rng& prover_rng,
                                 Rng& verifier_rng) {
    std::vector<uint8_t> file;
    auto append = [&](MsgType type, std::vector<uint8_t> body) {
        Frame f;
        f.type = type;
        f.body = std::move(body);
        auto bytes = encode_frame(f);
        file.insert(file.end(), bytes.begin(), bytes.end());
    };

    SessionParams params;
    params.rounds = rounds;
    params.instance_hash = instance_hash(inst);
    append(MsgType::SessionParams, encode_session_params(params));

    Transcript t;
    t.params = params;
    t.verdict.accepted = true;
    for (uint32_t r = 0; r < rounds; ++r) {
        auto [state, cm] = prover_commit(inst, witness, prover_rng);
        ChallengeTag ch = verifier_challenge(verifier_rng);
        Response resp = prover_respond(state, ch);
        Verdict v = verifier_check(inst, cm, ch, resp);
        append(MsgType::CommitMsg, encode_commit_message(cm));
        append(MsgType::Challenge, encode_challenge(ch));
        append(MsgType::Response, encode_response(resp));
        t.verdict.rounds.emplace_back(v.accept, v.failed);
        t.verdict.accepted = t.verdict.accepted && v.accept;
        t.rounds.push_back({cm, ch, std::move(resp)});
    }
    append(MsgType::Verdict, encode_verdict(t.verdict));

    std::string err;
    if (!write_file(path, file, &err)) return protocol_failure(err);
    write_sidecar(path, t, file.size());

    SessionOutcome out;
    out.accepted = t.verdict.accepted;
    out.exit_code = out.accepted ? kExitAccept : kExitReject;
    out.verdict = t.verdict;
    out.bytes_sent = file.size();
    return out;
}

SessionOutcome replay_transcript(const std::string& path, const SdInstance& inst) {
    std::string err;
    auto bytes = read_file(path, &err);
    if (!bytes) return protocol_failure(err);
    auto t = parse_transcript(*bytes, &err);
    if (!t) return protocol_failure("transcript: " + err);

    SessionParams expect;
    expect.rounds = t->params.rounds;
    expect.instance_hash = instance_hash(inst);
    if (t->params != expect) {
        return protocol_failure("transcript was recorded for a different instance or version");
    }

    SessionOutcome out;
    out.accepted = true;
    for (const TranscriptRound& round : t->rounds) {
        Verdict v = verifier_check(inst, round.commit_msg, round.challenge, round.response);
        out.verdict.rounds.emplace_back(v.accept, v.failed);
        if (!v.accept && out.error.empty()) {
            out.error = std::string("round check failed: ") + check_name(v.failed) +
                        (v.detail.empty() ? "" : " (" + v.detail + ")");
        }
        out.accepted = out.accepted && v.accept;
    }
    out.verdict.accepted = out.accepted;
    out.exit_code = out.accepted ? kExitAccept : kExitReject;
    out.bytes_received = bytes->size();
    return out;
}

}  // namespace leezk
