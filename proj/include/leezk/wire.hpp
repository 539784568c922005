#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leezk/problems.hpp"
#include "leezk/protocol.hpp"
#include "leezk/rng.hpp"

namespace leezk {

// Framed byte protocol between a prover and a verifier process over any
// reliable ordered byte stream (TCP in practice).
//
// Frame layout: version(1) | msg_type(1) | length(4 LE) | body.
// Session flow: the verifier connects and sends SessionParams, the prover
// answers with its own SessionParams (both must agree), then each round is
// CommitMessage -> Challenge -> Response; after the last round the verifier
// sends a Verdict frame. The witness never crosses the wire.

constexpr uint8_t kWireVersion = 1;
constexpr size_t kMaxFrameBody = 1u << 26;  // 64 MiB cap; larger claims are rejected unread

enum class MsgType : uint8_t {
    CommitMsg = 0,
    Challenge = 1,
    Response = 2,
    Verdict = 3,
    SessionParams = 4,
};

struct Frame {
    uint8_t version = kWireVersion;
    MsgType type = MsgType::CommitMsg;
    std::vector<uint8_t> body;
    friend bool operator==(const Frame&, const Frame&) = default;
};

std::vector<uint8_t> encode_frame(const Frame& f);
// Structural decode of one frame from a byte buffer; *consumed reports how
// many bytes the frame used. Oversized length fields are rejected before
// any allocation.
std::optional<Frame> decode_frame(std::span<const uint8_t> bytes, size_t* consumed = nullptr,
                                  std::string* err = nullptr);

// Reliable ordered byte stream abstraction.
class ByteStream {
public:
    virtual ~ByteStream() = default;
    virtual bool read_exact(uint8_t* buf, size_t n) = 0;
    virtual bool write_all(const uint8_t* buf, size_t n) = 0;
};

std::optional<Frame> read_frame(ByteStream& s, std::string* err = nullptr);
bool write_frame(ByteStream& s, MsgType type, std::span<const uint8_t> body);

struct SessionParams {
    uint8_t protocol_version = kWireVersion;
    uint32_t rounds = 1;
    std::array<uint8_t, 32> instance_hash{};
    friend bool operator==(const SessionParams&, const SessionParams&) = default;
};

std::vector<uint8_t> encode_session_params(const SessionParams& p);
std::optional<SessionParams> decode_session_params(std::span<const uint8_t> body,
                                                   std::string* err = nullptr);

// SHA-256 over the canonical instance encoding; both parties must agree on
// it before round 1.
std::array<uint8_t, 32> instance_hash(const SdInstance& inst);

struct WireVerdict {
    bool accepted = false;
    std::vector<std::pair<bool, Check>> rounds;
};

std::vector<uint8_t> encode_verdict(const WireVerdict& v);
std::optional<WireVerdict> decode_verdict(std::span<const uint8_t> body,
                                          std::string* err = nullptr);

// Exit codes shared by the session drivers and the CLI.
constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitProtocol = 3;

struct SessionOutcome {
    int exit_code = kExitProtocol;
    bool accepted = false;
    uint64_t bytes_sent = 0;
    uint64_t bytes_received = 0;
    WireVerdict verdict;
    std::string error;
};

// Serves one proving session on an established stream.
SessionOutcome prover_serve(ByteStream& stream, const SdInstance& inst, const ZmVector& witness,
                            uint32_t rounds, Rng& rng);
// Drives one verifying session on an established stream.
SessionOutcome verifier_drive(ByteStream& stream, const SdInstance& inst, uint32_t rounds,
                              Rng& rng);

// In-memory duplex stream pair for tests and self-play.
struct StreamPair;
class MemoryStream : public ByteStream {
public:
    static std::pair<std::unique_ptr<MemoryStream>, std::unique_ptr<MemoryStream>> make_pair();
    bool read_exact(uint8_t* buf, size_t n) override;
    bool write_all(const uint8_t* buf, size_t n) override;
    ~MemoryStream() override;

private:
    MemoryStream() = default;
    std::shared_ptr<StreamPair> shared_;
    bool first_ = false;
};

// Minimal RAII TCP wrappers (IPv4).
class TcpStream : public ByteStream {
public:
    explicit TcpStream(int fd) : fd_(fd) {}
    TcpStream(TcpStream&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    ~TcpStream() override;
    bool read_exact(uint8_t* buf, size_t n) override;
    bool write_all(const uint8_t* buf, size_t n) override;

private:
    int fd_ = -1;
};

// "host:port" with a numeric IPv4 host.
std::optional<TcpStream> tcp_connect(const std::string& address, std::string* err = nullptr);

class TcpListener {
public:
    // Binds and listens; with port 0 the chosen port is reported by port().
    static std::optional<TcpListener> bind(const std::string& address,
                                           std::string* err = nullptr);
    TcpListener(TcpListener&& other) noexcept : fd_(other.fd_), port_(other.port_) {
        other.fd_ = -1;
    }
    ~TcpListener();
    std::optional<TcpStream> accept_one(std::string* err = nullptr);
    uint16_t port() const { return port_; }

private:
    TcpListener(int fd, uint16_t port) : fd_(fd), port_(port) {}
    int fd_ = -1;
    uint16_t port_ = 0;
};

// A transcript file is the concatenated frames of one session in exchange
// order (SessionParams, then per round CommitMessage/Challenge/Response,
// then the Verdict), with a JSON summary sidecar at <path>.json.
struct TranscriptRound {
    CommitMessage commit_msg;
    ChallengeTag challenge = ChallengeTag::A;
    Response response;
};

struct Transcript {
    SessionParams params;
    std::vector<TranscriptRound> rounds;
    WireVerdict verdict;
};

// Runs a self-played session (the prover draws the challenges from its own
// verifier stream) and writes the transcript plus sidecar.
SessionOutcome record_transcript(const std::string& path, const SdInstance& inst,
                                 const ZmVector& witness, uint32_t rounds, Rng& prover_rng,
                                 Rng& verifier_rng);
// Re-verifies every recorded round; accepts iff all checks pass.
SessionOutcome replay_transcript(const std::string& path, const SdInstance& inst);

std::optional<Transcript> parse_transcript(std::span<const uint8_t> bytes,
                                           std::string* err = nullptr);

}  // namespace leezk
