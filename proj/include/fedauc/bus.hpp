#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fedauc {

struct TranscriptEntry {
    int seq = 0;
    std::string sender;
    std::string receiver;
    std::string kind;
    std::size_t bytes = 0;
    int ciphertexts = 0;
    std::string note;
};

struct RoleTraffic {
    std::size_t bytes_sent = 0;
    std::size_t bytes_received = 0;
    int ciphertexts_sent = 0;
    int ciphertexts_received = 0;
};

/// In-process message bus. Every protocol boundary crossing goes through
/// `transfer` with already-serialized bytes, so byte accounting reflects the
/// actual wire format and a networked transport could be dropped in.
class Bus {
public:
    /// Logs the message and hands the payload to the receiver side.
    std::vector<std::uint8_t> transfer(const std::string& sender, const std::string& receiver,
                                       const std::string& kind, std::vector<std::uint8_t> payload,
                                       int ciphertexts);

    /// Transcript-only entry (e.g. setup notes with no accounted payload).
    void note(const std::string& sender, const std::string& receiver, const std::string& kind,
              const std::string& text);

    const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
    const std::map<std::string, RoleTraffic>& traffic() const { return traffic_; }

    std::size_t total_bytes() const;

private:
    int seq_ = 0;
    std::vector<TranscriptEntry> transcript_;
    std::map<std::string, RoleTraffic> traffic_;
};

/// Fixed-size wire header preceding every protocol message's ciphertext blobs.
/// Constant across message kinds so byte counts depend only on the ciphertext
/// payload, not on naming.
inline constexpr std::size_t kMessageHeaderBytes = 16;

/// Per-phase wall-clock totals in milliseconds (monotonic clock). Malicious
/// runs accumulate both executions into the same phases.
struct PhaseTimings {
    double client_prep_ms = 0;
    double aggregate_ms = 0;
    double blind_ms = 0;
    double finalize_ms = 0;
};

}  // namespace fedauc
