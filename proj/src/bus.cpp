#include "fedauc/bus.hpp"

namespace fedauc {

std::vector<std::uint8_t> Bus::transfer(const std::string& sender, const std::string& receiver,
                                        const std::string& kind,
                                        std::vector<std::uint8_t> payload, int ciphertexts) {
    TranscriptEntry entry;
    entry.seq = seq_++;
    entry.sender = sender;
    entry.receiver = receiver;
    entry.kind = kind;
    entry.bytes = payload.size();
    entry.ciphertexts = ciphertexts;
    transcript_.push_back(entry);

    auto& out = traffic_[sender];
    out.bytes_sent += payload.size();
    out.ciphertexts_sent += ciphertexts;
    auto& in = traffic_[receiver];
    in.bytes_received += payload.size();
    in.ciphertexts_received += ciphertexts;
    return payload;
}

void Bus::note(const std::string& sender, const std::string& receiver, const std::string& kind,
               const std::string& text) {
    TranscriptEntry entry;
    entry.seq = seq_++;
    entry.sender = sender;
    entry.receiver = receiver;
    entry.kind = kind;
    entry.note = text;
    transcript_.push_back(entry);
}

std::size_t Bus::total_bytes() const {
    std::size_t total = 0;
    for (const auto& entry : transcript_) total += entry.bytes;
    return total;
}

}  // namespace fedauc
