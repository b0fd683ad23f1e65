#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace seap {

// One simulation event. Field order is fixed so the NDJSON export is
// byte-stable for replay comparison.
struct TraceRecord {
    std::uint64_t seq = 0;
    std::int64_t t_ms = 0;
    std::string kind;                  // send | deliver | drop | corrupt-start | ...
    std::string actor;                 // emitting party
    std::string peer;                  // counterparty, if any
    std::optional<std::int64_t> gs;    // ground station involved
    std::optional<bool> channel_corrupted;
    std::optional<std::uint64_t> bytes;
    std::string detail;                // message kind, drop reason, free text

    std::string to_json() const;
};

class EventTrace {
public:
    TraceRecord& add(std::int64_t t_ms, std::string kind, std::string actor) {
        TraceRecord rec;
        rec.seq = records_.size();
        rec.t_ms = t_ms;
        rec.kind = std::move(kind);
        rec.actor = std::move(actor);
        records_.push_back(std::move(rec));
        return records_.back();
    }

    const std::vector<TraceRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    // Newline-delimited JSON; identical configs and seeds produce identical
    // bytes.
    std::string to_ndjson() const;

private:
    std::vector<TraceRecord> records_;
};

// Post-run discipline check over a trace: corruption intervals at least
// window_ms long, never more than channel_bound concurrent.
struct TraceViolation {
    std::uint64_t seq = 0;
    std::string what;
};

std::vector<TraceViolation> validate_channel_discipline(const EventTrace& trace,
                                                        std::int64_t window_ms, int channel_bound);

} // namespace seap
