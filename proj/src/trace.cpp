#include "seap/trace.hpp"

#include <algorithm>

namespace seap {

namespace {

void append_json_string(std::string& out, const std::string& s) {
    out.push_back('"');
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(c);
                }
        }
    }
    out.push_back('"');
}

} // namespace

std::string TraceRecord::to_json() const {
    std::string out = "{\"seq\":" + std::to_string(seq) + ",\"t_ms\":" + std::to_string(t_ms);
    out += ",\"kind\":";
    append_json_string(out, kind);
    out += ",\"actor\":";
    append_json_string(out, actor);
    if (!peer.empty()) {
        out += ",\"peer\":";
        append_json_string(out, peer);
    }
    if (gs) out += ",\"gs\":" + std::to_string(*gs);
    if (channel_corrupted) {
        out += ",\"channel_corrupted\":";
        out += *channel_corrupted ? "true" : "false";
    }
    if (bytes) out += ",\"bytes\":" + std::to_string(*bytes);
    if (!detail.empty()) {
        out += ",\"detail\":";
        append_json_string(out, detail);
    }
    out.push_back('}');
    return out;
}

std::string EventTrace::to_ndjson() const {
    std::string out;
    for (const auto& rec : records_) {
        out += rec.to_json();
        out.push_back('\n');
    }
    return out;
}

std::vector<TraceViolation> validate_channel_discipline(const EventTrace& trace,
                                                        std::int64_t window_ms, int channel_bound) {
    std::vector<TraceViolation> violations;
    struct Interval {
        std::int64_t start;
        std::optional<std::int64_t> end;
        std::int64_t gs;
        std::uint64_t seq;
    };
    std::vector<Interval> intervals;
    std::int64_t horizon = 0;
    for (const auto& rec : trace.records()) {
        horizon = std::max(horizon, rec.t_ms);
        if (rec.kind == "corrupt-start" && rec.gs) {
            intervals.push_back({rec.t_ms, std::nullopt, *rec.gs, rec.seq});
        } else if (rec.kind == "corrupt-end" && rec.gs) {
            // Ends pair with the oldest still-open interval on that channel.
            for (auto& iv : intervals) {
                if (iv.gs == *rec.gs && !iv.end) {
                    iv.end = rec.t_ms;
                    break;
                }
            }
        }
    }
    for (const auto& iv : intervals) {
        const std::int64_t end = iv.end.value_or(horizon);
        if (iv.end && end - iv.start < window_ms) {
            violations.push_back({iv.seq, "corruption interval shorter than window"});
        }
        int concurrent = 0;
        for (const auto& other : intervals) {
            const std::int64_t oend = other.end.value_or(horizon + window_ms);
            if (other.start <= iv.start && iv.start < oend) ++concurrent;
        }
        if (concurrent > channel_bound) {
            violations.push_back({iv.seq, "more than channel bound corrupted concurrently"});
        }
    }
    return violations;
}

} // namespace seap
