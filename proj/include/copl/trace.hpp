#pragma once

#include <string>

namespace copl {

enum class TracePhase { Enter, Exit };
enum class TraceDir { In, Out, Get, Set };

// One border crossing: a method or accessor frame entering or leaving a
// concept on the dispatch chain.
struct TraceEvent {
    TracePhase phase;
    TraceDir dir;
    std::string conceptName;
    std::string member;

    bool operator==(const TraceEvent&) const = default;
};

inline std::string format_trace_event(const TraceEvent& e) {
    std::string s = e.phase == TracePhase::Enter ? "enter " : "exit ";
    switch (e.dir) {
        case TraceDir::In: s += "in "; break;
        case TraceDir::Out: s += "out "; break;
        case TraceDir::Get: s += "get "; break;
        case TraceDir::Set: s += "set "; break;
    }
    s += e.conceptName;
    s += '.';
    s += e.member;
    return s;
}

}  // namespace copl
