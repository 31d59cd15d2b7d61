#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "sdnrm/error.hpp"
#include "sdnrm/units.hpp"

namespace sdnrm {

// Min-heap on (at, seq). seq is assigned at schedule time, so events that
// share a timestamp run in the order they were scheduled.
template <class Payload>
class EventQueue {
public:
    struct Entry {
        Time at;
        std::uint64_t seq;
        Payload payload;
    };

    Time now() const { return now_; }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    std::uint64_t scheduled() const { return next_seq_; }

    void schedule(Time at, Payload payload) {
        if (at < now_) {
            throw SimulationError("schedule: event at " + std::to_string(at.ns()) + " ns is before now (" +
                                  std::to_string(now_.ns()) + " ns)");
        }
        heap_.push(Entry{at, next_seq_++, std::move(payload)});
    }

    // Pops events with at <= t_end, advancing the clock to each one. The
    // clock ends at t_end (or stays put if already past it).
    template <class Handler>
    void run_until(Time t_end, Handler&& handle) {
        while (!heap_.empty() && heap_.top().at <= t_end) {
            Entry e = heap_.top();
            heap_.pop();
            now_ = e.at;
            handle(e.at, e.payload);
        }
        if (now_ < t_end) now_ = t_end;
    }

private:
    struct Later {
        bool operator()(const Entry& x, const Entry& y) const {
            if (x.at != y.at) return x.at > y.at;
            return x.seq > y.seq;
        }
    };

    Time now_ = Time::zero();
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
};

}  // namespace sdnrm
