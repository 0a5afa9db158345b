#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace forge {

// One simulator event. Fields keep insertion order so the serialized log is
// byte-stable for a given (seed, script).
struct Event {
    uint64_t seq = 0;
    uint64_t step = 0;
    std::string kind;
    std::vector<std::pair<std::string, std::string>> fields;

    Event& with(std::string key, std::string value) {
        fields.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    Event& with(std::string key, uint64_t value) { return with(std::move(key), std::to_string(value)); }

    const std::string* field(const std::string& key) const {
        for (const auto& [k, v] : fields)
            if (k == key) return &v;
        return nullptr;
    }
};

class EventLog {
public:
    Event& append(uint64_t step, std::string kind) {
        Event e;
        e.seq = events_.size();
        e.step = step;
        e.kind = std::move(kind);
        events_.push_back(std::move(e));
        return events_.back();
    }

    const std::vector<Event>& events() const { return events_; }
    size_t size() const { return events_.size(); }

    std::string text() const;

private:
    std::vector<Event> events_;
};

}  // namespace forge
