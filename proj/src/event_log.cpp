#include "event_log.hpp"

#include <sstream>

namespace forge {

std::string EventLog::text() const {
    std::ostringstream os;
    for (const auto& e : events_) {
        os << e.seq << ' ' << "step=" << e.step << ' ' << e.kind;
        for (const auto& [k, v] : e.fields) os << ' ' << k << '=' << v;
        os << '\n';
    }
    return os.str();
}

}  // namespace forge
