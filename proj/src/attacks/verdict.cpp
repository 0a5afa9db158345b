#include "verdict.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace forge::attacks {

const char* category_name(Category c) {
    switch (c) {
        case Category::FIm: return "FIm";
        case Category::ForKVS: return "ForKVS";
        case Category::BUG: return "BUG";
        case Category::Detector: return "detector";
    }
    return "?";
}

const char* mitigation_name(Mitigation m) {
    switch (m) {
        case Mitigation::None: return "none";
        case Mitigation::TrustedRegistry: return "registry";
        case Mitigation::CloneDetector: return "detector";
    }
    return "?";
}

namespace {

uint64_t field_u64(const Event& e, const std::string& key) {
    const std::string* v = e.field(key);
    return v ? std::strtoull(v->c_str(), nullptr, 10) : 0;
}

std::string field_str(const Event& e, const std::string& key) {
    const std::string* v = e.field(key);
    return v ? *v : std::string();
}

bool field_ok(const Event& e) { return field_str(e, "err") == "None"; }

// Reads vs. the globally latest preceding successful write per key.
std::vector<StaleRead> stale_reads_for(const std::string& put_kind, const std::string& get_kind,
                                       const std::vector<Event>& events) {
    std::vector<StaleRead> out;
    std::map<std::string, std::pair<std::string, uint64_t>> latest;
    for (const Event& e : events) {
        if (e.kind == put_kind && field_ok(e)) {
            latest[field_str(e, "key")] = {field_str(e, "value"), e.seq};
        } else if (e.kind == get_kind && field_ok(e)) {
            auto it = latest.find(field_str(e, "key"));
            if (it == latest.end()) continue;
            std::string got = field_str(e, "value");
            if (got != it->second.first) {
                out.push_back({static_cast<uint32_t>(field_u64(e, "client")),
                               field_str(e, "key"), got, it->second.first, e.seq,
                               it->second.second});
            }
        }
    }
    return out;
}

std::vector<DuplicateIndex> duplicate_indices_for(const std::vector<Event>& events) {
    std::map<uint64_t, std::vector<std::string>> accepted;
    for (const Event& e : events)
        if (e.kind == "bisgx_accept")
            accepted[field_u64(e, "index")].push_back(field_str(e, "blob"));
    std::vector<DuplicateIndex> out;
    for (auto& [index, blobs] : accepted) {
        std::set<std::string> distinct(blobs.begin(), blobs.end());
        if (distinct.size() >= 2) out.push_back({index, blobs});
    }
    return out;
}

std::vector<uint32_t> sorted_vec(const std::set<uint32_t>& s) {
    return std::vector<uint32_t>(s.begin(), s.end());
}

}  // namespace

std::map<uint32_t, std::vector<uint32_t>> derive_anonymity_sets(
    const std::string& app, const std::vector<Event>& events) {
    std::map<uint32_t, std::vector<uint32_t>> sets;
    if (app == "proxy") {
        // Traffic metadata: which clients talked to which instance.
        std::map<uint32_t, std::set<uint32_t>> clients_at;
        for (const Event& e : events) {
            if (e.kind != "send" || field_str(e, "kind") != "proxy_fetch") continue;
            auto client = static_cast<uint32_t>(field_u64(e, "client"));
            clients_at[static_cast<uint32_t>(field_u64(e, "instance"))].insert(client);
        }
        std::map<uint32_t, std::set<uint32_t>> acc;
        for (const auto& [instance, clients] : clients_at)
            for (uint32_t c : clients) acc[c].insert(clients.begin(), clients.end());
        for (const auto& [c, s] : acc) sets[c] = sorted_vec(s);
        return sets;
    }
    if (app == "shuffler") {
        // A batch could have come from exactly the clients who fed that
        // instance since its previous flush.
        std::map<uint32_t, std::set<uint32_t>> pending;
        std::map<uint32_t, std::set<uint32_t>> candidates;
        for (const Event& e : events) {
            if (e.kind == "send" && field_str(e, "kind") == "shuffle_item") {
                auto client = static_cast<uint32_t>(field_u64(e, "client"));
                pending[static_cast<uint32_t>(field_u64(e, "instance"))].insert(client);
                if (!candidates.count(client)) candidates[client] = {client};
            } else if (e.kind == "shuffle_emit") {
                auto instance = static_cast<uint32_t>(field_u64(e, "instance"));
                auto& batch = pending[instance];
                for (uint32_t c : batch) {
                    candidates[c].insert(batch.begin(), batch.end());
                }
                batch.clear();
            }
        }
        for (const auto& [c, s] : candidates) sets[c] = sorted_vec(s);
        return sets;
    }
    return sets;
}

Evidence derive_evidence(Category cat, const std::string& app,
                         const std::vector<Event>& events) {
    Evidence ev;
    if (cat == Category::FIm) ev.stale_reads = stale_reads_for("aria_put", "aria_get", events);
    if (cat == Category::ForKVS && app == "pkvs")
        ev.stale_reads = stale_reads_for("pkvs_put", "pkvs_get", events);
    if (cat == Category::ForKVS && app == "bisgx")
        ev.duplicate_indices = duplicate_indices_for(events);
    if (cat == Category::BUG && app == "proxy") {
        auto sets = derive_anonymity_sets(app, events);
        std::map<uint32_t, std::set<uint32_t>> clients_at;
        std::map<uint32_t, std::vector<std::string>> egress_at;
        for (const Event& e : events) {
            if (e.kind == "send" && field_str(e, "kind") == "proxy_fetch")
                clients_at[static_cast<uint32_t>(field_u64(e, "instance"))].insert(
                    static_cast<uint32_t>(field_u64(e, "client")));
            else if (e.kind == "proxy_fetch")
                egress_at[static_cast<uint32_t>(field_u64(e, "instance"))].push_back(
                    field_str(e, "segment"));
        }
        for (const auto& [instance, clients] : clients_at) {
            if (clients.size() != 1) continue;
            const auto& segs = egress_at[instance];
            if (!segs.empty()) ev.recovered_mapping[*clients.begin()] = segs.front();
        }
    }
    return ev;
}

bool derive_violated(Category cat, const std::string& app, const std::vector<Event>& events) {
    if (cat == Category::Detector) return false;
    if (cat == Category::BUG) {
        auto sets = derive_anonymity_sets(app, events);
        if (sets.empty()) return false;
        size_t universe = sets.size();
        return std::any_of(sets.begin(), sets.end(),
                           [&](const auto& kv) { return kv.second.size() < universe; });
    }
    Evidence ev = derive_evidence(cat, app, events);
    return !ev.stale_reads.empty() || !ev.duplicate_indices.empty();
}

bool revalidate(const Verdict& v) {
    if (derive_violated(v.category, v.app, v.events) != v.violated) return false;
    if (!(derive_evidence(v.category, v.app, v.events) == v.evidence)) return false;
    if (v.category == Category::BUG &&
        derive_anonymity_sets(v.app, v.events) != v.anonymity_sets)
        return false;
    return true;
}

}  // namespace forge::attacks
