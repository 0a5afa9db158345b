#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bytes.hpp"
#include "platform.hpp"

namespace forge {

struct AriaEntry {
    Bytes ciphertext;
    Bytes mac;
    uint64_t entry_counter = 0;
};

struct ProxyObservation {
    uint32_t instance = 0;
    std::string request;
    uint64_t step = 0;
};

struct ShuffleBatch {
    uint32_t instance = 0;
    std::vector<Bytes> items;
    uint64_t step = 0;
};

// Everything persisted or observed outside enclave memory. The adversary
// owns this: tests and attack scripts mutate it freely.
struct HostStorage {
    // Per-instance Aria entry tables: the host presents each clone its own
    // consistent view.
    std::map<uint32_t, std::map<std::string, AriaEntry>> aria;

    // Append-only (index, blob) records; nothing stops two records from
    // carrying the same index.
    std::vector<std::pair<uint64_t, SealedBlob>> bisgx_db;
    bool bisgx_serve_latest = false;

    std::vector<SealedBlob> pkvs_snapshots;

    std::map<std::string, Bytes> segments;
    std::vector<ProxyObservation> proxy_log;
    std::vector<ShuffleBatch> shuffle_log;

    std::map<std::string, AriaEntry>& aria_view(uint32_t instance) { return aria[instance]; }

    void bisgx_append(uint64_t index, SealedBlob blob) {
        bisgx_db.emplace_back(index, std::move(blob));
    }

    // The host picks which record answers a query; with duplicate indices
    // either choice is accepted downstream.
    const SealedBlob* bisgx_fetch(uint64_t index) const {
        const SealedBlob* found = nullptr;
        for (const auto& [idx, blob] : bisgx_db) {
            if (idx != index) continue;
            found = &blob;
            if (!bisgx_serve_latest) return found;
        }
        return found;
    }

    uint64_t pkvs_store(SealedBlob blob) {
        pkvs_snapshots.push_back(std::move(blob));
        return pkvs_snapshots.size() - 1;
    }
};

}  // namespace forge
