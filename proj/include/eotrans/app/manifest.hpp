#pragma once

// Per-run manifest: what was run, with which resolved configuration, and the
// checksums of everything written. Written after the outputs it describes.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../entanglement.hpp"
#include "digest.hpp"

namespace eotrans::app {

inline constexpr const char* toolkit_version = "0.1.0";

struct OutputRecord {
    std::string path;
    std::string sha256;
    std::size_t bytes = 0;
};

struct RunManifest {
    std::string command; // "figure" or "sweep"
    nlohmann::json config; // canonical resolved configuration
    std::optional<std::uint64_t> seed;
    double wall_time_s = 0.0;
    std::vector<OutputRecord> outputs;

    /// SHA-256 of the canonical config; identical configs share a digest.
    std::string config_digest() const { return sha256_hex(config.dump()); }

    nlohmann::json to_json() const
    {
        nlohmann::json out;
        out["toolkit_version"] = toolkit_version;
        out["command"] = command;
        out["config_digest"] = config_digest();
        out["config"] = config;
        if (seed) {
            out["seed"] = *seed;
            out["rng_algorithm"] = CounterRng::algorithm;
        } else {
            out["seed"] = nullptr;
        }
        out["wall_time_s"] = wall_time_s;
        auto& files = out["outputs"] = nlohmann::json::array();
        for (const auto& o : outputs) files.push_back({{"path", o.path}, {"sha256", o.sha256}, {"bytes", o.bytes}});
        return out;
    }
};

/// Writes `data` to `path` and records its checksum.
inline OutputRecord write_output(const std::string& path, const std::string& data)
{
    write_file(path, data);
    return {path, sha256_hex(data), data.size()};
}

inline std::string manifest_path_for(const std::string& output_path) { return output_path + ".manifest.json"; }

inline void write_manifest(const std::string& path, const RunManifest& m) { write_file(path, m.to_json().dump(2) + "\n"); }

} // namespace eotrans::app
