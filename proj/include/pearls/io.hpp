#pragma once

// Config ingestion, cloud export and run manifests.  Configs are JSON with a
// format_version field; clouds go out as CSV (x1,x2,x3,x4 @ 12 significant
// digits) or ASCII PLY (x,y,z vertex coordinates plus the fourth coordinate
// as scalar property w).  Every CLI command records a RunManifest.

#include <cstdint>
#include <string>
#include <vector>

#include "pearls/necklace.hpp"

namespace pearls {

struct ConfigPearl {
    std::array<double, 4> center{0.0, 0.0, 0.0, 0.0};
    int dim = 3; // 3 in semi mode (page coordinates), 4 in spun mode
    double radius = 0.0;
};

struct NecklaceConfig {
    int format_version = 1;
    std::string name;
    std::string mode; // "semi" | "spun"
    double tau = 1e-6;
    double tau_table = 1e-3;
    std::string note;
    std::vector<ConfigPearl> pearls;
};

// JSON-syntax document -> validated config; errors name the offending field
// and pearl index.
NecklaceConfig parse_config(const std::string& document);
NecklaceConfig load_config(const std::string& path); // IOError if unreadable
std::string emit_config(const NecklaceConfig& cfg);  // normalized round-trip form

SemiNecklace semi_from_config(const NecklaceConfig& cfg);
SpunNecklace spun_from_config(const NecklaceConfig& cfg); // spun-mode pearls, declared classes recomputed
NecklaceConfig config_of(const SpunNecklace& sn, const std::string& name, double tau, double tau_table);

enum class CloudFormat { Csv, Ply };

void export_cloud(const std::vector<Point4>& points, CloudFormat format,
                  const std::string& path); // IOError on unwritable path / empty cloud

std::vector<Point4> load_cloud_csv(const std::string& path);

// Points with |x4 - offset| <= thickness for plane "w=<offset>".
std::vector<Point4> slice_cloud(const std::vector<Point4>& points, double offset,
                                double thickness);

struct RunManifest {
    std::string artifact_version;
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::pair<std::string, std::string>> inputs; // path, sha256
    std::vector<std::string> outputs;
    double elapsed_seconds = 0.0;

    void add_input(const std::string& path); // hashes the file
    void write(const std::string& path) const;
};

std::string sha256_file(const std::string& path); // IOError if unreadable

extern const char* kArtifactVersion;

} // namespace pearls
