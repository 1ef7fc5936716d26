#include "pearls/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sha256.hpp"

namespace pearls {

const char* kArtifactVersion = "1.0.0";

using ojson = nlohmann::ordered_json;

static std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IOError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

NecklaceConfig parse_config(const std::string& document) {
    ojson doc;
    try {
        doc = ojson::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("config is not valid JSON: ") + e.what());
    }
    NecklaceConfig cfg;
    try {
        cfg.format_version = doc.at("format_version").get<int>();
        cfg.name = doc.value("name", std::string("unnamed"));
        cfg.mode = doc.at("mode").get<std::string>();
        if (doc.contains("tolerances")) {
            cfg.tau = doc["tolerances"].value("tau", 1e-6);
            cfg.tau_table = doc["tolerances"].value("tau_table", 1e-3);
        }
        cfg.note = doc.value("note", std::string());
        if (!doc.contains("pearls") || !doc["pearls"].is_array())
            throw Error(ErrorCode::ParseError, "config field 'pearls' missing or not an array");
        size_t idx = 0;
        for (const auto& row : doc["pearls"]) {
            ConfigPearl p;
            const auto& c = row.at("center");
            if (!c.is_array() || (c.size() != 3 && c.size() != 4))
                throw Error(ErrorCode::ParseError,
                            "pearl " + std::to_string(idx) + ": center must have 3 or 4 coordinates");
            p.dim = static_cast<int>(c.size());
            for (size_t i = 0; i < c.size(); ++i) p.center[i] = c[i].get<double>();
            p.radius = row.at("radius").get<double>();
            if (!(p.radius > 0.0))
                throw Error(ErrorCode::ParseError, "pearl " + std::to_string(idx) + ": radius " +
                                                       std::to_string(p.radius) + " is not positive");
            cfg.pearls.push_back(p);
            ++idx;
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("config field error: ") + e.what());
    }
    if (cfg.format_version != 1)
        throw Error(ErrorCode::ParseError,
                    "unsupported format_version " + std::to_string(cfg.format_version));
    if (cfg.mode != "semi" && cfg.mode != "spun")
        throw Error(ErrorCode::ParseError, "mode must be 'semi' or 'spun', got '" + cfg.mode + "'");
    const int want_dim = (cfg.mode == "semi") ? 3 : 4;
    for (size_t i = 0; i < cfg.pearls.size(); ++i)
        if (cfg.pearls[i].dim != want_dim)
            throw Error(ErrorCode::ParseError, "pearl " + std::to_string(i) + ": expected " +
                                                   std::to_string(want_dim) + " center coordinates in " +
                                                   cfg.mode + " mode");
    if (cfg.pearls.empty()) throw Error(ErrorCode::EmptyNecklace, "config lists no pearls");
    return cfg;
}

NecklaceConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string emit_config(const NecklaceConfig& cfg) {
    ojson doc;
    doc["format_version"] = cfg.format_version;
    doc["name"] = cfg.name;
    doc["mode"] = cfg.mode;
    doc["tolerances"] = {{"tau", cfg.tau}, {"tau_table", cfg.tau_table}};
    doc["note"] = cfg.note;
    doc["pearls"] = ojson::array();
    for (const auto& p : cfg.pearls) {
        ojson row;
        row["center"] = std::vector<double>(p.center.begin(), p.center.begin() + p.dim);
        row["radius"] = p.radius;
        doc["pearls"].push_back(row);
    }
    return doc.dump(2) + "\n";
}

SemiNecklace semi_from_config(const NecklaceConfig& cfg) {
    if (cfg.mode != "semi")
        throw Error(ErrorCode::ParseError, "config mode is '" + cfg.mode + "', expected 'semi'");
    SemiNecklace n;
    n.name = cfg.name;
    for (const auto& p : cfg.pearls) {
        Ball b;
        for (int i = 0; i < 3; ++i) b.center[i] = dd(p.center[i]);
        b.radius = dd(p.radius);
        n.pearls.push_back(b);
    }
    return n;
}

SpunNecklace spun_from_config(const NecklaceConfig& cfg) {
    if (cfg.mode != "spun")
        throw Error(ErrorCode::ParseError, "config mode is '" + cfg.mode + "', expected 'spun'");
    std::vector<Ball> balls;
    for (const auto& p : cfg.pearls) {
        Ball b;
        for (int i = 0; i < 4; ++i) b.center[i] = dd(p.center[i]);
        b.radius = dd(p.radius);
        balls.push_back(b);
    }
    return ring_necklace(cfg.name, balls, cfg.tau);
}

NecklaceConfig config_of(const SpunNecklace& sn, const std::string& name, double tau,
                         double tau_table) {
    NecklaceConfig cfg;
    cfg.name = name;
    cfg.mode = "spun";
    cfg.tau = tau;
    cfg.tau_table = tau_table;
    for (const Ball& b : sn.pearls) {
        ConfigPearl p;
        p.dim = 4;
        for (int i = 0; i < 4; ++i) p.center[i] = to_double(b.center[i]);
        p.radius = to_double(b.radius);
        cfg.pearls.push_back(p);
    }
    return cfg;
}

static std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void export_cloud(const std::vector<Point4>& points, CloudFormat format, const std::string& path) {
    if (points.empty()) throw Error(ErrorCode::IOError, "refusing to export an empty cloud");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IOError, "cannot write " + path);
    if (format == CloudFormat::Csv) {
        out << "x1,x2,x3,x4\n";
        for (const Point4& p : points) {
            if (p.infinite) continue; // oo has no chart coordinates
            out << fmt12(p.x[0]) << "," << fmt12(p.x[1]) << "," << fmt12(p.x[2]) << ","
                << fmt12(p.x[3]) << "\n";
        }
    } else {
        size_t finite = 0;
        for (const Point4& p : points)
            if (!p.infinite) ++finite;
        out << "ply\nformat ascii 1.0\ncomment pearls cloud v" << kArtifactVersion << "\n"
            << "element vertex " << finite << "\n"
            << "property float x\nproperty float y\nproperty float z\nproperty float w\n"
            << "end_header\n";
        for (const Point4& p : points) {
            if (p.infinite) continue;
            out << fmt12(p.x[0]) << " " << fmt12(p.x[1]) << " " << fmt12(p.x[2]) << " "
                << fmt12(p.x[3]) << "\n";
        }
    }
    if (!out) throw Error(ErrorCode::IOError, "write failed for " + path);
}

std::vector<Point4> load_cloud_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IOError, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x1,x2,x3,x4", 0) != 0)
        throw Error(ErrorCode::ParseError, path + ": missing x1,x2,x3,x4 header");
    std::vector<Point4> pts;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        Point4 p;
        std::istringstream ss(line);
        std::string field;
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(ss, field, ','))
                throw Error(ErrorCode::ParseError,
                            path + ":" + std::to_string(lineno) + ": expected 4 fields");
            try {
                p.x[i] = std::stod(field);
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError,
                            path + ":" + std::to_string(lineno) + ": bad number '" + field + "'");
            }
        }
        pts.push_back(p);
    }
    return pts;
}

std::vector<Point4> slice_cloud(const std::vector<Point4>& points, double offset, double thickness) {
    std::vector<Point4> out;
    for (const Point4& p : points)
        if (!p.infinite && std::abs(p.x[3] - offset) <= thickness) out.push_back(p);
    return out;
}

std::string sha256_file(const std::string& path) { return detail::sha256_hex(read_file(path)); }

void RunManifest::add_input(const std::string& path) { inputs.push_back({path, sha256_file(path)}); }

void RunManifest::write(const std::string& path) const {
    ojson doc;
    doc["artifact_version"] = artifact_version.empty() ? kArtifactVersion : artifact_version;
    doc["command"] = command;
    doc["parameters"] = ojson::object();
    for (const auto& [k, v] : parameters) doc["parameters"][k] = v;
    doc["inputs"] = ojson::array();
    for (const auto& [p, h] : inputs) doc["inputs"].push_back({{"path", p}, {"sha256", h}});
    doc["outputs"] = outputs;
    doc["elapsed_seconds"] = elapsed_seconds;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IOError, "cannot write manifest " + path);
    out << doc.dump(2) << "\n";
}

} // namespace pearls
