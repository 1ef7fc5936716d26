#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pearls/io.hpp"

using namespace pearls;

namespace {

std::string tmp_path(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kToyDoc = R"({
  "format_version": 1,
  "name": "pair",
  "mode": "spun",
  "tolerances": {"tau": 1e-6, "tau_table": 1e-3},
  "pearls": [
    {"center": [0, 0, 0, 0], "radius": 1.0},
    {"center": [5, 0, 0, 0], "radius": 1.0}
  ]
})";

} // namespace

TEST_CASE("bundled trefoil config parses as 85 semi pearls") {
    std::string data_dir = std::getenv("PEARLS_DATA_DIR") ? std::getenv("PEARLS_DATA_DIR") : "data";
    NecklaceConfig cfg = load_config(data_dir + "/trefoil85.json");
    CHECK(cfg.pearls.size() == 85);
    CHECK(cfg.mode == "semi");
    CHECK(cfg.format_version == 1);
    CHECK(cfg.tau_table == 1e-3);
    SemiNecklace n = semi_from_config(cfg);
    CHECK(n.pearls.size() == 85);
}

TEST_CASE("parse errors are precise") {
    CHECK_THROWS_AS(parse_config("{nope"), Error);

    // negative radius names the pearl index
    std::string doc = R"({"format_version":1,"name":"x","mode":"semi","pearls":[
        {"center":[0,0,1],"radius":1.0},
        {"center":[1,0,1],"radius":-1.0}]})";
    try {
        parse_config(doc);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("pearl 1") != std::string::npos);
    }

    // wrong arity for the mode
    std::string arity = R"({"format_version":1,"name":"x","mode":"spun","pearls":[
        {"center":[0,0,1],"radius":1.0}]})";
    CHECK_THROWS_AS(parse_config(arity), Error);

    std::string badmode = R"({"format_version":1,"name":"x","mode":"coiled","pearls":[
        {"center":[0,0,1],"radius":1.0}]})";
    CHECK_THROWS_AS(parse_config(badmode), Error);

    std::string badver = R"({"format_version":9,"name":"x","mode":"semi","pearls":[
        {"center":[0,0,1],"radius":1.0}]})";
    CHECK_THROWS_AS(parse_config(badver), Error);
}

TEST_CASE("config round trip is stable") {
    NecklaceConfig cfg = parse_config(kToyDoc);
    std::string once = emit_config(cfg);
    std::string twice = emit_config(parse_config(once));
    CHECK(once == twice);
    NecklaceConfig back = parse_config(once);
    CHECK(back.pearls.size() == cfg.pearls.size());
    CHECK(back.pearls[1].center[0] == 5.0);
    CHECK(back.tau == cfg.tau);
}

TEST_CASE("csv export: header, digits, determinism") {
    std::string path = tmp_path("pearls_io_one.csv");
    export_cloud({Point4(1.0 / 3.0, 0, -2, 4e7)}, CloudFormat::Csv, path);
    std::string text = slurp(path);
    CHECK(text == "x1,x2,x3,x4\n0.333333333333,0,-2,40000000\n"); // 2 lines, 12 significant digits

    std::vector<Point4> pts;
    for (int i = 0; i < 50; ++i) pts.push_back(Point4(std::sqrt(2.0) * i, -i, i * i, 0.5));
    export_cloud(pts, CloudFormat::Csv, path);
    std::string a = slurp(path);
    export_cloud(pts, CloudFormat::Csv, path);
    CHECK(a == slurp(path));

    std::vector<Point4> loaded = load_cloud_csv(path);
    CHECK(loaded.size() == 50);
    CHECK(loaded[3].x[1] == -3.0);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(export_cloud({}, CloudFormat::Csv, tmp_path("x.csv")), Error);
    CHECK_THROWS_AS(export_cloud({Point4()}, CloudFormat::Csv, "/nonexistent-dir/x.csv"), Error);
}

TEST_CASE("ply export carries the fourth coordinate as a property") {
    std::string path = tmp_path("pearls_io.ply");
    export_cloud({Point4(1, 2, 3, 4), Point4(5, 6, 7, 8)}, CloudFormat::Ply, path);
    std::string text = slurp(path);
    CHECK(text.find("ply\nformat ascii 1.0") == 0);
    CHECK(text.find("element vertex 2") != std::string::npos);
    CHECK(text.find("property float w") != std::string::npos);
    CHECK(text.find("1 2 3 4") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("slice keeps points within the slab") {
    std::vector<Point4> pts = {Point4(0, 0, 0, 0.0), Point4(0, 0, 0, 0.5), Point4(0, 0, 0, -0.001)};
    auto kept = slice_cloud(pts, 0.0, 0.01);
    CHECK(kept.size() == 2);
    auto shifted = slice_cloud(pts, 0.5, 0.01);
    CHECK(shifted.size() == 1);
}

TEST_CASE("manifests record command, inputs and outputs") {
    std::string in_path = tmp_path("pearls_manifest_input.json");
    std::ofstream(in_path) << kToyDoc;
    RunManifest man;
    man.command = "validate";
    man.parameters = {{"config", in_path}};
    man.add_input(in_path);
    man.outputs = {"report.txt"};
    man.elapsed_seconds = 0.5;
    std::string out_path = tmp_path("pearls_manifest.json");
    man.write(out_path);
    std::string text = slurp(out_path);
    CHECK(text.find("\"command\": \"validate\"") != std::string::npos);
    CHECK(text.find("\"sha256\"") != std::string::npos);
    CHECK(text.find("\"artifact_version\"") != std::string::npos);
    CHECK(man.inputs.size() == 1);
    CHECK(man.inputs[0].second.size() == 64);
    std::filesystem::remove(in_path);
    std::filesystem::remove(out_path);
}

TEST_CASE("spun config builds a usable necklace") {
    NecklaceConfig cfg = parse_config(kToyDoc);
    SpunNecklace sn = spun_from_config(cfg);
    CHECK(sn.pearls.size() == 2);
    CHECK(sn.declared_class(0, 1) == PairClass::Disjoint);
    CHECK_THROWS_AS(semi_from_config(cfg), Error);
}
