// pearls: necklace validation, spinning, limit-set enumeration and reports.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "pearls/io.hpp"
#include "pearls/orbit.hpp"
#include "pearls/topology.hpp"
#include "pearls/twistor.hpp"

using namespace pearls;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// Build a validated spun necklace from either config mode.
SpunNecklace build_spun(const NecklaceConfig& cfg, NecklaceReport* report = nullptr) {
    SpunNecklace sn = (cfg.mode == "semi") ? spin_necklace(semi_from_config(cfg))
                                           : spun_from_config(cfg);
    NecklaceReport rep = validate_spun(sn, cfg.tau);
    if (report) *report = rep;
    if (!sn.validated)
        throw Error(ErrorCode::ValidationRequired,
                    "necklace fails spun validation (" + std::to_string(rep.failures.size()) +
                        " pair failures)");
    return sn;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IOError, "cannot write " + path);
    out << text;
}

std::string manifest_path(const std::string& out, const std::string& command) {
    return out.empty() ? command + ".manifest.json" : out + ".manifest.json";
}

int run_validate(const std::string& config_path, double tol_table) {
    Timer timer;
    RunManifest man;
    man.command = "validate";
    man.add_input(config_path);
    man.parameters = {{"config", config_path}, {"tol-table", std::to_string(tol_table)}};

    NecklaceConfig cfg = load_config(config_path);
    bool pass = false;
    if (cfg.mode == "semi") {
        SemiNecklace n = semi_from_config(cfg);
        NecklaceReport rep = validate_semi(n, tol_table);
        int total = static_cast<int>(n.pearls.size()) - 1;
        int bad = 0;
        for (const auto& f : rep.failures)
            if (f.b == f.a + 1) ++bad;
        std::printf("mode: semi, pearls: %zu\n", n.pearls.size());
        std::printf("consecutive orthogonal pairs: %d/%d within %.1e\n", total - bad, total, tol_table);
        std::printf("worst consecutive residual: %.4e\n", rep.worst_consecutive);
        std::printf("worst hexagon-law residual: %.4e\n", rep.worst_hexagon);
        std::printf("min non-consecutive disjoint margin: %.4e\n", rep.min_disjoint_margin);
        pass = rep.pass;
    } else {
        SpunNecklace sn = spun_from_config(cfg);
        NecklaceReport rep = validate_spun(sn, cfg.tau);
        std::printf("mode: spun, pearls: %zu\n", sn.pearls.size());
        std::printf("worst orthogonal inner product: %.4e\n", rep.worst_orthogonal);
        std::printf("worst tangent deviation: %.4e\n", rep.worst_tangent);
        std::printf("min disjoint margin (inner - 1): %.4e\n", rep.min_disjoint_margin);
        std::printf("pair failures: %zu\n", rep.failures.size());
        pass = rep.pass;
    }
    std::printf("validation: %s\n", pass ? "PASS" : "FAIL");
    man.elapsed_seconds = timer.seconds();
    man.write(manifest_path("", "validate"));
    return pass ? 0 : 1;
}

int run_spin(const std::string& config_path, const std::string& out) {
    Timer timer;
    RunManifest man;
    man.command = "spin";
    man.add_input(config_path);
    man.parameters = {{"config", config_path}, {"out", out}};

    NecklaceConfig cfg = load_config(config_path);
    SemiNecklace n = semi_from_config(cfg);
    SpunNecklace sn = spin_necklace(n);
    NecklaceReport rep = validate_spun(sn, cfg.tau);
    NecklaceConfig out_cfg = config_of(sn, sn.name, cfg.tau, cfg.tau_table);
    out_cfg.note = "spun from " + cfg.name;
    write_text(out, emit_config(out_cfg));
    std::printf("spun %zu semi pearls into %zu spheres (%d meridian levels, 2 poles, %zu junctions)\n",
                n.pearls.size(), sn.pearls.size(), sn.levels,
                sn.pearls.size() - 6 * static_cast<size_t>(sn.levels) - 2);
    std::printf("worst orthogonal inner product: %.4e\n", rep.worst_orthogonal);
    std::printf("worst tangent deviation: %.4e\n", rep.worst_tangent);
    std::printf("validation: %s\n", sn.validated ? "PASS" : "FAIL");
    man.outputs = {out};
    man.elapsed_seconds = timer.seconds();
    man.write(manifest_path(out, "spin"));
    return sn.validated ? 0 : 1;
}

int run_limitset(const std::string& config_path, double eps, int depth, const std::string& out,
                 const std::string& checkpoint) {
    Timer timer;
    RunManifest man;
    man.command = "limitset";
    man.add_input(config_path);
    man.parameters = {{"config", config_path},
                      {"epsilon", std::to_string(eps)},
                      {"depth", std::to_string(depth)},
                      {"out", out},
                      {"checkpoint", checkpoint}};

    NecklaceConfig cfg = load_config(config_path);
    SpunNecklace sn = build_spun(cfg);
    GeneratorSet gens = generators_from_necklace(sn);

    OrbitFrontier f;
    if (!checkpoint.empty() && std::filesystem::exists(checkpoint)) {
        std::printf("resuming from checkpoint %s\n", checkpoint.c_str());
        f = load_checkpoint(checkpoint, gens);
    } else {
        f = init_frontier(gens, eps, depth);
    }
    expand_to_completion(f, gens, checkpoint);
    if (!checkpoint.empty()) save_checkpoint(f, checkpoint);

    std::vector<Point4> cloud = limit_set_points(f, gens);
    export_cloud(cloud, CloudFormat::Csv, out);
    std::printf("expanded %llu words to depth %d; %zu leaf balls, %zu cloud points -> %s\n",
                static_cast<unsigned long long>(f.words_expanded), f.depth, f.completed.size(),
                cloud.size(), out.c_str());
    if (!f.active.empty())
        std::printf("note: frontier still holds %zu balls of radius >= %.1e (raise --depth to refine)\n",
                    f.active.size(), eps);
    man.outputs = {out};
    if (!checkpoint.empty()) man.outputs.push_back(checkpoint);
    man.elapsed_seconds = timer.seconds();
    man.write(manifest_path(out, "limitset"));
    return 0;
}

int run_counts(const std::string& config_path, int depth) {
    Timer timer;
    RunManifest man;
    man.command = "counts";
    man.add_input(config_path);
    man.parameters = {{"config", config_path}, {"depth", std::to_string(depth)}};

    NecklaceConfig cfg = load_config(config_path);
    SpunNecklace sn = build_spun(cfg);
    const int n = static_cast<int>(sn.pearls.size());
    if (n <= 30) {
        GeneratorSet gens = generators_from_necklace(sn);
        OrbitFrontier f = init_frontier(gens, 1e-12, depth);
        expand_to_completion(f, gens);
        CountReport rep = count_report(f, n, depth);
        std::fputs(rep.render().c_str(), stdout);
    } else {
        // enumeration is exponential in n; report the closed forms only
        OrbitFrontier empty;
        CountReport rep = count_report(empty, n, depth);
        std::printf("counts for n = %d, depth <= %d (enumeration skipped for n > 30)\n", n, depth);
        std::printf("paper E(T1) = n(n-2) = %lld\n", static_cast<long long>(rep.paper_ET1));
        std::printf("paper E(T2) = n(n^2-2n+7) = %lld\n", static_cast<long long>(rep.paper_ET2));
        for (int d = 0; d <= depth; ++d)
            std::printf("depth %d: connected sums %lld, shell pearls %lld\n", d,
                        static_cast<long long>(rep.paper_connected_sums[d]),
                        static_cast<long long>(rep.paper_shell_pearls[d]));
    }
    man.elapsed_seconds = timer.seconds();
    man.write(manifest_path("", "counts"));
    return 0;
}

int run_presentation(const std::string& config_path, const std::string& out) {
    Timer timer;
    RunManifest man;
    man.command = "presentation";
    man.add_input(config_path);
    man.parameters = {{"config", config_path}, {"out", out}};

    NecklaceConfig cfg = load_config(config_path);
    SpunNecklace sn = build_spun(cfg);
    Presentation pres = presentation_of(sn);
    std::string text = pres.render();
    write_text(out, text);
    std::printf("%zu generators, %zu relators -> %s\n", pres.generators.size(),
                pres.relators.size(), out.c_str());
    man.outputs = {out};
    man.elapsed_seconds = timer.seconds();
    man.write(manifest_path(out, "presentation"));
    return 0;
}

int run_monodromy(int radius) {
    Timer timer;
    RunManifest man;
    man.command = "monodromy";
    man.parameters = {{"radius", std::to_string(radius)}};

    Automorphism phi = trefoil_monodromy();
    int order = 0;
    FreeWord conj;
    for (int k = 1; k <= 12; ++k) {
        auto w = power_is_inner(phi, k, radius);
        if (w) {
            order = k;
            conj = *w;
            break;
        }
    }
    man.elapsed_seconds = timer.seconds();
    man.write(manifest_path("", "monodromy"));
    if (order == 0) {
        std::printf("no inner power found within radius %d\n", radius);
        return 1;
    }
    std::printf("Out-order: %d, conjugator: %s\n", order, free_word_str(conj).c_str());
    return 0;
}

int run_twistor_check(const std::string& config_path, int n_words, int samples) {
    Timer timer;
    RunManifest man;
    man.command = "twistor-check";
    man.add_input(config_path);
    man.parameters = {{"config", config_path},
                      {"words", std::to_string(n_words)},
                      {"samples", std::to_string(samples)}};

    NecklaceConfig cfg = load_config(config_path);
    SpunNecklace sn = build_spun(cfg);
    GeneratorSet gens = generators_from_necklace(sn);

    std::mt19937_64 rng(0x7e15704);
    std::uniform_int_distribution<int> pick(0, gens.size() - 1);
    double worst = 0.0;
    for (int i = 0; i < n_words; ++i) {
        int len = 2 + 2 * (i % 3); // lengths 2, 4, 6
        Word w;
        while (static_cast<int>(w.size()) < len) {
            int j = pick(rng);
            if (!w.empty() && w.back() == j) continue;
            w.push_back(j);
        }
        double dev = equivariance_check(w, gens, samples, 0x5eed + static_cast<std::uint64_t>(i));
        std::printf("word %2d (len %d): max deviation %.3e\n", i, len, dev);
        worst = std::max(worst, dev);
    }
    std::printf("max equivariance deviation over %d words x %d samples: %.3e\n", n_words, samples,
                worst);
    man.elapsed_seconds = timer.seconds();
    man.write(manifest_path("", "twistor-check"));
    return worst <= 1e-7 ? 0 : 1;
}

int run_slice(const std::string& cloud_path, const std::string& plane, double thickness,
              const std::string& out) {
    Timer timer;
    RunManifest man;
    man.command = "slice";
    man.add_input(cloud_path);
    man.parameters = {{"cloud", cloud_path},
                      {"plane", plane},
                      {"thickness", std::to_string(thickness)},
                      {"out", out}};

    if (plane.rfind("w=", 0) != 0)
        throw Error(ErrorCode::ParseError, "plane must have the form w=<offset>, got '" + plane + "'");
    double offset = 0.0;
    try {
        offset = std::stod(plane.substr(2));
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad plane offset in '" + plane + "'");
    }

    std::vector<Point4> cloud = load_cloud_csv(cloud_path);
    std::vector<Point4> kept = slice_cloud(cloud, offset, thickness);
    if (kept.empty()) {
        std::printf("slice is empty (%zu points, none within %.3g of %s)\n", cloud.size(), thickness,
                    plane.c_str());
        man.elapsed_seconds = timer.seconds();
        man.write(manifest_path(out, "slice"));
        return 1;
    }
    export_cloud(kept, CloudFormat::Csv, out);
    std::printf("kept %zu of %zu points within |x4 - %g| <= %g -> %s\n", kept.size(), cloud.size(),
                offset, thickness, out.c_str());
    man.outputs = {out};
    man.elapsed_seconds = timer.seconds();
    man.write(manifest_path(out, "slice"));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pearl necklaces of round spheres: construction, reflection-group orbits, reports"};
    app.require_subcommand(1);

    std::string config, out, checkpoint, cloud, plane = "w=0";
    double tol_table = 1e-3, eps = 0.0, thickness = 1e-3;
    int depth = 0, radius = 8, n_words = 20, samples = 100;

    auto* c_validate = app.add_subcommand("validate", "check a necklace config against its declared pair classes");
    c_validate->add_option("--config", config)->required();
    c_validate->add_option("--tol-table", tol_table);

    auto* c_spin = app.add_subcommand("spin", "rotate a semi necklace into a full spun necklace");
    c_spin->add_option("--config", config)->required();
    c_spin->add_option("--out", out)->required();

    auto* c_limitset = app.add_subcommand("limitset", "enumerate orbit balls down to radius epsilon and export the cloud");
    c_limitset->add_option("--config", config)->required();
    c_limitset->add_option("--epsilon", eps)->required();
    c_limitset->add_option("--depth", depth)->required();
    c_limitset->add_option("--out", out)->required();
    c_limitset->add_option("--checkpoint", checkpoint);

    auto* c_counts = app.add_subcommand("counts", "orbit ball counts per depth vs the closed-form columns");
    c_counts->add_option("--config", config)->required();
    c_counts->add_option("--depth", depth)->required();

    auto* c_pres = app.add_subcommand("presentation", "emit the reflection-group presentation");
    c_pres->add_option("--config", config)->required();
    c_pres->add_option("--out", out)->required();

    auto* c_mono = app.add_subcommand("monodromy", "order of the trefoil monodromy in Out(F2)");
    c_mono->add_option("--radius", radius);

    auto* c_twistor = app.add_subcommand("twistor-check", "equivariance of the even-word lift to P^3");
    c_twistor->add_option("--config", config)->required();
    c_twistor->add_option("--words", n_words)->required();
    c_twistor->add_option("--samples", samples)->required();

    auto* c_slice = app.add_subcommand("slice", "filter a cloud CSV to a hyperplane slab");
    c_slice->add_option("--cloud", cloud)->required();
    c_slice->add_option("--plane", plane);
    c_slice->add_option("--thickness", thickness)->required();
    c_slice->add_option("--out", out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // 0 only for --help/--version
    }

    try {
        if (c_validate->parsed()) return run_validate(config, tol_table);
        if (c_spin->parsed()) return run_spin(config, out);
        if (c_limitset->parsed()) return run_limitset(config, eps, depth, out, checkpoint);
        if (c_counts->parsed()) return run_counts(config, depth);
        if (c_pres->parsed()) return run_presentation(config, out);
        if (c_mono->parsed()) return run_monodromy(radius);
        if (c_twistor->parsed()) return run_twistor_check(config, n_words, samples);
        if (c_slice->parsed()) return run_slice(cloud, plane, thickness, out);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 2;
}
