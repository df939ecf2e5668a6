#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "mtx/multitwist.hpp"
#include "mtx/scene.hpp"
#include "mtx/verify.hpp"

using namespace mtx;
using nlohmann::json;

namespace {

int exit_code(ErrorKind k)
{
    switch (k) {
    case ErrorKind::placement: return 3;
    case ErrorKind::budget: return 4;
    case ErrorKind::io: return 5;
    case ErrorKind::verification: return 6;
    default: return 2;
    }
}

struct BuildOpts {
    double alpha = 0.5;
    int depth = 3;
    std::string out, fixture;
};

struct RingsOpts {
    std::string scene, out;
    double margin = 0.25;
    double l_twist = 4;
};

struct DecomposeOpts {
    std::string scene, out = "factors.json", report;
    double epsilon = 0.1;
    std::size_t pairs = 2000, samples = 10000, budget = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int depth_cut = -1;
};

struct RenderOpts {
    std::string scene, outdir = "frames";
    int frames = 1;
};

struct VerifyOpts {
    std::string scene, factors, report;
    double epsilon = 0.1;
    std::size_t pairs = 20000, samples = 10000;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool probe = false;
};

int cmd_build(const BuildOpts& o)
{
    if (!o.fixture.empty() && o.fixture != "example33") fail(ErrorKind::domain, "unknown fixture " + o.fixture);
    Scene s;
    s.alpha = o.alpha;
    s.depth = o.depth;
    s.fixture = o.fixture;
    IfsSpec::standard(o.alpha);
    if (o.depth < 0) fail(ErrorKind::domain, "depth must be >= 0");
    write_text(o.out, scene_to_json(s).dump(1) + "\n");
    std::printf("scene: alpha=%g depth=%d cells=%zu\n", s.alpha, s.depth, s.cells().size());
    return 0;
}

int cmd_rings(const RingsOpts& o)
{
    Scene s = load_scene(o.scene);
    s.rings = place_rings(s.cells(), o.margin, o.l_twist);
    write_text(o.out.empty() ? o.scene : o.out, scene_to_json(s).dump(1) + "\n");
    std::printf("rings: %zu placed, max shrink ratio %.6f <= %.6f\n", s.rings->size(), s.rings->max_shrink_ratio(),
                s.rings->shrink_bound());
    return 0;
}

int cmd_decompose(const DecomposeOpts& o)
{
    Scene s = load_scene(o.scene);
    if (!s.rings) fail(ErrorKind::domain, "scene has no rings; run the rings command first");
    if (o.seed_set) s.seed = o.seed;
    int cut = o.depth_cut >= 0 ? o.depth_cut : s.effective_depth_cut();
    Path path = scene_path(s, cut);
    SamplerConfig cfg;
    cfg.pairs = o.pairs;
    cfg.seed = s.seed;
    cfg.budget = o.budget ? o.budget : split_budget();
    cfg.regions = ring_regions(*s.rings, cut);
    FactorList fl = decompose(path, o.epsilon, cfg);

    std::vector<DistortionReport> reps;
    double worst = 1;
    for (const auto& f : fl.factors) {
        reps.push_back(distortion_estimate(f.map, factor_region(*s.rings, path, f.t1, cut), o.pairs, s.seed));
        worst = std::max({worst, reps.back().distortion, f.distortion});
    }
    Map2 target = multitwist_map(*s.rings, cut);
    Region disk = Region::of(ring_regions(*s.rings, cut).front());
    double residual = composition_residual(fl, target, disk, o.samples, s.seed);
    write_text(o.out, factors_to_json(fl, s, cut).dump(1) + "\n");
    if (!o.report.empty()) write_text(o.report, distortion_csv(reps));
    std::printf("factors: N=%zu max distortion %.6f residual %.3e seed %llu\n", fl.factors.size(), worst, residual,
                static_cast<unsigned long long>(s.seed));
    if (worst > 1 + o.epsilon) fail(ErrorKind::verification, "a factor exceeds distortion 1+epsilon");
    if (!(residual <= 1e-9)) fail(ErrorKind::verification, "composition residual above 1e-9");
    return 0;
}

int cmd_render(const RenderOpts& o)
{
    if (o.frames < 1) fail(ErrorKind::domain, "frames must be >= 1");
    Scene s = load_scene(o.scene);
    Path p = s.fixture.empty() && !s.rings ? constant_path(identity_map()) : scene_path(s, s.effective_depth_cut());
    std::error_code ec;
    std::filesystem::create_directories(o.outdir, ec);
    if (ec) fail(ErrorKind::io, "cannot create " + o.outdir + ": " + ec.message());
    for (int k = 0; k < o.frames; ++k) {
        double t = o.frames == 1 ? 0.0 : double(k) / (o.frames - 1);
        char name[32];
        std::snprintf(name, sizeof name, "%04d.svg", k);
        write_text((std::filesystem::path(o.outdir) / name).string(), render_frame(s, p, t));
    }
    std::printf("render: %d frame(s) in %s\n", o.frames, o.outdir.c_str());
    return 0;
}

int cmd_probe(const Scene& s, const VerifyOpts& o)
{
    ProbeGrid grid;
    Region region;
    double delta = 0.01;
    if (s.fixture == "example33") {
        grid.n = 5;
        grid.extra = {{0.0, 0.01}, {0.5, 0.51}, {0.99, 1.0}};
        region = Region::of(Disk{Point(49, 0), 1.0 / 3});
    } else {
        if (!s.rings) fail(ErrorKind::domain, "scene has no rings");
        grid.n = 9;
        region = Region();
        for (const auto& sh : ring_regions(*s.rings, s.effective_depth_cut())) region.add(sh);
        delta = 1.0 / 8;
    }
    Path p = scene_path(s, s.effective_depth_cut());
    ProbeTable table = path_probe(p, grid, region, s.seed);
    if (!o.report.empty()) write_text(o.report, probe_csv(table));
    double d = table.max_distortion(delta + 1e-12);
    std::printf("probe: max distortion %.6f at |s-t| <= %g\n", d, delta);
    if (s.fixture == "example33") {
        if (d > 1.5) {
            std::fprintf(stderr, "warning: path is not uniformly bi-Lipschitz (expected for this fixture)\n");
            return 0;
        }
        fail(ErrorKind::verification, "probe failed to flag the non-uniform fixture");
    }
    return 0;
}

int cmd_verify(const VerifyOpts& o)
{
    Scene s = load_scene(o.scene);
    if (o.seed_set) s.seed = o.seed;
    if (o.probe) return cmd_probe(s, o);
    if (o.factors.empty()) fail(ErrorKind::domain, "verify needs --factors or --probe");
    if (!s.rings) fail(ErrorKind::domain, "scene has no rings");
    json fj = read_json(o.factors);
    if (!fj.is_array() || fj.empty()) fail(ErrorKind::domain, "factors file must be a nonempty array");

    int cut = s.effective_depth_cut();
    if (fj[0].contains("params") && fj[0]["params"].contains("depth_cut")) cut = fj[0]["params"]["depth_cut"].get<int>();
    Path path = scene_path(s, cut);
    FactorList fl;
    std::vector<DistortionReport> reps;
    std::vector<std::pair<double, double>> intervals;
    bool ok = true;
    std::string why;
    try {
        for (const json& e : fj) {
            auto iv = e.at("interval").get<std::vector<double>>();
            if (iv.size() != 2 || !(iv[0] < iv[1])) fail(ErrorKind::domain, "bad factor interval");
            std::string kind = e.at("kind").get<std::string>();
            double declared = e.at("distortion").get<double>();
            Factor f;
            Region region;
            if (kind == "path-slice") {
                f = make_factor(path, iv[0], iv[1]);
                region = factor_region(*s.rings, path, iv[1], cut);
            } else if (kind == "similarity") {
                const json& p = e.at("params");
                Similarity sim(p.value("scale", 1.0), p.value("rotation", 0.0),
                               {p.value("tx", 0.0), p.value("ty", 0.0)});
                f.map = similarity_map(sim);
                f.t0 = iv[0];
                f.t1 = iv[1];
                f.kind = kind;
                region = Region::of(ring_regions(*s.rings, cut).front());
            } else {
                fail(ErrorKind::domain, "unknown factor kind " + kind);
            }
            f.distortion = declared;
            reps.push_back(distortion_estimate(f.map, region, o.pairs, s.seed));
            double measured = reps.back().distortion;
            if (declared > 1 + o.epsilon || measured > 1 + o.epsilon) {
                ok = false;
                char buf[160];
                std::snprintf(buf, sizeof buf, "factor [%g,%g] distortion declared %.6f measured %.6f", iv[0], iv[1],
                              declared, measured);
                if (why.empty()) why = buf;
            }
            intervals.push_back({iv[0], iv[1]});
            fl.factors.push_back(std::move(f));
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::domain, std::string("factors file: ") + e.what());
    }
    std::sort(intervals.begin(), intervals.end());
    bool tiles = std::abs(intervals.front().first) < 1e-12 && std::abs(intervals.back().second - 1) < 1e-12;
    for (std::size_t k = 1; k < intervals.size(); ++k)
        tiles = tiles && std::abs(intervals[k].first - intervals[k - 1].second) < 1e-12;
    if (!tiles) {
        ok = false;
        if (why.empty()) why = "factor intervals do not tile [0,1]";
    }
    Map2 target = multitwist_map(*s.rings, cut);
    double residual = composition_residual(fl, target, Region::of(ring_regions(*s.rings, cut).front()), o.samples, s.seed);
    if (!(residual <= 1e-9)) {
        ok = false;
        if (why.empty()) why = "composition residual " + std::to_string(residual);
    }
    if (!o.report.empty()) write_text(o.report, distortion_csv(reps));
    double worst = 1;
    for (const auto& r : reps) worst = std::max(worst, r.distortion);
    std::printf("verify: N=%zu max measured distortion %.6f residual %.3e\n", fl.factors.size(), worst, residual);
    if (!ok) fail(ErrorKind::verification, why);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dehn multitwists around a self-similar Cantor set"};
    app.require_subcommand(1);

    BuildOpts bo;
    auto* build = app.add_subcommand("build", "build the cell tree scene");
    build->add_option("--alpha", bo.alpha, "gap parameter in (0,1)")->required();
    build->add_option("--depth", bo.depth, "tree depth")->required();
    build->add_option("--out", bo.out, "scene file")->required();
    build->add_option("--fixture", bo.fixture, "regression fixture (example33)");

    RingsOpts ro;
    auto* rings = app.add_subcommand("rings", "place round rings");
    rings->add_option("--scene", ro.scene)->required();
    rings->add_option("--margin", ro.margin, "placement margin in (0,1)")->capture_default_str();
    rings->add_option("--l-twist", ro.l_twist, "twist constant L > 1")->capture_default_str();
    rings->add_option("--out", ro.out, "output scene (default: overwrite)");

    DecomposeOpts dop;
    auto* dec = app.add_subcommand("decompose", "factor the multitwist into near-isometries");
    dec->add_option("--scene", dop.scene)->required();
    dec->add_option("--epsilon", dop.epsilon)->capture_default_str();
    dec->add_option("--pairs", dop.pairs)->capture_default_str();
    dec->add_option("--samples", dop.samples)->capture_default_str();
    auto* dseed = dec->add_option("--seed", dop.seed);
    dec->add_option("--depth-cut", dop.depth_cut);
    dec->add_option("--out", dop.out)->capture_default_str();
    dec->add_option("--report", dop.report, "CSV distortion report");
    dec->add_option("--budget", dop.budget, "split budget (default 2^14 or MTX_BUDGET)");

    RenderOpts rdo;
    auto* ren = app.add_subcommand("render", "render SVG frames of the unwinding path");
    ren->add_option("--scene", rdo.scene)->required();
    ren->add_option("--frames", rdo.frames)->capture_default_str();
    ren->add_option("--outdir", rdo.outdir)->capture_default_str();

    VerifyOpts vo;
    auto* ver = app.add_subcommand("verify", "re-measure factors or probe a path");
    ver->add_option("--scene", vo.scene)->required();
    ver->add_option("--factors", vo.factors);
    ver->add_option("--epsilon", vo.epsilon)->capture_default_str();
    ver->add_option("--pairs", vo.pairs)->capture_default_str();
    ver->add_option("--samples", vo.samples)->capture_default_str();
    auto* vseed = ver->add_option("--seed", vo.seed);
    ver->add_option("--report", vo.report, "CSV report");
    ver->add_flag("--probe", vo.probe, "probe the scene path instead of verifying factors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    dop.seed_set = dseed->count() > 0;
    vo.seed_set = vseed->count() > 0;
    try {
        if (*build) return cmd_build(bo);
        if (*rings) return cmd_rings(ro);
        if (*dec) return cmd_decompose(dop);
        if (*ren) return cmd_render(rdo);
        if (*ver) return cmd_verify(vo);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
