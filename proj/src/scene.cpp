#include "mtx/scene.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mtx {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) fail(ErrorKind::domain, std::string("scene: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::domain, std::string("scene: field '") + key + "' has the wrong type");
    }
}

}  // namespace

json scene_to_json(const Scene& s)
{
    json j;
    j["schema"] = kSceneSchema;
    j["alpha"] = s.alpha;
    j["depth"] = s.depth;
    if (!s.fixture.empty()) j["fixture"] = s.fixture;
    CellTree tree = s.cells();
    j["cells"] = json::array();
    for (int k = 0; k <= tree.depth(); ++k)
        for (const Cell& c : tree.level(k))
            j["cells"].push_back({{"word", c.word}, {"rect", {c.rect.xmin, c.rect.xmax, c.rect.ymin, c.rect.ymax}}});
    if (s.rings) {
        j["ring_params"] = {{"margin", s.rings->margin()}, {"l_twist", s.rings->l_twist()}};
        j["rings"] = json::array();
        for (const auto& r : s.rings->rings())
            j["rings"].push_back({{"word", r.word},
                                  {"center", {r.center.real(), r.center.imag()}},
                                  {"r_in", r.r_in},
                                  {"r_out", r.r_out}});
    }
    j["path"] = {{"kind", s.path_kind}, {"depth_cut", s.effective_depth_cut()}};
    j["seeds"] = {{"sampling", s.seed}};
    return j;
}

Scene scene_from_json(const json& j)
{
    if (field<int>(j, "schema") != kSceneSchema) fail(ErrorKind::domain, "scene: unsupported schema version");
    Scene s;
    s.alpha = field<double>(j, "alpha");
    s.depth = field<int>(j, "depth");
    IfsSpec::standard(s.alpha);
    if (s.depth < 0) fail(ErrorKind::domain, "scene: negative depth");
    if (j.contains("fixture")) s.fixture = field<std::string>(j, "fixture");
    if (!s.fixture.empty() && s.fixture != "example33") fail(ErrorKind::domain, "scene: unknown fixture " + s.fixture);
    if (j.contains("path")) {
        const json& p = j.at("path");
        s.path_kind = field<std::string>(p, "kind");
        s.depth_cut = field<int>(p, "depth_cut");
    }
    if (j.contains("seeds")) s.seed = field<std::uint64_t>(j.at("seeds"), "sampling");
    if (j.contains("rings")) {
        const json& rp = j.contains("ring_params") ? j.at("ring_params") : json::object();
        double l = field<double>(rp, "l_twist"), margin = field<double>(rp, "margin");
        std::vector<Ring> rings;
        for (const json& r : j.at("rings")) {
            auto c = field<std::vector<double>>(r, "center");
            if (c.size() != 2) fail(ErrorKind::domain, "scene: ring center needs two coordinates");
            Ring ring{field<std::string>(r, "word"), {c[0], c[1]}, field<double>(r, "r_in"), field<double>(r, "r_out"),
                      true};
            if (r.contains("kind") && field<std::string>(r, "kind") != "round") ring.round = false;
            rings.push_back(ring);
        }
        s.rings = RingFamily(std::move(rings), l, margin);
    }
    return s;
}

json factors_to_json(const FactorList& f, const Scene& s, int depth_cut)
{
    json out = json::array();
    for (const auto& g : f.factors)
        out.push_back({{"interval", {g.t0, g.t1}},
                       {"distortion", g.distortion},
                       {"kind", g.kind},
                       {"params", {{"path", s.path_kind}, {"depth_cut", depth_cut}, {"seed", s.seed}}}});
    return out;
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot write " + path);
    out << text;
    if (!out) fail(ErrorKind::io, "write failed for " + path);
}

json read_json(const std::string& path)
{
    std::string text = read_text(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::domain, path + ": invalid JSON (" + e.what() + ")");
    }
}

Scene load_scene(const std::string& path) { return scene_from_json(read_json(path)); }

Path scene_path(const Scene& s, int depth_cut)
{
    if (s.fixture == "example33") return translated_bump_path(50);
    if (s.path_kind != "unwind") fail(ErrorKind::unsupported, "scene: unknown path kind " + s.path_kind);
    if (!s.rings) fail(ErrorKind::domain, "scene has no rings");
    return unwind_path(*s.rings, depth_cut);
}

std::string render_frame(const Scene& s, const Path& p, double t)
{
    Rectangle view;
    if (s.fixture == "example33")
        view = {-1, 50, -2, 2};
    else if (s.rings)
        view = Rectangle::bounding({s.rings->root().center - Point(s.rings->root().r_out, s.rings->root().r_out),
                                    s.rings->root().center + Point(s.rings->root().r_out, s.rings->root().r_out)})
                   .expanded(0.1 * s.rings->root().r_out);
    else
        view = IfsSpec::standard(s.alpha).base.expanded(0.2);

    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6f %.6f %.6f %.6f\">\n"
                  "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"%.6f\">\n",
                  view.xmin, -view.ymax, view.width(), view.height(), view.width() / 600);
    out += buf;
    auto polyline = [&](const std::vector<Point>& pts, const char* color, bool closed) {
        out += closed ? "<polygon stroke=\"" : "<polyline stroke=\"";
        out += color;
        out += "\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Point q = p.forward(t, pts[i]);
            std::snprintf(buf, sizeof buf, "%s%.6f,%.6f", i ? " " : "", q.real(), q.imag());
            out += buf;
        }
        out += "\"/>\n";
    };
    const int lines = 24, res = 240;
    for (int i = 0; i <= lines; ++i) {
        std::vector<Point> v, h;
        double x = view.xmin + view.width() * i / lines, y = view.ymin + view.height() * i / lines;
        for (int k = 0; k <= res; ++k) {
            v.push_back({x, view.ymin + view.height() * k / res});
            h.push_back({view.xmin + view.width() * k / res, y});
        }
        polyline(v, "#bbbbbb", false);
        polyline(h, "#bbbbbb", false);
    }
    if (s.fixture.empty()) {
        CellTree tree = s.cells();
        int k = std::min(tree.depth(), 6);
        for (const Cell& c : tree.level(k)) {
            std::vector<Point> pts;
            auto cs = c.rect.corners();
            for (int e = 0; e < 4; ++e)
                for (int q = 0; q < 16; ++q) pts.push_back(cs[e] + (cs[(e + 1) % 4] - cs[e]) * (q / 16.0));
            polyline(pts, "#000000", true);
        }
    }
    if (s.rings && s.fixture.empty()) {
        for (const auto& r : s.rings->rings()) {
            if (r.level() > s.effective_depth_cut()) continue;
            for (double rad : {r.r_in, r.r_out}) {
                std::vector<Point> pts;
                for (int q = 0; q < 128; ++q) pts.push_back(r.center + std::polar(rad, kTwoPi * q / 128));
                polyline(pts, "#c03030", true);
            }
        }
    }
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace mtx
