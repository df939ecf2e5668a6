#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "mtx/fractal.hpp"
#include "mtx/multitwist.hpp"
#include "mtx/verify.hpp"

namespace mtx {

constexpr int kSceneSchema = 1;

struct Scene {
    double alpha = 0.5;
    int depth = 0;
    std::string fixture;  // "" or "example33"
    std::optional<RingFamily> rings;
    std::string path_kind = "unwind";
    int depth_cut = -1;  // -1: the scene depth
    std::uint64_t seed = 42;

    int effective_depth_cut() const { return depth_cut < 0 ? depth : depth_cut; }
    CellTree cells() const { return build_cells(IfsSpec::standard(alpha), depth); }
};

nlohmann::json scene_to_json(const Scene& s);
Scene scene_from_json(const nlohmann::json& j);

nlohmann::json factors_to_json(const FactorList& f, const Scene& s, int depth_cut);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
nlohmann::json read_json(const std::string& path);
Scene load_scene(const std::string& path);

// the path a scene describes: unwind path over its rings, or the translated-bump fixture
Path scene_path(const Scene& s, int depth_cut);

// SVG frame of a reference picture (grid, cell outlines, ring circles) pushed forward by p.at(t)
std::string render_frame(const Scene& s, const Path& p, double t);

}  // namespace mtx
