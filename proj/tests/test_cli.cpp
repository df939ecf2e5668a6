#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::path(MTX_WORK_DIR) / "cli";

int run(const std::string& args)
{
    std::string cmd = "cd '" + kWork.string() + "' && '" MTX_BIN "' " + args + " >>log.txt 2>>err.txt";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(kWork / p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

void spit(const fs::path& p, const std::string& s) { std::ofstream(kWork / p, std::ios::binary) << s; }

struct Fresh {
    Fresh()
    {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
};

}  // namespace

TEST_CASE_FIXTURE(Fresh, "build")
{
    REQUIRE(run("build --alpha 0.5 --depth 3 --out scene.json") == 0);
    auto s = load("scene.json");
    CHECK(s["schema"] == 1);
    int leaves = 0;
    for (const auto& c : s["cells"]) leaves += c["word"].get<std::string>().size() == 3;
    CHECK(leaves == 8);
    CHECK(s["cells"].size() == 15);
    CHECK(run("build --alpha 1.5 --depth 3 --out bad.json") == 2);
    CHECK(!fs::exists(kWork / "bad.json"));
    REQUIRE(run("build --alpha 0.5 --depth 0 --out root.json") == 0);
    CHECK(load("root.json")["cells"].size() == 1);
    CHECK(run("build --alpha 0.5") == 2);
    CHECK(run("frobnicate") == 2);
}

TEST_CASE_FIXTURE(Fresh, "rings")
{
    REQUIRE(run("build --alpha 0.5 --depth 3 --out scene.json") == 0);
    REQUIRE(run("rings --scene scene.json --out a.json") == 0);
    auto a = load("a.json");
    CHECK(a["rings"].size() == 15);
    REQUIRE(run("rings --scene scene.json --out b.json") == 0);
    CHECK(slurp("a.json") == slurp("b.json"));
    REQUIRE(run("rings --scene a.json --out c.json") == 0);
    CHECK(load("c.json")["rings"].dump() == a["rings"].dump());

    CHECK(run("rings --scene scene.json --l-twist 2 --out d.json") == 3);
    CHECK(slurp("err.txt").find("rings '1' and '2'") != std::string::npos);
    CHECK(run("rings --scene missing.json") == 5);
    CHECK(run("rings --scene scene.json --margin 2 --out e.json") == 2);
}

TEST_CASE_FIXTURE(Fresh, "decompose and verify")
{
    REQUIRE(run("build --alpha 0.5 --depth 0 --out s.json") == 0);
    CHECK(run("decompose --scene s.json") == 2);  // no rings yet
    REQUIRE(run("rings --scene s.json --l-twist 2") == 0);
    REQUIRE(run("decompose --scene s.json --epsilon 0.1 --out f.json --report r.csv") == 0);
    auto f = load("f.json");
    REQUIRE(f.size() > 1);
    for (const auto& g : f) {
        CHECK(g["distortion"].get<double>() <= 1.1);
        CHECK(g["kind"] == "path-slice");
        CHECK(g["params"]["seed"] == 42);
    }
    CHECK(slurp("r.csv").rfind("map_id,pairs,max_stretch,min_stretch,distortion,seed\n", 0) == 0);
    std::string bytes = slurp("f.json"), report = slurp("r.csv");
    REQUIRE(run("decompose --scene s.json --epsilon 0.1 --out f.json --report r.csv") == 0);
    CHECK(slurp("f.json") == bytes);
    CHECK(slurp("r.csv") == report);

    CHECK(run("verify --scene s.json --factors f.json --pairs 4000 --samples 2000 --report v.csv") == 0);
    CHECK(slurp("v.csv").find(",4000,") != std::string::npos);

    // a single factor would have distortion ~12.65 > 11 at L = 2, so ε = 10 still splits once
    REQUIRE(run("decompose --scene s.json --epsilon 10 --out f10.json") == 0);
    CHECK(load("f10.json").size() == 2);
    REQUIRE(run("decompose --scene s.json --epsilon 20 --out f20.json") == 0);
    CHECK(load("f20.json").size() == 1);

    CHECK(run("decompose --scene s.json --epsilon 0.1 --budget 3 --out g.json") == 4);
    CHECK(run("decompose --scene s.json --epsilon 0.1 --out g.json --budget 3") == 4);
    CHECK(std::system(("cd '" + kWork.string() + "' && MTX_BUDGET=3 '" MTX_BIN
                       "' decompose --scene s.json --out g.json >/dev/null 2>&1")
                          .c_str()) != 0);

    // negative controls: declared distortion 2, and a factor that really stretches by 2
    auto bad = f;
    bad[0]["distortion"] = 2.0;
    spit("bad.json", bad.dump());
    CHECK(run("verify --scene s.json --factors bad.json --pairs 2000 --samples 1000") == 6);
    auto stretched = f;
    stretched[0] = {{"interval", f[0]["interval"]},
                    {"distortion", 1.0},
                    {"kind", "similarity"},
                    {"params", {{"scale", 2.0}, {"rotation", 0.0}, {"tx", 0.0}, {"ty", 0.0}}}};
    spit("stretch.json", stretched.dump());
    CHECK(run("verify --scene s.json --factors stretch.json --pairs 2000 --samples 1000") == 6);
    auto gap = f;
    gap.erase(gap.begin());
    spit("gap.json", gap.dump());
    CHECK(run("verify --scene s.json --factors gap.json --pairs 2000 --samples 1000") == 6);
    spit("junk.json", "{\"not\": \"factors\"}");
    CHECK(run("verify --scene s.json --factors junk.json") == 2);

    auto scene = load("s.json");
    scene["schema"] = 2;
    spit("s2.json", scene.dump());
    CHECK(run("verify --scene s2.json --factors f.json") == 2);
}

TEST_CASE_FIXTURE(Fresh, "render")
{
    REQUIRE(run("build --alpha 0.5 --depth 2 --out s.json") == 0);
    REQUIRE(run("rings --scene s.json") == 0);
    REQUIRE(run("render --scene s.json --frames 3 --outdir fr") == 0);
    CHECK(fs::exists(kWork / "fr/0000.svg"));
    CHECK(fs::exists(kWork / "fr/0002.svg"));
    CHECK(!fs::exists(kWork / "fr/0003.svg"));
    std::string first = slurp("fr/0000.svg"), last = slurp("fr/0002.svg");
    CHECK(first.find("<svg") == 0);
    CHECK(first != last);
    REQUIRE(run("render --scene s.json --frames 3 --outdir fr2") == 0);
    CHECK(slurp("fr2/0000.svg") == first);
    CHECK(slurp("fr2/0002.svg") == last);
    REQUIRE(run("render --scene s.json --frames 1 --outdir one") == 0);
    CHECK(fs::exists(kWork / "one/0000.svg"));
    spit("blocker", "x");
    CHECK(run("render --scene s.json --frames 2 --outdir blocker/sub") == 5);
}

TEST_CASE_FIXTURE(Fresh, "probe of the translated-bump fixture")
{
    REQUIRE(run("build --alpha 0.5 --depth 0 --fixture example33 --out ex.json") == 0);
    CHECK(run("verify --scene ex.json --probe --report p.csv") == 0);
    CHECK(slurp("err.txt").find("warning") != std::string::npos);
    CHECK(slurp("p.csv").rfind("s,t,displacement,distortion\n", 0) == 0);
}
