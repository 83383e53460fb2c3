#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path scratch()
{
    const fs::path p = fs::temp_directory_path() / "pcv_test_cli";
    static bool fresh = false;
    if (!fresh) {
        fs::remove_all(p);
        fs::create_directories(p);
        fresh = true;
    }
    return p;
}

int run(const std::string& args, const fs::path& out)
{
    const std::string cmd = std::string(PCV_CLI) + " " + args + " > " + out.string() + " 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("gridinfo")
{
    const fs::path dir = scratch();
    REQUIRE(run("gridinfo --scheme default --png " + (dir / "grid.png").string(), dir / "gridinfo.txt") == 0);
    const std::string out = slurp(dir / "gridinfo.txt");
    CHECK(out.find("K = 233") != std::string::npos);
    CHECK(out.find("M = 243") != std::string::npos);
    CHECK(fs::file_size(dir / "grid.png") > 0);

    REQUIRE(run("gridinfo --scheme toy --png " + (dir / "toy.png").string(), dir / "toy.txt") == 0);
    CHECK(slurp(dir / "toy.txt").find("K = 17") != std::string::npos);
}

TEST_CASE("oracle reports do not depend on the job count")
{
    const fs::path dir = scratch();
    const std::string common = "oracle --scheme default --scenes 50 --seed 1 --report ";
    REQUIRE(run(common + (dir / "o1.json").string() + " --jobs 1", dir / "o1.txt") == 0);
    REQUIRE(run(common + (dir / "o8.json").string() + " --jobs 8", dir / "o8.txt") == 0);
    REQUIRE(run(common + (dir / "o1b.json").string() + " --jobs 1", dir / "o1b.txt") == 0);
    const std::string a = slurp(dir / "o1.json");
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir / "o8.json"));
    CHECK(a == slurp(dir / "o1b.json"));
    const auto report = nlohmann::json::parse(a);
    CHECK(report["scenes"] == 50);

    const auto config = nlohmann::json::parse(slurp(dir / "o8.config.json"));
    CHECK(config["jobs"] == 8);
    CHECK(config["seed"] == 1);
}

TEST_CASE("eval-pq on identical archives")
{
    const fs::path dir = scratch();
    REQUIRE(run("oracle --scheme simple --scenes 4 --seed 2 --export " + (dir / "ex").string(), dir / "ex.txt") ==
            0);
    const std::string gt = (dir / "ex" / "gt.json").string();
    REQUIRE(run("eval-pq --pred " + gt + " --gt " + gt + " --report " + (dir / "same.json").string(),
                dir / "same.txt") == 0);
    const auto same = nlohmann::json::parse(slurp(dir / "same.json"));
    CHECK(same["stats"]["summary"]["PQ"] == 100.0);

    const std::string pred = (dir / "ex" / "pred_simple.json").string();
    REQUIRE(run("eval-pq --pred " + pred + " --gt " + gt + " --jobs 1 --report " + (dir / "e1.json").string(),
                dir / "e1.txt") == 0);
    REQUIRE(run("eval-pq --pred " + pred + " --gt " + gt + " --jobs 8 --report " + (dir / "e8.json").string(),
                dir / "e8.txt") == 0);
    CHECK(slurp(dir / "e1.json") == slurp(dir / "e8.json"));
}

TEST_CASE("infer and render from a seed")
{
    const fs::path dir = scratch();
    REQUIRE(run("infer --seed 5 --out " + (dir / "inf.json").string(), dir / "inf.txt") == 0);
    const std::string out = (dir / "inf.json").string();
    REQUIRE(run("eval-pq --pred " + out + " --gt " + out, dir / "self.txt") == 0);
    CHECK(slurp(dir / "self.txt").find("100.0") != std::string::npos);

    REQUIRE(run("render --seed 5 --heatmap " + (dir / "h.png").string() + " --peaks " + (dir / "p.png").string() +
                    " --masks " + (dir / "m.png").string(),
                dir / "render.txt") == 0);
    CHECK(fs::file_size(dir / "h.png") > 0);
    CHECK(fs::file_size(dir / "m.png") > 0);
}

TEST_CASE("errors exit non-zero")
{
    const fs::path dir = scratch();
    CHECK(run("gridinfo --scheme hexagonal", dir / "bad1.txt") != 0);
    CHECK(run("eval-pq --pred /nonexistent.json --gt /nonexistent.json", dir / "bad2.txt") != 0);
    CHECK(slurp(dir / "bad2.txt").find("nonexistent") != std::string::npos);
    CHECK(run("oracle --scenes 1 --simd nosuchisa", dir / "bad3.txt") != 0);
}
