#include "cli.hpp"

#include "vbgi/image_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

namespace vbgi {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        root_ = fs::temp_directory_path() / ("vbgi_cli_" + std::string(info->name()));
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    void TearDown() override { fs::remove_all(root_); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "vbgi");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        out_.str("");
        err_.str("");
        return cli::run(int(argv.size()), argv.data(), out_, err_);
    }

    std::string path(const std::string& name) const { return (root_ / name).string(); }

    fs::path root_;
    std::ostringstream out_;
    std::ostringstream err_;
};

TEST_F(Cli, SynthWritesFourBuffersAndManifest) {
    ASSERT_EQ(run({"synth", "--scene", "flat", "--width", "64", "--height", "64", "--out", path("g")}), 0)
        << err_.str();
    // 17-byte header ("Pf\n64 64\n-1.0000\n") plus 4 bytes per channel.
    EXPECT_EQ(fs::file_size(path("g/depth.pfm")), 17u + 64 * 64 * 4);
    for (const char* name : {"normal.pfm", "light.pfm", "albedo.pfm"})
        EXPECT_EQ(fs::file_size(root_ / "g" / name), 17u + 64 * 64 * 12) << name;
    const auto manifest = cli::load_key_values(path("g/manifest.txt"));
    EXPECT_EQ(manifest.at("scene"), "flat");
    EXPECT_EQ(manifest.at("seed"), "0");
    EXPECT_EQ(cli::load_camera(manifest).width, 64);
}

TEST_F(Cli, SynthIsReproducible) {
    ASSERT_EQ(run({"synth", "--scene", "poles", "--width", "32", "--height", "32", "--out", path("a")}), 0);
    ASSERT_EQ(run({"synth", "--scene", "poles", "--width", "32", "--height", "32", "--out", path("b"), "--threads",
                   "3"}),
              0);
    for (const char* name : {"depth.pfm", "normal.pfm", "light.pfm", "albedo.pfm", "manifest.txt"})
        EXPECT_EQ(read_file(root_ / "a" / name), read_file(root_ / "b" / name)) << name;
}

TEST_F(Cli, UsageErrorsExitWithTwo) {
    EXPECT_EQ(run({"synth", "--scene", "bistro", "--out", path("g")}), 2);
    EXPECT_EQ(run({"synth", "--out", path("g")}), 2);
    EXPECT_EQ(run({"frobnicate"}), 2);
    ASSERT_EQ(run({"synth", "--scene", "poles", "--width", "32", "--height", "32", "--out", path("g")}), 0);
    EXPECT_EQ(run({"render", "--in", path("g"), "--out", path("r"), "--sectors", "33"}), 2);
    EXPECT_EQ(run({"render", "--in", path("g"), "--out", path("r"), "--method", "gtao", "--mode", "gi"}), 2);
    EXPECT_EQ(run({"render", "--in", path("g"), "--out", path("r"), "--half-res", "on"}), 2);
    EXPECT_EQ(run({"render", "--in", path("g"), "--out", path("r"), "--env", "plaid:1,2,3"}), 2);
}

TEST_F(Cli, MissingInputIsARuntimeError) {
    EXPECT_EQ(run({"render", "--in", path("nothing"), "--out", path("r")}), 1);
}

TEST_F(Cli, RenderDefaultsOnPoles) {
    ASSERT_EQ(run({"synth", "--scene", "poles", "--width", "48", "--height", "48", "--out", path("g")}), 0);
    ASSERT_EQ(run({"render", "--in", path("g"), "--out", path("r"), "--png"}), 0) << err_.str();
    const ImageF1 ao = load_pfm_gray(path("r/ao.pfm"));
    EXPECT_TRUE((ao.data() >= 0.0f).all() && (ao.data() <= 1.0f).all());
    for (const char* name : {"gi.pfm", "ambient.pfm"}) {
        const ImageF3 img = load_pfm_rgb(root_ / "r" / name);
        EXPECT_TRUE((img.data() >= 0.0f).all() && img.data().allFinite()) << name;
    }
    EXPECT_TRUE(fs::exists(path("r/ao.png")));
    EXPECT_EQ(cli::load_key_values(path("r/manifest.txt")).at("render.sectors"), "32");
}

TEST_F(Cli, RenderIsByteReproducible) {
    ASSERT_EQ(run({"synth", "--scene", "fence", "--width", "32", "--height", "32", "--out", path("g")}), 0);
    const std::vector<std::string> flags = {"--radius", "1.5", "--slices", "2", "--seed", "5", "--frames", "2"};
    auto render = [&](const std::string& out, const std::string& threads) {
        std::vector<std::string> args = {"render", "--in", path("g"), "--out", path(out), "--threads", threads};
        args.insert(args.end(), flags.begin(), flags.end());
        return run(args);
    };
    ASSERT_EQ(render("r1", "1"), 0);
    ASSERT_EQ(render("r2", "8"), 0);
    for (const char* name : {"ao.pfm", "gi.pfm", "ambient.pfm", "manifest.txt"})
        EXPECT_EQ(read_file(root_ / "r1" / name), read_file(root_ / "r2" / name)) << name;
}

TEST_F(Cli, ConfigFileAndFlagOverride) {
    ASSERT_EQ(run({"synth", "--scene", "poles", "--width", "32", "--height", "32", "--out", path("g")}), 0);
    write_file(root_ / "cfg.txt", "# comment\nradius=1.25\nsamples=4\nsectors=64\n");
    ASSERT_EQ(run({"render", "--in", path("g"), "--out", path("r"), "--config", path("cfg.txt"), "--samples", "6",
                   "--mode", "ao"}),
              0)
        << err_.str();
    const auto m = cli::load_key_values(path("r/manifest.txt"));
    EXPECT_EQ(m.at("render.radius"), "1.25");
    EXPECT_EQ(m.at("render.samples"), "6");
    EXPECT_EQ(m.at("render.sectors"), "64");
    EXPECT_FALSE(fs::exists(path("r/gi.pfm")));
    write_file(root_ / "bad.txt", "radius=1\nwibble=3\n");
    EXPECT_EQ(run({"render", "--in", path("g"), "--out", path("r"), "--config", path("bad.txt")}), 2);
}

TEST_F(Cli, EveryMethodRenders) {
    ASSERT_EQ(run({"synth", "--scene", "corner", "--width", "32", "--height", "32", "--out", path("g")}), 0);
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"gtao", "ao"}, {"gtao-falloff", "ao"}, {"bent", "ambient"}, {"normal", "ambient"}, {"ssr", "gi"}};
    for (const auto& [method, mode] : cases) {
        EXPECT_EQ(run({"render", "--in", path("g"), "--out", path(method), "--method", method, "--mode", mode}), 0)
            << method << ": " << err_.str();
        EXPECT_TRUE(fs::exists(root_ / method / (mode + ".pfm"))) << method;
    }
    EXPECT_EQ(run({"render", "--in", path("g"), "--out", path("mb"), "--mode", "gi", "--bounces", "2"}), 0);
}

TEST_F(Cli, CompareIdenticalDirectories) {
    ASSERT_EQ(run({"synth", "--scene", "poles", "--width", "32", "--height", "32", "--out", path("g")}), 0);
    ASSERT_EQ(run({"render", "--in", path("g"), "--out", path("r"), "--mode", "ao"}), 0);
    ASSERT_EQ(run({"compare", path("r"), path("r"), "--image", "ao", "--diff", path("d.pfm")}), 0) << err_.str();
    EXPECT_NE(out_.str().find("rmse=0\n"), std::string::npos) << out_.str();
    EXPECT_TRUE((load_pfm_gray(path("d.pfm")).data() == 0.0f).all());
}

TEST_F(Cli, CompareAgainstWorldReference) {
    ASSERT_EQ(run({"synth", "--scene", "sphere_on_plane", "--width", "24", "--height", "24", "--out", path("g")}), 0);
    ASSERT_EQ(run({"render", "--in", path("g"), "--out", path("r"), "--mode", "ao"}), 0);
    ASSERT_EQ(run({"compare", path("r"), "--reference", "--rays", "16"}), 0) << err_.str();
    EXPECT_NE(out_.str().find("rmse="), std::string::npos);
}

TEST(CliKeyValues, RoundTrip) {
    const cli::KeyValues kv = {{"a", "1"}, {"b.c", "x y"}};
    EXPECT_EQ(cli::parse_key_values(cli::format_key_values(kv)), kv);
    EXPECT_THROW(cli::parse_key_values("no equals sign\n"), std::invalid_argument);
    CameraModel cam = CameraModel::look_at({1, 2, 3}, {0, 0, 0}, Vec3::UnitY(), 40, 30, 0.9);
    cli::KeyValues stored;
    cli::store_camera(cam, stored);
    const CameraModel back = cli::load_camera(stored);
    EXPECT_EQ(back.width, 40);
    EXPECT_EQ(back.vertical_fov, 0.9);
    EXPECT_TRUE(back.world_to_view.matrix() == cam.world_to_view.matrix());
}

TEST(CliBench, ReportsEveryGridRow) {
    cli::BenchOptions opts;
    opts.width = 24;
    opts.height = 24;
    opts.repeats = 1;
    const auto rows = cli::run_bench(opts, cli::bench_grid());
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0].radius, 0.8);
    EXPECT_EQ(rows[0].samples, 8);
    for (const auto& r : rows) EXPECT_GT(r.seconds, 0.0);
}

}  // namespace
}  // namespace vbgi
