#include "cli.hpp"

#include "vbgi/baselines.hpp"
#include "vbgi/image_io.hpp"
#include "vbgi/metrics.hpp"
#include "vbgi/oracle.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <limits>
#include <optional>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace vbgi::cli {
namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "manifest.txt";

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& key) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError("manifest key '" + key + "': not a number: " + text);
    return v;
}

const std::string& require(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("manifest is missing '" + key + "'");
    return it->second;
}

// Averages per-frame images in double after rounding each frame to float,
// the same way accumulate() does for the bitmask passes.
template <typename Img, typename Render>
Img average_frames(int frames, Render&& render) {
    Img first = render(0);
    if (frames == 1) return first;
    Eigen::ArrayXXd sum = first.data().template cast<double>();
    for (int f = 1; f < frames; ++f) sum += render(f).data().template cast<double>();
    first.data() = (sum / frames).template cast<float>();
    return first;
}

struct RenderOptions {
    fs::path in_dir;
    fs::path out_dir;
    PassConfig config;
    std::string steps = "const";
    std::string method = "bitmask";
    std::string mode = "all";
    std::string env = "constant:1,1,1";
    std::string half_res = "off";
    int bounces = 1;
    int rays = 2;
    bool png = false;
};

struct Outputs {
    bool ao = false;
    bool gi = false;
    bool ambient = false;
};

Outputs outputs_for(const std::string& method, const std::string& mode) {
    Outputs available;
    if (method == "bitmask") available = {true, true, true};
    else if (method == "gtao" || method == "gtao-falloff") available = {true, false, false};
    else if (method == "bent" || method == "normal") available = {false, false, true};
    else if (method == "ssr") available = {false, true, false};
    if (mode == "all") return available;
    const Outputs wanted{mode == "ao", mode == "gi", mode == "ambient"};
    if ((wanted.ao && !available.ao) || (wanted.gi && !available.gi) || (wanted.ambient && !available.ambient))
        throw ConfigError("method '" + method + "' does not produce " + mode);
    return wanted;
}

GBuffer load_gbuffer(const fs::path& dir, const KeyValues& manifest) {
    GBuffer g;
    g.depth = load_pfm_gray(dir / "depth.pfm");
    g.normal = load_pfm_rgb(dir / "normal.pfm");
    g.light = load_pfm_rgb(dir / "light.pfm");
    g.albedo = load_pfm_rgb(dir / "albedo.pfm");
    g.camera = load_camera(manifest);
    if (const auto v = g.violations(); !v.empty()) throw std::runtime_error("invalid G-buffer: " + v.front());
    return g;
}

void write_image(const ImageF1& img, const fs::path& dir, const std::string& name, bool png) {
    save_pfm(img, dir / (name + ".pfm"));
    if (png) save_png(img, dir / (name + ".png"), ToneMap::ClampGamma22);
}

void write_image(const ImageF3& img, const fs::path& dir, const std::string& name, bool png) {
    save_pfm(img, dir / (name + ".pfm"));
    if (png) save_png(img, dir / (name + ".png"), ToneMap::ReinhardGamma22);
}

int cmd_synth(const std::string& scene_name, const BuiltinOptions& options, const fs::path& out_dir, int threads,
              std::ostream& out) {
    const BuiltinScene scene = builtin_scene(scene_name, options);
    const GBuffer g = synthesize_gbuffer(scene.scene, scene.camera, threads);
    fs::create_directories(out_dir);
    save_pfm(g.depth, out_dir / "depth.pfm");
    save_pfm(g.normal, out_dir / "normal.pfm");
    save_pfm(g.light, out_dir / "light.pfm");
    save_pfm(g.albedo, out_dir / "albedo.pfm");

    KeyValues kv;
    kv["scene"] = scene_name;
    kv["width"] = std::to_string(options.width);
    kv["height"] = std::to_string(options.height);
    kv["wall_thickness"] = format_double(options.wall_thickness);
    kv["seed"] = "0";
    store_camera(scene.camera, kv);
    write_file(out_dir / kManifest, format_key_values(kv));
    out << "wrote " << scene_name << " " << options.width << "x" << options.height << " G-buffer to "
        << out_dir.string() << "\n";
    return kOk;
}

int cmd_render(RenderOptions opt, std::ostream& out) {
    if (opt.half_res != "off") throw ConfigError("--half-res: only 'off' is supported");
    opt.config.step_mode = opt.steps == "exp" ? StepMode::Exponential : StepMode::Constant;
    opt.config.validate();
    if (opt.bounces < 1) throw ConfigError("--bounces must be >= 1");
    if (opt.bounces > 1 && (opt.method != "bitmask" || opt.config.frames != 1))
        throw ConfigError("--bounces > 1 needs --method bitmask and --frames 1");
    if (opt.rays < 1) throw ConfigError("--rays must be >= 1");
    const Outputs outputs = outputs_for(opt.method, opt.mode);
    const AmbientEnvironment env = AmbientEnvironment::parse(opt.env);

    KeyValues manifest = load_key_values(opt.in_dir / kManifest);
    const GBuffer g = load_gbuffer(opt.in_dir, manifest);
    const PassConfig& cfg = opt.config;
    const int frames = cfg.frames;

    fs::create_directories(opt.out_dir);
    if (outputs.ao) {
        ImageF1 ao;
        if (opt.method == "bitmask")
            ao = average_frames<ImageF1>(frames, [&](int f) { return render_ao_gi(g, cfg, f).ao; });
        else {
            const Falloff falloff = opt.method == "gtao" ? Falloff::None : Falloff::Linear;
            ao = average_frames<ImageF1>(frames, [&](int f) { return render_gtao(g, cfg, falloff, f); });
        }
        write_image(ao, opt.out_dir, "ao", opt.png);
    }
    if (outputs.gi) {
        ImageF3 gi;
        if (opt.method == "ssr")
            gi = average_frames<ImageF3>(frames, [&](int f) { return render_ssr_gi(g, cfg, opt.rays, f); });
        else if (opt.bounces > 1)
            gi = render_multibounce(g, cfg, opt.bounces);
        else
            gi = average_frames<ImageF3>(frames, [&](int f) { return render_ao_gi(g, cfg, f).gi; });
        write_image(gi, opt.out_dir, "gi", opt.png);
    }
    if (outputs.ambient) {
        ImageF3 ambient;
        if (opt.method == "bent")
            ambient = average_frames<ImageF3>(frames, [&](int f) { return render_bent_normal_ambient(g, cfg, env, f); });
        else if (opt.method == "normal")
            ambient = render_normal_ambient(g, env);
        else
            ambient = average_frames<ImageF3>(frames, [&](int f) { return render_ambient(g, cfg, env, f); });
        write_image(ambient, opt.out_dir, "ambient", opt.png);
    }

    // Keep the depth next to the outputs so `compare` can mask sky pixels.
    write_file(opt.out_dir / "depth.pfm", read_file(opt.in_dir / "depth.pfm"));
    manifest["render.method"] = opt.method;
    manifest["render.mode"] = opt.mode;
    manifest["render.radius"] = format_double(cfg.radius);
    manifest["render.samples"] = std::to_string(cfg.samples);
    manifest["render.slices"] = std::to_string(cfg.slices);
    manifest["render.sectors"] = std::to_string(cfg.sectors);
    manifest["render.thickness"] = format_double(cfg.thickness);
    manifest["render.thickness_linear"] = format_double(cfg.thickness_linear);
    manifest["render.steps"] = opt.steps;
    manifest["render.seed"] = std::to_string(cfg.seed);
    manifest["render.frames"] = std::to_string(cfg.frames);
    manifest["render.subregions"] = std::to_string(cfg.ambient_subregions);
    manifest["render.env"] = env.to_string();
    manifest["render.bounces"] = std::to_string(opt.bounces);
    manifest["render.rays"] = std::to_string(opt.rays);
    manifest["render.falloff"] = opt.method == "gtao-falloff" ? "linear" : "none";
    write_file(opt.out_dir / kManifest, format_key_values(manifest));
    out << "rendered " << opt.method << " (" << opt.mode << ") to " << opt.out_dir.string() << "\n";
    return kOk;
}

PixelMask mask_for(const fs::path& dir, std::size_t pixels) {
    const fs::path depth = dir / "depth.pfm";
    if (!fs::exists(depth)) return {};
    PixelMask mask = non_sky_mask(load_pfm_gray(depth));
    if (mask.size() != pixels) throw std::runtime_error("depth.pfm does not match the image size");
    return mask;
}

template <typename Img>
void write_diff(const Img& a, const Img& b, const fs::path& path) {
    Img diff = a;
    diff.data() = (a.data() - b.data()).abs();
    save_pfm(diff, path);
}

int cmd_compare(const fs::path& a_dir, const std::optional<fs::path>& b_dir, bool reference,
                const std::string& image, int rays, std::optional<double> max_distance,
                const std::optional<fs::path>& diff_path, int threads, std::ostream& out) {
    if (reference == b_dir.has_value()) throw ConfigError("compare needs either a second directory or --reference");
    const std::string file = image + ".pfm";
    if (reference) {
        if (image != "ao") throw ConfigError("--reference compares AO only");
        const KeyValues manifest = load_key_values(a_dir / kManifest);
        BuiltinOptions options;
        options.width = std::stoi(require(manifest, "width"));
        options.height = std::stoi(require(manifest, "height"));
        options.wall_thickness = parse_double(require(manifest, "wall_thickness"), "wall_thickness");
        const BuiltinScene scene = builtin_scene(require(manifest, "scene"), options);
        const CameraModel camera = load_camera(manifest);
        double radius = 2.0;
        if (max_distance) radius = *max_distance;
        else if (manifest.count("render.radius")) radius = parse_double(manifest.at("render.radius"), "render.radius");

        const ImageF1 a = load_pfm_gray(a_dir / file);
        const ImageF1 ref = world_ao_reference(scene.scene, camera, rays, radius, 0, threads);
        if (!a.same_shape(ref)) throw std::runtime_error("AO image does not match the manifest camera");
        PixelMask mask(a.pixel_count());
        const auto ids = primitive_ids(scene.scene, camera);
        for (std::size_t i = 0; i < ids.size(); ++i) mask[i] = ids[i] >= 0;
        out << format_report(image + " vs world reference", compare_images(a, ref, mask));
        if (diff_path) write_diff(a, ref, *diff_path);
        return kOk;
    }

    if (image == "ao") {
        const ImageF1 a = load_pfm_gray(a_dir / file);
        const ImageF1 b = load_pfm_gray(*b_dir / file);
        if (!a.same_shape(b)) throw std::runtime_error("images differ in size");
        const PixelMask m = mask_for(a_dir, a.pixel_count());
        out << format_report(image, compare_images(a, b, m));
        if (diff_path) write_diff(a, b, *diff_path);
    } else {
        const ImageF3 a = load_pfm_rgb(a_dir / file);
        const ImageF3 b = load_pfm_rgb(*b_dir / file);
        if (!a.same_shape(b)) throw std::runtime_error("images differ in size");
        const PixelMask m = mask_for(a_dir, a.pixel_count());
        out << format_report(image, compare_images(a, b, m));
        if (diff_path) write_diff(a, b, *diff_path);
    }
    return kOk;
}

int cmd_bench(const BenchOptions& options, std::ostream& out) {
    if (options.repeats < 1) throw ConfigError("--repeats must be >= 1");
    const auto rows = run_bench(options, bench_grid());
    out << "scene=" << options.scene << " size=" << options.width << "x" << options.height
        << " repeats=" << options.repeats << " threads=" << options.threads << "\n";
    out << "timings are advisory; only ratios are meaningful\n";
    out << std::left << std::setw(8) << "radius" << std::setw(9) << "samples" << std::setw(12) << "ms"
        << "relative\n";
    for (const auto& row : rows) {
        out << std::left << std::setw(8) << row.radius << std::setw(9) << row.samples << std::setw(12)
            << std::fixed << std::setprecision(2) << row.seconds * 1e3 << std::setprecision(3)
            << row.seconds / rows.front().seconds << "\n";
        out.unsetf(std::ios::fixed);
    }
    const auto scaling = run_bench(options, {{2.0, 8}, {2.0, 32}});
    out << "scaling samples 32/8 at radius 2: " << std::fixed << std::setprecision(3)
        << scaling[1].seconds / scaling[0].seconds << "\n";
    out.unsetf(std::ios::fixed);
    return kOk;
}

// Config keys are long option names without the dashes. Values only fill
// options that were not given on the command line.
void apply_config(CLI::App& command, const KeyValues& kv) {
    for (const auto& [key, value] : kv) {
        CLI::Option* opt = command.get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") throw ConfigError("unknown config key '" + key + "'");
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("line " + std::to_string(number) + ": expected key=value");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

KeyValues load_key_values(const fs::path& path) { return parse_key_values(read_file(path)); }

std::string format_key_values(const KeyValues& kv) {
    std::string text;
    for (const auto& [k, v] : kv) text += k + "=" + v + "\n";
    return text;
}

void store_camera(const CameraModel& camera, KeyValues& kv) {
    kv["camera.width"] = std::to_string(camera.width);
    kv["camera.height"] = std::to_string(camera.height);
    kv["camera.fov"] = format_double(camera.vertical_fov);
    kv["camera.near"] = format_double(camera.near_plane);
    kv["camera.far"] = format_double(camera.far_plane);
    const Eigen::Matrix<double, 3, 4> m = camera.world_to_view.matrix().topRows<3>();
    std::string text;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) text += (text.empty() ? "" : ",") + format_double(m(r, c));
    kv["camera.world_to_view"] = text;
}

CameraModel load_camera(const KeyValues& kv) {
    CameraModel camera;
    camera.width = std::stoi(require(kv, "camera.width"));
    camera.height = std::stoi(require(kv, "camera.height"));
    camera.vertical_fov = parse_double(require(kv, "camera.fov"), "camera.fov");
    camera.near_plane = parse_double(require(kv, "camera.near"), "camera.near");
    camera.far_plane = parse_double(require(kv, "camera.far"), "camera.far");
    std::istringstream in(require(kv, "camera.world_to_view"));
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    std::string field;
    for (int i = 0; i < 12; ++i) {
        if (!std::getline(in, field, ',')) throw ConfigError("camera.world_to_view needs 12 values");
        m(i / 4, i % 4) = parse_double(field, "camera.world_to_view");
    }
    camera.world_to_view = Eigen::Isometry3d(m);
    camera.validate();
    return camera;
}

const std::vector<std::pair<double, int>>& bench_grid() {
    static const std::vector<std::pair<double, int>> grid = {{0.8, 8}, {1.0, 12}, {1.0, 16}, {2.0, 16}, {3.0, 16}};
    return grid;
}

std::vector<BenchRow> run_bench(const BenchOptions& options, const std::vector<std::pair<double, int>>& grid) {
    BuiltinOptions scene_options;
    scene_options.width = options.width;
    scene_options.height = options.height;
    const BuiltinScene scene = builtin_scene(options.scene, scene_options);
    const GBuffer g = synthesize_gbuffer(scene.scene, scene.camera, options.threads);
    std::vector<BenchRow> rows;
    for (const auto& [radius, samples] : grid) {
        PassConfig cfg;
        cfg.radius = radius;
        cfg.samples = samples;
        cfg.threads = options.threads;
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < options.repeats; ++r) {
            const auto start = std::chrono::steady_clock::now();
            const AoGi result = render_ao_gi(g, cfg);
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            best = std::min(best, elapsed.count());
        }
        rows.push_back({radius, samples, best});
    }
    return rows;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Screen-space AO, indirect diffuse and ambient lighting with visibility bitmasks", "vbgi"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Ray-cast a built-in scene into a G-buffer directory");
    std::string scene_name;
    BuiltinOptions scene_options;
    fs::path synth_out;
    int synth_threads = 0;
    synth->add_option("--scene", scene_name, "Scene name")->required();
    synth->add_option("--width", scene_options.width, "Image width")->check(CLI::Range(1, 16384));
    synth->add_option("--height", scene_options.height, "Image height")->check(CLI::Range(1, 16384));
    synth->add_option("--wall-thickness", scene_options.wall_thickness, "thin_wall panel thickness");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--threads", synth_threads, "Worker threads (0: all cores)");

    // render
    auto* render = app.add_subcommand("render", "Render AO / GI / ambient from a G-buffer directory");
    RenderOptions ro;
    std::optional<fs::path> render_config;
    render->add_option("--config", render_config, "key=value file with option defaults; flags override it");
    render->add_option("--in", ro.in_dir, "G-buffer directory")->required();
    render->add_option("--out", ro.out_dir, "Output directory")->required();
    render->add_option("--radius", ro.config.radius, "World-space sampling radius");
    render->add_option("--samples", ro.config.samples, "Steps per horizon side");
    render->add_option("--slices", ro.config.slices, "Slices per pixel per frame");
    render->add_option("--sectors", ro.config.sectors, "Visibility sectors per slice")
        ->check(CLI::IsMember({8, 16, 32, 64, 128}));
    render->add_option("--subregions", ro.config.ambient_subregions, "Ambient samples per slice");
    render->add_option("--thickness", ro.config.thickness, "Constant sample thickness");
    render->add_option("--thickness-linear", ro.config.thickness_linear, "Thickness growth per unit distance");
    render->add_option("--steps", ro.steps, "Step distribution")->check(CLI::IsMember({"const", "exp"}));
    render->add_option("--seed", ro.config.seed, "Sampling seed");
    render->add_option("--frames", ro.config.frames, "Frames to accumulate");
    render->add_option("--method", ro.method, "Integration method")
        ->check(CLI::IsMember({"bitmask", "gtao", "gtao-falloff", "bent", "ssr", "normal"}));
    render->add_option("--mode", ro.mode, "Outputs")->check(CLI::IsMember({"ao", "gi", "ambient", "all"}));
    render->add_option("--env", ro.env, "constant:r,g,b or gradient:r,g,b:r,g,b[:x,y,z]");
    render->add_option("--half-res", ro.half_res, "Reserved; only 'off' is implemented");
    render->add_option("--bounces", ro.bounces, "GI bounces (bitmask, single frame)");
    render->add_option("--rays", ro.rays, "Rays per pixel for --method ssr");
    render->add_option("--threads", ro.config.threads, "Worker threads (0: all cores)");
    render->add_flag("--png", ro.png, "Also write PNG previews");

    // compare
    auto* compare = app.add_subcommand("compare", "Compare two render directories or one against ray tracing");
    fs::path a_dir;
    std::optional<fs::path> b_dir;
    bool reference = false;
    std::string image = "ao";
    int rays = 256;
    std::optional<double> max_distance;
    std::optional<fs::path> diff_path;
    int compare_threads = 0;
    compare->add_option("a", a_dir, "Render directory")->required();
    compare->add_option("b", b_dir, "Second render directory");
    compare->add_flag("--reference", reference, "Compare AO against world-space ray-cast AO");
    compare->add_option("--image", image, "Image to compare")->check(CLI::IsMember({"ao", "gi", "ambient"}));
    compare->add_option("--rays", rays, "Reference rays per pixel")->check(CLI::PositiveNumber);
    compare->add_option("--max-dist", max_distance, "Reference ray length (default: render radius)");
    compare->add_option("--diff", diff_path, "Write |a - b| as PFM");
    compare->add_option("--threads", compare_threads, "Worker threads (0: all cores)");

    // bench
    auto* bench = app.add_subcommand("bench", "Relative timing over the radius / sample-count grid");
    BenchOptions bo;
    bench->add_option("--scene", bo.scene, "Scene name");
    bench->add_option("--width", bo.width, "Image width")->check(CLI::Range(1, 16384));
    bench->add_option("--height", bo.height, "Image height")->check(CLI::Range(1, 16384));
    bench->add_option("--repeats", bo.repeats, "Runs per configuration (best is kept)");
    bench->add_option("--threads", bo.threads, "Worker threads (0: all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsageError;
    }

    try {
        if (*render && render_config) apply_config(*render, load_key_values(*render_config));
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return dynamic_cast<const std::invalid_argument*>(&e) ? kUsageError : kRuntimeError;
    }

    try {
        if (*synth) return cmd_synth(scene_name, scene_options, synth_out, synth_threads, out);
        if (*render) return cmd_render(ro, out);
        if (*compare)
            return cmd_compare(a_dir, b_dir, reference, image, rays, max_distance, diff_path, compare_threads, out);
        if (*bench) return cmd_bench(bo, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kUsageError;
}

}  // namespace vbgi::cli
