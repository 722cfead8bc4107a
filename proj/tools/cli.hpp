#pragma once

#include "vbgi/camera.hpp"
#include "vbgi/passes.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace vbgi::cli {

enum ExitCode { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// Runs the `vbgi` command line. Output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Flat key=value file. Blank lines and lines starting with '#' are ignored.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& kv);

/// Camera round trip through a manifest (camera.* keys).
void store_camera(const CameraModel& camera, KeyValues& kv);
CameraModel load_camera(const KeyValues& kv);

struct BenchRow {
    double radius = 0.0;
    int samples = 0;
    double seconds = 0.0;  // best of the repeats
};

struct BenchOptions {
    std::string scene = "poles";
    int width = 128;
    int height = 128;
    int repeats = 3;
    int threads = 1;
};

/// Best-of-`repeats` wall time of one AO/GI frame for each (radius, N_s).
std::vector<BenchRow> run_bench(const BenchOptions& options,
                                const std::vector<std::pair<double, int>>& grid);

/// The radius/sample-count rows used by `vbgi bench`.
const std::vector<std::pair<double, int>>& bench_grid();

}  // namespace vbgi::cli
