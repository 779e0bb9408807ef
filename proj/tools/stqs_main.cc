// Copyright 2026 The STQS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stqs/config.h"

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

void apply(stqs::ParsedConfig& pc, const Overrides& o) {
  if (!o.out.empty()) pc.manifest.output_path = o.out;
  if (!o.format.empty()) {
    if (o.format == "csv") {
      pc.manifest.format = stqs::OutputFormat::csv;
    } else if (o.format == "jsonl") {
      pc.manifest.format = stqs::OutputFormat::jsonl;
    } else {
      throw stqs::ConfigError("--format must be csv or jsonl");
    }
  }
  if (o.seed) {
    pc.manifest.master_seed = *o.seed;
    pc.experiment.seed = *o.seed;
  }
  if (o.jobs) {
    if (*o.jobs < 1) throw stqs::ConfigError("--jobs must be at least 1");
    pc.manifest.jobs = *o.jobs;
  }
}

int run_parsed(stqs::ParsedConfig pc, const Overrides& o) {
  apply(pc, o);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!pc.manifest.output_path.empty()) {
    const fs::path p(pc.manifest.output_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    file.open(p);
    if (!file) throw stqs::ConfigError(pc.manifest.output_path + ": output path is not writable");
    out = &file;
  }
  const stqs::ExecutionSummary s = stqs::execute(pc, *out, std::cerr);
  std::cerr << "rows=" << s.rows << " failed=" << s.failed << " wall_time_s=" << s.wall_seconds << "\n";
  return s.exit_code;
}

fs::path manifest_dir() {
  if (fs::exists("manifests")) return "manifests";
  return STQS_MANIFEST_DIR;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatiotemporal quantum sensing simulator"};
  app.set_version_flag("--version", std::string(STQS_VERSION));
  app.require_subcommand(1);

  Overrides o;
  std::string config_path;
  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output file (default stdout)");
    sub->add_option("--format", o.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--jobs", o.jobs, "Worker threads over grid points");
  };

  CLI::App* run = app.add_subcommand("run", "Execute a manifest");
  run->add_option("--config", config_path, "YAML manifest")->required();
  add_flags(run);

  CLI::App* validate = app.add_subcommand("validate", "Parse a manifest and print the effective config");
  validate->add_option("--config", config_path, "YAML manifest")->required();

  app.add_subcommand("profiles", "Print the shipped noise profiles");

  std::string figure;
  CLI::App* repro = app.add_subcommand("repro", "Run the shipped manifest for a figure");
  repro->add_option("figure", figure, "Figure id: 5, 8, 9, 10, 11, 12, 14, 15, 16 or 17")->required();
  add_flags(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return run_parsed(stqs::parse_config(config_path), o);
    if (*validate) {
      const stqs::ParsedConfig pc = stqs::parse_config(config_path);
      const auto grid = stqs::expand_grid(pc);
      std::size_t bad = 0;
      for (const auto& g : grid) {
        if (!g.error.empty()) {
          ++bad;
          std::cerr << "warning: grid point " << (&g - grid.data()) << ": " << g.error << "\n";
        }
      }
      std::cout << stqs::emit_config(pc);
      std::cerr << grid.size() << " grid points, " << bad << " invalid, "
                << grid.size() * static_cast<std::size_t>(pc.manifest.repetitions) << " rows\n";
      return 0;
    }
    if (app.got_subcommand("profiles")) {
      std::cout << stqs::describe_profiles();
      return 0;
    }
    if (*repro) {
      std::string id = figure;
      if (id.rfind("fig", 0) == 0) id = id.substr(3);
      const fs::path path = manifest_dir() / ("fig" + id + ".yaml");
      if (!fs::exists(path)) {
        std::cerr << "error: no shipped manifest for figure '" << figure << "'\n";
        return 1;
      }
      return run_parsed(stqs::parse_config(path.string()), o);
    }
  } catch (const stqs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
