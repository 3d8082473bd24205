#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "kitchen/experiment.hpp"

namespace fs = std::filesystem;
using namespace kitchen;

namespace {

void writeFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kitchen layout synthesis for human-robot cooking"};

  std::string configPath;
  std::optional<std::uint64_t> seed;
  int runs = 1;
  std::vector<std::string> modes;
  std::vector<std::string> rooms{"regular"};
  std::optional<int> iterations;
  std::string outDir;
  bool render = true;
  bool alwaysInfer = false;
  int threads = 1;
  bool timing = false;

  app.add_option("-c,--config", configPath, "Problem configuration (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("-s,--seed", seed, "First run seed (default: config value)");
  app.add_option("-n,--runs", runs, "Runs per room and mode, seeds seed..seed+runs-1")->check(CLI::PositiveNumber);
  app.add_option("-m,--mode", modes, "together, separate or both (comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"together", "separate"}));
  app.add_option("-r,--room", rooms, "regular, small, lshape (comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"regular", "small", "lshape"}));
  app.add_option("-i,--iterations", iterations, "Override the annealing iteration count")->check(CLI::NonNegativeNumber);
  app.add_option("-o,--out", outDir, "Output directory (default: $KITCHEN_OUT_DIR or ./out)");
  app.add_flag("--render,!--no-render", render, "Write an SVG per Pareto member");
  app.add_flag("--always-infer", alwaysInfer, "Plan the robot against the predicted human from the start");
  app.add_option("-j,--threads", threads, "Worker threads for independent runs")->check(CLI::PositiveNumber);
  app.add_flag("--timing", timing, "Include wall-clock times in the report");

  CLI11_PARSE(app, argc, argv);

  if (outDir.empty()) {
    const char* env = std::getenv("KITCHEN_OUT_DIR");
    outDir = env && *env ? env : "out";
  }

  try {
    const ProblemConfig config = loadConfig(configPath);
    ExperimentOptions opts;
    opts.seed = seed;
    opts.runs = runs;
    for (const std::string& m : modes) opts.modes.push_back(annealModeFromString(m));
    opts.rooms.clear();
    for (const std::string& r : rooms) opts.rooms.push_back(roomVariantFromString(r));
    opts.iterations = iterations;
    opts.alwaysInfer = alwaysInfer;
    opts.threads = threads;

    const RunReport report = runExperiment(config, opts);

    const fs::path out(outDir);
    fs::create_directories(out);
    writeFile(out / "report.json", reportToJson(report, timing).dump(2) + "\n");
    if (render) {
      for (const RunGroup& g : report.groups) {
        const std::string stem = std::string(toString(g.room)) + "_" + toString(g.mode);
        for (std::size_t i = 0; i < g.pareto.size(); ++i) {
          const Solution& s = g.pareto.members()[i];
          writeFile(out / (stem + "_" + std::to_string(i) + ".svg"), renderSvg(s.layout, &s.outcome));
        }
      }
    }

    for (const RunGroup& g : report.groups) {
      std::cout << toString(g.room) << " " << toString(g.mode) << ": " << g.pareto.size()
                << " Pareto member(s)";
      if (!g.pareto.empty()) {
        double best = g.pareto.members().front().totalCost;
        for (const Solution& s : g.pareto.members()) best = std::min(best, s.totalCost);
        std::cout << ", lowest total cost " << best;
      }
      std::cout << "\n";
      for (const RunRecord& r : g.runs) {
        if (!r.result.diagnostic.empty()) std::cerr << "  seed " << r.seed << ": " << r.result.diagnostic << "\n";
      }
      for (const std::string& msg : g.rejected) std::cerr << "  rejected " << msg << "\n";
    }
    std::cout << "report written to " << (out / "report.json").string() << "\n";
    if (!report.hasValidSolution()) {
      std::cerr << "no valid solution in any run\n";
      return 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
