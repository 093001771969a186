#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "scenario.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const std::string& file, const std::string& out_dir, unsigned threads, std::uint64_t seed) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        std::cerr << file << ": cannot open\n";
        return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::string stem = fs::path(file).stem().string();
    coarsetool::Scenario sc;
    try {
        sc = coarsetool::parse_scenario(buf.str(), stem);
    } catch (const coarsetool::ScenarioError& e) {
        std::cerr << file << ":" << e.line << ": " << e.what() << "\n";
        return 1;
    }
    auto res = coarsetool::run_scenario(sc, {threads, seed});
    fs::path dir = out_dir.empty() ? fs::path(file).parent_path() : fs::path(out_dir);
    if (!dir.empty()) fs::create_directories(dir);
    fs::path js = dir / (stem + ".report.json"), txt = dir / (stem + ".report.txt");
    std::ofstream(js, std::ios::binary) << res.report.dump(2) << "\n";
    std::string text = coarsetool::render_text(res.report);
    std::ofstream(txt, std::ios::binary) << text;
    std::cout << text;
    return res.exit_code;
}

}

int main(int argc, char** argv) {
    CLI::App app{"Finite-window coarse topology analyses"};
    app.require_subcommand(1);
    std::string out_dir;
    unsigned threads = 1;
    std::uint64_t seed = 0;
    app.add_option("--out", out_dir, "directory for report files (default: next to the scenario)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--seed", seed, "dispatch-order seed; never changes verdicts");

    std::string file;
    auto* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("file", file, "scenario JSON")->required();
    run->fallthrough();

    auto* fixtures = app.add_subcommand("fixtures", "list the built-in fixtures");

    std::string analysis;
    auto* describe = app.add_subcommand("describe", "document the parameters of an analysis");
    describe->add_option("analysis", analysis)->required();

    CLI11_PARSE(app, argc, argv);

    if (*run) return cmd_run(file, out_dir, threads, seed);
    if (*fixtures) {
        for (const auto& f : coarse::list_fixtures()) std::cout << f.name << "  " << f.description << "\n";
        return 0;
    }
    try {
        std::cout << coarsetool::describe_analysis(analysis);
    } catch (const coarse::Error& e) {
        std::string names;
        for (const auto& d : coarsetool::analysis_docs()) names += " " + d.name;
        std::cerr << e.what() << "\nknown analyses:" << names << "\n";
        return 1;
    }
    return 0;
}
