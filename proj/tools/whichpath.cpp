// whichpath: presence signals of pre- and postselected particles in
// interferometers.
//
//   whichpath run <preset|file.ifz> [--mode analytic|fd] [--epsilon E] [--probe ID]
//                 [--condition MARKER] [--format table|tsv|json] [--magnitude] [--momentum P]
//   whichpath sweep <preset|file.ifz> --probe ID [--epsilons 1e-2,1e-3,1e-4] [--condition MARKER]
//   whichpath verify [file.ifz ...]
//   whichpath presets [--show NAME] [--export DIR]
//
// Exit status: 0 success, 1 verify failure, 2 usage/parse/lookup error,
// 3 divergent postselection.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "whichpath/presence.hpp"
#include "whichpath/presets.hpp"
#include "whichpath/report_format.hpp"
#include "whichpath/scenario.hpp"
#include "whichpath/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitDivergent = 3;

struct InputError {
    std::string message;
};

std::optional<whichpath::Scenario> loadFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    whichpath::ParseResult r = whichpath::parse(text);
    std::cerr << r.errorText(path);
    if (!r.ok()) throw InputError{"cannot parse '" + path + "'"};
    return std::move(*r.scenario);
}

whichpath::Scenario resolve(const std::string& input) {
    if (whichpath::isPreset(input)) return whichpath::buildPreset(input).scenario;
    if (std::filesystem::is_regular_file(input)) return *loadFile(input);
    throw InputError{"'" + input + "' is neither a preset name nor a readable .ifz file"};
}

std::vector<double> parseEpsilons(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || !(v > 0.0)) throw InputError{"bad epsilon '" + item + "'"};
        out.push_back(v);
    }
    if (out.empty()) throw InputError{"empty epsilon list"};
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Presence of pre- and postselected particles in interferometers"};
    app.require_subcommand(1);

    std::string input;
    std::string mode = "analytic";
    double epsilon = 1e-4;
    std::optional<std::string> probe, condition;
    std::string format = "table";
    bool magnitude = false;
    std::optional<double> momentum;

    auto* run = app.add_subcommand("run", "Report alpha and the weak-value oracle per probe site");
    run->add_option("input", input, "Preset name or .ifz file")->required();
    run->add_option("--mode", mode, "analytic or fd")->check(CLI::IsMember({"analytic", "fd"}));
    run->add_option("--epsilon", epsilon, "Probe strength for fd mode")->check(CLI::PositiveNumber);
    run->add_option("--probe", probe, "Report only this probe site");
    run->add_option("--condition", condition, "Condition on the particle passing this marker");
    run->add_option("--format", format, "table, tsv or json")->check(CLI::IsMember({"table", "tsv", "json"}));
    run->add_flag("--magnitude", magnitude, "Print |alpha| only");
    run->add_option("--momentum", momentum, "Particle momentum; adds the mirror kick column");

    std::string sweepInput, sweepProbe, epsList = "1e-2,1e-3,1e-4";
    std::optional<std::string> sweepCondition;
    auto* sweep = app.add_subcommand("sweep", "Finite-difference alpha over a list of probe strengths (TSV)");
    sweep->add_option("input", sweepInput, "Preset name or .ifz file")->required();
    sweep->add_option("--probe", sweepProbe, "Probe site")->required();
    sweep->add_option("--epsilons", epsList, "Comma-separated probe strengths");
    sweep->add_option("--condition", sweepCondition, "Condition on the particle passing this marker");

    std::vector<std::string> verifyFiles;
    auto* verify = app.add_subcommand("verify", "Check every preset against its golden table");
    verify->add_option("files", verifyFiles, "Extra .ifz files whose expect lines are checked too");

    std::optional<std::string> show, exportDir;
    auto* presets = app.add_subcommand("presets", "List built-in presets");
    presets->add_option("--show", show, "Print the scenario text of one preset");
    presets->add_option("--export", exportDir, "Write every preset as NAME.ifz into this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*run) {
            const whichpath::Scenario s = resolve(input);
            whichpath::ReportOptions opt;
            opt.mode = mode == "fd" ? whichpath::ReportMode::FiniteDifference : whichpath::ReportMode::Analytic;
            opt.epsilon = epsilon;
            opt.momentum = momentum;
            opt.condition = condition;
            opt.onlySite = probe;
            const auto report = whichpath::fullReport(s.circuit, opt);
            whichpath::FormatOptions fo;
            fo.format = format == "json"  ? whichpath::OutputFormat::Json
                        : format == "tsv" ? whichpath::OutputFormat::Tsv
                                          : whichpath::OutputFormat::Table;
            fo.magnitudeOnly = magnitude;
            fo.scenario = s.name;
            fo.condition = condition;
            std::cout << whichpath::formatReport(report, fo);
            for (const auto& e : report.entries)
                if (e.divergent) return kExitDivergent;
            return kExitOk;
        }
        if (*sweep) {
            const whichpath::Scenario s = resolve(sweepInput);
            const auto rows = whichpath::sweepEpsilon(s.circuit, sweepProbe, parseEpsilons(epsList), sweepCondition);
            std::cout << whichpath::formatSweep(rows);
            return kExitOk;
        }
        if (*verify) {
            std::vector<whichpath::Scenario> extra;
            for (const auto& f : verifyFiles) {
                auto s = loadFile(f);
                if (!s) throw InputError{"cannot read '" + f + "'"};
                extra.push_back(std::move(*s));
            }
            const auto checks = whichpath::runVerify(extra);
            const whichpath::VerifyCheck* firstFailure = nullptr;
            std::size_t presetCount = 0;
            for (const auto& c : checks) {
                std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.kind << std::string(24 - std::min<std::size_t>(23, c.kind.size()), ' ')
                          << c.subject << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
                if (c.kind == "golden") ++presetCount;
                if (!c.pass && !firstFailure) firstFailure = &c;
            }
            std::cout << checks.size() << " checks over " << presetCount << " scenarios\n";
            if (firstFailure) {
                std::cout << "first failure: " << firstFailure->kind << " " << firstFailure->subject << ": "
                          << firstFailure->detail << "\n";
                return kExitVerifyFailed;
            }
            return kExitOk;
        }
        if (*presets) {
            if (show) {
                std::cout << whichpath::serialize(whichpath::buildPreset(*show).scenario);
                return kExitOk;
            }
            if (exportDir) {
                std::filesystem::create_directories(*exportDir);
                for (const auto& name : whichpath::listPresets()) {
                    std::ofstream out(std::filesystem::path(*exportDir) / (name + ".ifz"), std::ios::binary);
                    out << whichpath::serialize(whichpath::buildPreset(name).scenario);
                }
                return kExitOk;
            }
            for (const auto& name : whichpath::listPresets()) {
                const auto p = whichpath::buildPreset(name);
                std::cout << name << "\t" << p.description << "\n";
            }
            return kExitOk;
        }
    } catch (const InputError& e) {
        std::cerr << "whichpath: " << e.message << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "whichpath: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
