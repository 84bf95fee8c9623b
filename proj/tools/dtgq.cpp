#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dtgq/dynamics.hpp"
#include "dtgq/model.hpp"
#include "dtgq/parser.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSemantic = 1; // validation or expectation failure
constexpr int kExitUsage = 2;    // IO or parse failure

struct Loaded {
    dtgq::Model model;
    std::optional<dtgq::NumeralsMode> pragma;
};

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_diagnostics(const std::vector<dtgq::Diagnostic>& diags) {
    for (const auto& d : diags)
        std::cerr << dtgq::format_span(d.span) << ": "
                  << (d.severity == dtgq::Severity::Error ? "error" : "warning") << " [" << d.code
                  << "] " << d.message << "\n";
}

std::optional<dtgq::NumeralsMode> parse_mode(const std::string& text) {
    if (text == "exactly") return dtgq::NumeralsMode::Exactly;
    if (text == "atleast") return dtgq::NumeralsMode::AtLeast;
    return std::nullopt;
}

/// Flag beats pragma beats DTGQ_NUMERALS beats the exactly default.
dtgq::NumeralsMode effective_numerals(const std::optional<dtgq::NumeralsMode>& flag,
                                      const std::optional<dtgq::NumeralsMode>& pragma) {
    if (flag) return *flag;
    if (pragma) return *pragma;
    if (const char* env = std::getenv("DTGQ_NUMERALS"))
        if (auto mode = parse_mode(env)) return *mode;
    return dtgq::NumeralsMode::Exactly;
}

int load_model(const std::string& path, Loaded& out) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read model file '" << path << "'\n";
        return kExitUsage;
    }
    auto parsed = dtgq::parse_model(*text, path);
    print_diagnostics(parsed.diagnostics);
    if (!parsed.ok()) return kExitUsage;
    for (const auto& d : parsed.value.decls)
        if (const auto* p = std::get_if<dtgq::PragmaStmt>(&d))
            if (p->key == "numerals") out.pragma = parse_mode(p->value);
    out.model = dtgq::to_model(parsed.value);
    return kExitOk;
}

int load_script(const std::string& path, std::vector<dtgq::DiscourseStep>& out) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read script file '" << path << "'\n";
        return kExitUsage;
    }
    auto parsed = dtgq::parse_discourse(*text, path);
    print_diagnostics(parsed.diagnostics);
    if (!parsed.ok()) return kExitUsage;
    out = std::move(parsed.value);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized quantifiers over dependent types: model checking and "
                 "dynamic discourse interpretation on finite models"};
    app.require_subcommand(1);

    std::string modelPath, scriptPath, format = "text", numerals;
    bool failFast = false, trace = false;

    auto addCommon = [&](CLI::App* cmd, bool needScript) {
        cmd->add_option("--model", modelPath, "model file")->required();
        auto* s = cmd->add_option("--script", scriptPath, "discourse script");
        if (needScript) s->required();
        cmd->add_option("--format", format, "output format: text|json")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--numerals", numerals, "numeral reading: exactly|atleast")
            ->check(CLI::IsMember({"exactly", "atleast"}));
        cmd->add_flag("--fail-fast", failFast, "stop at the first failed expectation");
        cmd->add_flag("--trace", trace, "log chain membership decisions to stderr");
    };

    CLI::App* check = app.add_subcommand("check", "parse and validate a model file");
    check->add_option("--model", modelPath, "model file")->required();
    check->add_option("--format", format, "output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* run = app.add_subcommand("run", "run a discourse script against a model");
    addCommon(run, true);

    CLI::App* dump = app.add_subcommand("dump", "dump generated type carriers as JSON");
    addCommon(dump, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitUsage : kExitOk;
    }

    Loaded loaded;
    if (int rc = load_model(modelPath, loaded)) return rc;

    if (check->parsed()) {
        auto diags = dtgq::validate_model(loaded.model);
        print_diagnostics(diags);
        if (!diags.empty()) return kExitSemantic;
        if (format == "json")
            std::cout << dtgq::model_to_json(loaded.model).dump(2) << "\n";
        else
            std::cout << "ok: " << loaded.model.type_order().size() << " types, "
                      << loaded.model.predicate_order().size() << " predicates\n";
        return kExitOk;
    }

    auto modelDiags = dtgq::validate_model(loaded.model);
    print_diagnostics(modelDiags);
    if (!modelDiags.empty()) return kExitSemantic;
    loaded.model.set_numerals(
        effective_numerals(numerals.empty() ? std::nullopt : parse_mode(numerals),
                           loaded.pragma));

    if (dump->parsed() && scriptPath.empty()) {
        std::cout << dtgq::model_to_json(loaded.model).dump(2) << "\n";
        return kExitOk;
    }

    std::vector<dtgq::DiscourseStep> steps;
    if (int rc = load_script(scriptPath, steps)) return rc;

    dtgq::RunOptions opt;
    opt.failFast = failFast;
    if (trace) opt.eval.trace = &std::cerr;
    dtgq::StoryReport report = dtgq::run_story(steps, std::move(loaded.model), opt);

    if (dump->parsed()) {
        std::cout << report.dump_types().dump(2) << "\n";
    } else if (format == "json") {
        std::cout << report.to_json().dump(2) << "\n";
    } else {
        std::cout << report.to_text();
    }
    if (report.aborted) return kExitUsage;
    return report.all_expectations_pass() ? kExitOk : kExitSemantic;
}
