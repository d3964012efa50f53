#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mqv/driver.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mqv: exact verification workbench for multiplicative quiver varieties"};
    app.require_subcommand(1);

    std::vector<std::string> instances;
    std::string report_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long prime = 0;
    bool prime_set = false;
    int jobs = 1;
    bool first_order = false;
    bool timings = false;
    std::string expr;

    for (const char* name :
         {"validate", "identities", "sample", "check", "stability", "ext", "verify-all"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--instance", instances, "instance file(s), JSON")->required();
        sub->add_option("--report", report_path, "write the report here (stdout otherwise)");
        sub->add_option("--seed", seed, "override the instance seed")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--prime", prime, "working prime for stability certificates")
            ->each([&](const std::string&) { prime_set = true; });
        sub->add_option("--jobs", jobs, "run independent instances in parallel");
        sub->add_flag("--first-order", first_order,
                      "enable the eps-linearized first-order mode of the complex report");
        sub->add_flag("--timings", timings,
                      "record wall-clock timings (breaks byte-identical reports)");
        if (std::string(name) == "identities")
            sub->add_option("--expr", expr, "normalize this path expression into the report");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    mqv::RunOptions opts;
    if (seed_set) opts.seed = seed;
    if (prime_set) opts.prime = prime;
    opts.first_order = first_order;
    opts.with_timings = timings;
    if (!expr.empty()) opts.expr = expr;

    std::vector<std::string> texts;
    for (const auto& path : instances) {
        try {
            texts.push_back(slurp(path));
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
    }

    std::vector<mqv::RunResult> results(texts.size());
    if (jobs > 1 && texts.size() > 1) {
        std::vector<std::future<mqv::RunResult>> futures;
        for (const auto& text : texts)
            futures.push_back(std::async(std::launch::async, [&, text] {
                return mqv::run_command(command, text, opts);
            }));
        for (size_t i = 0; i < futures.size(); ++i) results[i] = futures[i].get();
    } else {
        for (size_t i = 0; i < texts.size(); ++i)
            results[i] = mqv::run_command(command, texts[i], opts);
    }

    std::string out;
    if (results.size() == 1) {
        out = results[0].report_json;
    } else {
        out = "[\n";
        for (size_t i = 0; i < results.size(); ++i)
            out += results[i].report_json + (i + 1 < results.size() ? ",\n" : "\n");
        out += "]";
    }
    out += "\n";

    if (!report_path.empty()) {
        std::ofstream f(report_path);
        f << out;
    } else {
        std::cout << out;
    }

    int exit_code = 0;
    for (const auto& r : results) exit_code = std::max(exit_code, r.exit_code);
    return exit_code;
}
