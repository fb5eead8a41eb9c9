// gwphase: run, validate and list complex geometric phase scenarios.
//
// Exit codes: 0 success, 2 config or usage error, 3 numerical failure
// (diagnostic JSON on stderr), 4 I/O error.

#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gwphase/runner.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

int guarded(const std::function<void()>& body) {
    using namespace gwphase;
    try {
        body();
        return kOk;
    } catch (const cli::IoError& e) {
        std::cerr << "gwphase: " << e.what() << "\n";
        return kIo;
    } catch (const ContractViolation& e) {
        std::cerr << "gwphase: " << e.what() << "\n";
        return kConfig;
    } catch (const NumericalError& e) {
        std::cerr << cli::diagnostic(e).dump() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "gwphase: internal error: " << e.what() << "\n";
        return kNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Complex geometric phases of metastable states"};
    app.require_subcommand(1);

    std::string config_path, out_path, format;
    auto* run = app.add_subcommand("run", "run a scenario config and emit records");
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--out", out_path, "output file (overrides output.path)");
    run->add_option("--format", format, "csv or json (overrides output.format)")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("--config", config_path, "JSON config file")->required();

    auto* list = app.add_subcommand("list-scenarios", "print the available scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    if (list->parsed())
        return guarded([] {
            for (const auto& [name, text] : gwphase::cli::scenario_catalog())
                std::cout << name << "\t" << text << "\n";
        });

    if (validate->parsed())
        return guarded([&] {
            gwphase::cli::validate(gwphase::cli::load_config(config_path));
            std::cout << "ok\n";
        });

    return guarded([&] {
        auto config = gwphase::cli::load_config(config_path);
        if (!out_path.empty())
            config.output_path = out_path;
        if (!format.empty())
            config.format = format;
        const unsigned threads = gwphase::cli::thread_budget();
        const auto records = gwphase::cli::run(config, threads);
        gwphase::cli::emit(records, config.format, config.output_path);
    });
}
