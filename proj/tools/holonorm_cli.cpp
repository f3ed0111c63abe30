#include <CLI11.hpp>

#include <iostream>
#include <memory>

#include "cli_commands.hpp"
#include "holonorm/error.hpp"
#include "json_config.hpp"

int main(int argc, char** argv) {
    using namespace holonorm::cli;

    CLI::App app{"holonorm: discrete Hoelder norms and interpolation inequality checks"};
    app.set_version_flag("--version", std::string("holonorm ") + HOLONORM_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<JsonConfig>(&app));
    app.set_config("--config", "", "JSON config file; command-line flags take precedence");

    NormFlags norm;
    CheckFlags chk;
    SearchFlags search;
    CLI::App* norm_cmd = app.add_subcommand("norm", "Compute a norm or seminorm of a grid function");
    CLI::App* check_cmd = app.add_subcommand("check", "Check an interpolation inequality");
    CLI::App* search_cmd = app.add_subcommand("search", "Search a function family for large ratios");
    add_norm_options(*norm_cmd, norm);
    add_check_options(*check_cmd, chk);
    add_search_options(*search_cmd, search);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (norm_cmd->parsed()) return run_norm(norm);
        if (check_cmd->parsed()) return run_check(chk);
        if (search_cmd->parsed()) return run_search(search);
    } catch (const holonorm::InputError& e) {
        std::cerr << "holonorm: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "holonorm: internal error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
