#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "fbcsf/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"free-boundary curve shortening flow laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string filter;
    bool list_models = false;

    CLI::App* run_cmd = app.add_subcommand("run", "run a scenario config");
    run_cmd->add_option("config", config_path, "scenario config (JSON)")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the built-in acceptance matrix");
    verify_cmd->add_option("--filter", filter, "only criteria whose name contains this");

    CLI::App* entropy_cmd =
        app.add_subcommand("entropy", "run a scenario and its entropy scan only");
    entropy_cmd->add_option("config", config_path, "scenario config (JSON)")->required();

    CLI::App* models_cmd = app.add_subcommand("models", "model curve catalogue");
    models_cmd->add_flag("--list", list_models, "list model kinds");

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) return fbcsf::run_scenario(config_path);
    if (verify_cmd->parsed()) return fbcsf::verify_suite(filter);
    if (entropy_cmd->parsed()) return fbcsf::entropy_command(config_path);
    if (models_cmd->parsed()) {
        std::fputs(fbcsf::models_list().c_str(), stdout);
        return 0;
    }
    return 1;
}
