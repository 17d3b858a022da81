// rabicd: counterdiabatic driving experiments for the quantum Rabi model.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rabicd/cli/commands.hpp"

namespace {

std::string dashed(std::string key) {
    for (char& c : key)
        if (c == '_') c = '-';
    return key;
}

const char* type_name(rabicd::cli::ValueType t) {
    using VT = rabicd::cli::ValueType;
    switch (t) {
        case VT::Real: return "real";
        case VT::Integer: return "integer";
        case VT::Boolean: return "boolean";
        case VT::Text: return "text";
        case VT::RealList: return "real list";
        case VT::TextList: return "text list";
    }
    return "?";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace rabicd::cli;
    CLI::App app{"Regularized variational counterdiabatic driving for the quantum Rabi model"};
    app.set_version_flag("--version", std::string("rabicd ") + kArtifactVersion);

    std::string command;
    std::string config_path;
    std::vector<std::string> assignments;
    bool list_keys = false;
    app.add_option("command", command, "experiment to run")->check(CLI::IsMember(command_names()));
    app.add_option("-c,--config", config_path, "key = value config file");
    app.add_option("--set", assignments, "override one key, key=value (repeatable)");
    app.add_flag("--list-keys", list_keys, "print every config key with its default and exit");

    std::map<std::string, std::optional<std::string>> flags;
    for (const auto& k : config_keys()) {
        const std::string name = (k.key == "output" ? "-o,--" : "--") + dashed(k.key);
        app.add_option(name, flags[k.key], k.help)->group("Config keys");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    if (list_keys) {
        for (const auto& k : config_keys()) {
            std::cout << k.key << " (" << type_name(k.type) << ", default " << (k.fallback.empty() ? "''" : k.fallback)
                      << "): " << k.help << "\n";
        }
        return kOk;
    }
    if (command.empty()) {
        std::cerr << "rabicd: a command is required (" << app.get_option("command")->get_description() << ")\n"
                  << app.help();
        return kConfigError;
    }

    // Precedence: defaults < config file < environment < --set < named flags.
    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg.load_file(config_path);
        apply_environment(cfg);
        for (const auto& a : assignments) cfg.set_assignment(a, "--set");
        for (const auto& [key, value] : flags)
            if (value) cfg.set(key, *value, "--" + dashed(key));
    } catch (const ConfigError& e) {
        std::cerr << "rabicd: config error: " << e.what() << "\n";
        return kConfigError;
    }
    return execute(command, cfg, std::cout, std::cerr);
}
