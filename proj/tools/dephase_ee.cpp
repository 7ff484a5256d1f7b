// dephase-ee — command-line front end.
//
//   dephase-ee <surface|trace|tpd|verify|sweep> [--config <path>] [--key value ...] [--out <path>]
//
// Flags override config-file keys. CSV goes to --out (and to stdout when no
// --out is given); `verify` prints its report and exits 0/1.

#include "dephase/commands.hpp"

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

void print_usage() {
    std::cerr <<
        "usage: dephase-ee <surface|trace|tpd|verify|sweep> [--config <path>] "
        "[--key value ...] [--out <path>]\n"
        "keys mirror the config file (key = value); flags win over the file.\n";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace dephase;
    if (argc < 2) {
        print_usage();
        return 2;
    }
    try {
        const std::string cmd_name = argv[1];
        std::vector<std::pair<std::string, std::string>> flags;
        std::string config_path;
        for (int i = 2; i < argc; ++i) {
            std::string key = argv[i];
            if (key.rfind("--", 0) != 0) {
                throw ConfigError("expected --key, got '" + key + "'");
            }
            key = key.substr(2);
            if (i + 1 >= argc) throw ConfigError("flag --" + key + " needs a value");
            const std::string value = argv[++i];
            if (key == "config") {
                config_path = value;
            } else {
                flags.emplace_back(key, value);
            }
        }
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        cfg.command = command_from_string(cmd_name);
        for (const auto& [k, v] : flags) config_set(cfg, k, v);

        switch (cfg.command) {
            case Command::surface: {
                const auto text = cmd_surface(cfg);
                if (cfg.out.empty()) std::cout << text;
                break;
            }
            case Command::trace: {
                const auto text = cmd_trace(cfg);
                if (cfg.out.empty()) std::cout << text;
                break;
            }
            case Command::tpd: {
                std::cout << cmd_tpd(cfg);
                break;
            }
            case Command::verify: {
                const auto outcome = cmd_verify(cfg);
                std::cout << outcome.report;
                return outcome.exit_code;
            }
            case Command::sweep: {
                const auto text = cmd_sweep(cfg);
                if (cfg.out.empty()) std::cout << text;
                break;
            }
        }
        return 0;
    } catch (const dephase::Error& e) {
        std::cerr << "dephase-ee: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "dephase-ee: unexpected error: " << e.what() << '\n';
        return 2;
    }
}
