// Copyright 2026 The qbattery Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qbattery: command-line front end. Exit status: 0 success, 1 simulation
// error, 2 usage or configuration error, 3 I/O error, 4 threshold not reached.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qbattery/app.hpp"

namespace {

enum Exit : int { ok = 0, failure = 1, usage = 2, io = 3, not_charged = 4 };

} // namespace

int main(int argc, char **argv)
{
    CLI::App cli{"Quantum battery charging simulator"};
    cli.require_subcommand(1);

    std::string config_path;
    qbattery::app::Overrides over;
    std::string units;
    std::string engine;
    std::uint64_t seed = 0;
    cli.add_option("--config", config_path, "Run configuration file (INI)");
    auto *out_opt = cli.add_option("--out", "Output directory (overrides output.dir)");
    auto *seed_opt = cli.add_option("--seed", seed, "Readout RNG seed (overrides readout.seed)");
    cli.add_option("--units", units, "Energy units: fraction, rad/ns or ueV")
        ->check(CLI::IsMember({"fraction", "rad/ns", "ueV"}));
    cli.add_option("--engine", engine, "Solution engine")->check(CLI::IsMember({"analytic", "numeric"}));

    struct Command {
        const char *name;
        const char *help;
        void (*run)(const qbattery::RunConfig &, std::ostream &);
        bool needs_config;
    };
    const Command commands[] = {
        {"spectrum", "Print the level spectrum of the device", qbattery::app::spectrum, true},
        {"simulate", "Write the E(t) curve of the protocol", qbattery::app::simulate, true},
        {"sweep", "Write final energy against the pulse area", qbattery::app::sweep, true},
        {"charging-time", "Report the charging time (or the Table 1 preset)", qbattery::app::charging_time, true},
        {"readout", "Run the simulated readout pipeline and dump IQ points", qbattery::app::readout, true},
        {"table1", "Recompute the qubit charging-time table", qbattery::app::table1, false},
    };
    for (const auto &c : commands) {
        cli.add_subcommand(c.name, c.help)->fallthrough();
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = cli.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        const Command *chosen = nullptr;
        for (const auto &c : commands) {
            if (cli.got_subcommand(c.name)) {
                chosen = &c;
            }
        }
        qbattery::RunConfig cfg;
        if (!config_path.empty()) {
            cfg = qbattery::load_config(config_path);
        } else if (chosen->needs_config) {
            std::cerr << "error: " << chosen->name << " needs --config <path>\n";
            return usage;
        }
        if (*out_opt) {
            over.out = out_opt->as<std::string>();
        }
        if (*seed_opt) {
            over.seed = seed;
        }
        if (!units.empty()) {
            over.units = qbattery::parse_units(units);
        }
        if (!engine.empty()) {
            over.engine = qbattery::parse_engine(engine);
        }
        qbattery::app::apply(cfg, over);
        chosen->run(cfg, std::cout);
        return ok;
    } catch (const qbattery::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return usage;
    } catch (const qbattery::IoError &e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return io;
    } catch (const qbattery::NotChargedError &e) {
        std::cerr << "not charged: " << e.what() << '\n';
        return not_charged;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
}
