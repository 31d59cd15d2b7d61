// Command-line front end: runs a scenario over variants, seeds and an
// optional sweep, then writes CSV reports.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sdnrm/sdnrm.hpp"

namespace {

std::vector<sdnrm::MechanismVariant> parse_variants(const std::string& list) {
    std::vector<sdnrm::MechanismVariant> out;
    for (const auto& name : sdnrm::detail::split(list, ',')) out.push_back(sdnrm::parse_variant(name));
    if (out.empty()) throw sdnrm::ModelError("no variants given");
    return out;
}

void print_table(const sdnrm::SweepResult& r) {
    for (std::size_t c = 0; c < r.cells.size(); ++c) {
        std::cout << r.sweep.label(c) << "\n";
        for (std::size_t v = 0; v < r.variants.size(); ++v) {
            const auto& s = r.at(c, v);
            std::cout << "  " << s.variant << "  success " << sdnrm::fixed(s.success_rate * 100, 2) << "%  throughput "
                      << sdnrm::fixed(s.throughput_bps / 1e6, 2) << " Mbps  restoration "
                      << (s.restoration_mean_ns ? sdnrm::fixed(*s.restoration_mean_ns / 1e6, 3) + " ms" : "-")
                      << "\n";
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Packet-level SDN controller resilience simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string variants = "woRM,sRM,pRM,RM";
    int seeds = 10;
    std::string sweep;
    std::string out_dir = "results";
    std::string success_mode = "per_packet";
    std::string log_path;
    bool raw_delay = false;
    bool rs3_best_effort = false;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "run a scenario and write reports");
    run->add_option("scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--variants", variants, "comma-separated variants (woRM,sRM,pRM,RM)");
    run->add_option("--seeds", seeds, "number of seeds, starting at the scenario seed")->check(CLI::PositiveNumber);
    run->add_option("--sweep", sweep, "flows=a..b or events=a..b");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--success-mode", success_mode, "per_packet or per_interval")
        ->check(CLI::IsMember({"per_packet", "per_interval"}));
    run->add_option("--log", log_path, "write the first run's event log (JSON lines) here");
    run->add_flag("--eq1-raw-mode", raw_delay, "use the undivided link-delay estimate");
    run->add_flag("--rs3-best-effort", rs3_best_effort, "install the best path even when no contract holds");
    run->add_flag("-q,--quiet", quiet, "do not print the result table");

    CLI11_PARSE(app, argc, argv);

    try {
        sdnrm::Scenario sc = sdnrm::load_scenario(scenario_path);
        if (raw_delay) sc.link_delay_mode = sdnrm::LinkDelayMode::Raw;
        if (rs3_best_effort) sc.rs3_best_effort = true;

        const auto vs = parse_variants(variants);
        const auto seed_list = sdnrm::make_seeds(sc, seeds);
        const sdnrm::Sweep sw = sweep.empty() ? sdnrm::Sweep{} : sdnrm::parse_sweep(sweep);
        const auto mode =
            success_mode == "per_interval" ? sdnrm::SuccessMode::PerInterval : sdnrm::SuccessMode::PerPacket;

        bool logged = log_path.empty();
        auto observer = [&](const sdnrm::RunLog& log) {
            if (logged) return;
            std::ofstream out(log_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write log '" + log_path + "'");
            sdnrm::write_run_log(out, log);
            logged = true;
        };

        const auto result = sdnrm::run_sweep(sc, vs, seed_list, sw, mode, observer);

        sdnrm::ReportOptions opts;
        opts.scenario_hash = sdnrm::hex64(sdnrm::fnv1a(sc.text));
        opts.success_mode = success_mode;
        opts.raw_link_delay = sc.link_delay_mode == sdnrm::LinkDelayMode::Raw;
        const auto files = sdnrm::emit_reports(result, out_dir, opts);
        if (!quiet) {
            print_table(result);
            std::cout << "wrote " << files.size() << " files to " << out_dir << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
