// Command-line front end: sweep, hunt, verify, table1, analyze.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thetarank/pipeline.hpp"

namespace {

std::atomic<bool> g_cancel{false};

extern "C" void on_signal(int) { g_cancel.store(true); }

struct Flag {
    const char* key;
    std::optional<std::string> value;
};

}  // namespace

int main(int argc, char** argv) {
    using namespace thetarank;

    CLI::App app{"Rank search in the theta-congruent family y^2 = x^3 + 2sn x^2 - (r^2 - s^2) n^2 x"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> config_path;
    std::vector<Flag> flags = {{"theta", {}},       {"range", {}},       {"pmin", {}},
                               {"pmax", {}},        {"qmin", {}},        {"qmax", {}},
                               {"min_omega", {}},   {"stages", {}},      {"selmer_min", {}},
                               {"selmer_kind", {}}, {"workers", {}},     {"out", {}},
                               {"checkpoint", {}},  {"checkpoint_interval", {}}, {"height_bound", {}}};
    auto flag = [&](const char* key) -> std::optional<std::string>& {
        for (auto& f : flags)
            if (std::string(f.key) == key) return f.value;
        throw std::logic_error(key);
    };
    app.add_option("--config", config_path, "key = value settings file; flags override it");
    app.add_option("--theta", flag("theta"), "pi/3, 2pi/3 or r,s with cos(theta) = s/r");
    app.add_option("--range", flag("range"), "n-range lo:hi (or hi) for sweep/table1, e.g. 1:1e5");
    app.add_option("--pmin", flag("pmin"), "hunt grid: smallest p");
    app.add_option("--pmax", flag("pmax"), "hunt grid: largest p");
    app.add_option("--qmin", flag("qmin"), "hunt grid: smallest q");
    app.add_option("--qmax", flag("qmax"), "hunt grid: largest q");
    app.add_option("--min-omega", flag("min_omega"), "hunt grid: least number of odd prime factors of n");
    app.add_option("--stages", flag("stages"), "Nagao stages bound:threshold,... e.g. 1000:15,10000:20,100000:40");
    app.add_option("--selmer-min", flag("selmer_min"), "emit records with Selmer rank >= this");
    app.add_option("--selmer-kind", flag("selmer_kind"), "isogeny (2-isogeny bound, default) or full (complete 2-descent)");
    app.add_option("--workers", flag("workers"), "worker threads");
    app.add_option("--out", flag("out"), "JSONL output file (default stdout)");
    app.add_option("--checkpoint", flag("checkpoint"), "checkpoint file; an existing one is resumed");
    app.add_option("--checkpoint-interval", flag("checkpoint_interval"), "keys per flushed block");
    app.add_option("--height-bound", flag("height_bound"), "point search height bound");

    auto* sweep = app.add_subcommand("sweep", "Selmer rank of every squarefree n in a range");
    auto* hunt = app.add_subcommand("hunt", "candidates from (p, q), Nagao filter, Selmer threshold, point search");
    auto* table1 = app.add_subcommand("table1", "tally of Selmer ranks over a range");
    auto* verify = app.add_subcommand("verify", "check the embedded published curves and generators");
    auto* analyze = app.add_subcommand("analyze", "full report for one curve");

    bool companions = false;
    std::uint64_t search_bound = 1000;
    verify->add_flag("--companions", companions, "also compute Selmer ranks of the companion lists");
    verify->add_option("--search-bound", search_bound, "search bound for curves listed without generators");
    std::string analyze_n;
    analyze->add_option("n", analyze_n, "squarefree n")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (config_path) load_config_file(cfg, *config_path);
        for (const auto& f : flags)
            if (f.value) apply_setting(cfg, f.key, *f.value);

        if (*verify) {
            const VerifyReport report = run_verify({.search_bound = search_bound, .companion_selmer = companions});
            std::cout << format_verify(report);
            return report.ok() ? 0 : 1;
        }
        if (*analyze) {
            if (!flag("height_bound")) cfg.height_bound = 10000;
            std::cout << run_analyze(BigInt(analyze_n), cfg.theta, cfg.sieve, cfg.height_bound);
            return 0;
        }

        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        RunControl ctl{.cancel = &g_cancel};
        bool completed = true;
        if (*sweep || *table1) {
            cfg.mode = *sweep ? Mode::sweep : Mode::table1;
            const SweepSummary s = *sweep ? run_sweep(cfg, ctl) : run_table1(cfg, ctl);
            completed = s.completed;
            std::ostream& out = *sweep && cfg.out_path.empty() ? std::cerr : std::cout;
            out << format_tally(cfg.theta, s.tally);
            if (*sweep) out << s.emitted << " records emitted\n";
        } else if (*hunt) {
            cfg.mode = Mode::hunt;
            const HuntSummary h = run_hunt(cfg, ctl);
            completed = h.completed;
            std::cerr << h.candidates << " candidates, " << h.passed_nagao << " passed the Nagao stages, "
                      << h.passed_selmer << " reached Selmer rank " << cfg.effective_selmer_min() << '\n';
        }
        if (!completed) {
            std::cerr << "interrupted; rerun the same command to resume from the checkpoint\n";
            return 130;
        }
        return 0;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
}
