#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "resetlab/commands.hpp"
#include "resetlab/config.hpp"
#include "resetlab/errors.hpp"

namespace {

struct Options {
    std::string                 config;
    std::vector<int>            sequences;
    double                      noise_pct = 0.0;
    std::uint64_t               seed      = 0;
    std::string                 shaping;
    std::string                 out;
    double                      fmin = 0.0, fmax = 0.0;
    int                         points = 0;
    bool                        serial = false;
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "Config file (sectioned key = value)");
    sub->add_option("--sequence", o.sequences, "Sequence ids to run (1-4)")->delimiter(',');
    sub->add_option("--noise-pct", o.noise_pct, "Noise magnitude in percent of the reference amplitude");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--shaping", o.shaping, "Shaping filter on|off")->check(CLI::IsMember({"on", "off", "true", "false"}));
    sub->add_option("--out", o.out, "Output directory (default: $RESETLAB_OUT or config)");
    sub->add_option("--fmin", o.fmin, "Lowest frequency [Hz]");
    sub->add_option("--fmax", o.fmax, "Highest frequency [Hz]");
    sub->add_option("--points", o.points, "Number of grid points");
    sub->add_flag("--serial", o.serial, "Run sweeps on one thread");
}

resetlab::ConfigOverrides overrides(const CLI::App* sub, const Options& o) {
    resetlab::ConfigOverrides ov;
    if (sub->count("--sequence")) ov.sequences = o.sequences;
    if (sub->count("--noise-pct")) ov.noise_pct = o.noise_pct;
    if (sub->count("--seed")) ov.seed = o.seed;
    if (sub->count("--shaping")) ov.shaping = (o.shaping == "on" || o.shaping == "true");
    if (sub->count("--out")) {
        ov.out_dir = o.out;
    } else if (const char* env = std::getenv("RESETLAB_OUT"); env && *env) {
        ov.out_dir = std::string(env);
    }
    if (sub->count("--fmin")) ov.fmin_hz = o.fmin;
    if (sub->count("--fmax")) ov.fmax_hz = o.fmax;
    if (sub->count("--points")) ov.points = o.points;
    return ov;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reset control sequence analysis: HOSIDF, pseudo-sensitivity, step and comparison runs"};
    app.require_subcommand(1);

    Options o;
    auto*   hosidf = app.add_subcommand("hosidf", "Higher-order describing functions of the open loop");
    auto*   sens   = app.add_subcommand("sensitivity", "Closed-loop pseudo-sensitivity sweep");
    auto*   step   = app.add_subcommand("step", "Step responses and metrics");
    auto*   cmp    = app.add_subcommand("compare", "Maximum error and control input at the reference points");
    for (auto* s : {hosidf, sens, step, cmp}) add_common(s, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        resetlab::RunConfig cfg = o.config.empty() ? resetlab::RunConfig{} : resetlab::load_config(o.config);
        const auto grid = sub == hosidf ? resetlab::GridTarget::hosidf : resetlab::GridTarget::sensitivity;
        resetlab::apply_overrides(cfg, overrides(sub, o), grid);
        const auto exec = o.serial ? resetlab::Execution::serial : resetlab::Execution::parallel;

        resetlab::CommandReport rep;
        if (sub == hosidf) rep = resetlab::cmd_hosidf(cfg, exec);
        else if (sub == sens) rep = resetlab::cmd_sensitivity(cfg, exec);
        else if (sub == step) rep = resetlab::cmd_step(cfg);
        else rep = resetlab::cmd_compare(cfg, exec);

        for (const auto& n : rep.notes) std::cout << n << '\n';
        for (const auto& f : rep.files) std::cout << "wrote " << f.string() << '\n';
        if (rep.flagged > 0) std::cout << rep.flagged << " row(s) flagged as not settled\n";
        return 0;
    } catch (const resetlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const resetlab::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const resetlab::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 3;
    }
}
