// ctre: command-line front end for the bursty peaks-over-threshold pipeline.
//
//   ctre simulate --beta 0.8 --n 10000 --seed 1 --output events.csv
//   ctre scan     --input events.csv --kmin 50 --kmax 500 --output scan.csv
//   ctre fit      --input events.csv --k 200
//   ctre diagnose --input events.csv --k 200 --output diag
//   ctre predict  --beta0 0.8 --sigma0 1e5 --k 100 --t0 50 --output pred

#include <CLI11.hpp>

#include "ctre/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Peaks-over-threshold analysis for bursty event series"};
    app.require_subcommand(1);

    ctre::RunConfig cfg;
    std::string method = "logmoment";
    std::string format = "csv";
    std::string magnitudes = "exponential";
    std::string waits = "stable";
    bool drop_first = false;

    auto add_io = [&](CLI::App* c, bool needs_input) {
        if (needs_input) c->add_option("--input", cfg.input, "events CSV (time,magnitude)")
                             ->required();
        c->add_option("--output", cfg.output, "output path (default: stdout)");
        c->add_option("--format", format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_threshold = [&](CLI::App* c) {
        c->add_option("--k", cfg.k, "threshold at the k-th largest magnitude");
        c->add_option("--ell", cfg.ell, "explicit magnitude threshold");
        c->add_flag("--drop-first", drop_first,
                    "drop the first inter-exceedance duration (measured from the origin)");
    };

    auto* fit = app.add_subcommand("fit", "fit the inter-exceedance law at one threshold");
    add_io(fit, true);
    add_threshold(fit);
    fit->add_option("--method", method, "logmoment or mle")
        ->check(CLI::IsMember({"logmoment", "mle"}));

    auto* scan = app.add_subcommand("scan", "stability scan over order-statistic thresholds");
    add_io(scan, true);
    scan->add_option("--kmin", cfg.k_min, "smallest order-statistic index (default 50)");
    scan->add_option("--kmax", cfg.k_max, "largest order-statistic index (default 500)");
    scan->add_option("--window-lo", cfg.window_lo, "stable-window lower k (default: upper half)");
    scan->add_option("--window-hi", cfg.window_hi, "stable-window upper k");
    scan->add_option("--method", method, "logmoment or mle")
        ->check(CLI::IsMember({"logmoment", "mle"}));
    scan->add_flag("--drop-first", drop_first, "drop the first duration in every extraction");

    auto* diag = app.add_subcommand("diagnose", "model-assumption checks at one threshold");
    add_io(diag, true);
    add_threshold(diag);
    diag->add_option("--max-lag", cfg.max_lag, "autocorrelation lags (default 20)");

    auto* pred = app.add_subcommand("predict", "conditional forecast of the next crossing");
    add_io(pred, false);
    pred->add_option("--beta0", cfg.beta0, "stabilized tail parameter")->required();
    pred->add_option("--sigma0", cfg.sigma0, "stabilized normalized scale")->required();
    pred->add_option("--k", cfg.k, "order-statistic index of the threshold")->required();
    pred->add_option("--t0", cfg.t0, "elapsed time since the last crossing (default 0)");
    pred->add_option("--tmin", cfg.t_min, "grid start (default sigma/1000)");
    pred->add_option("--tmax", cfg.t_max, "grid end (default 1000 sigma)");
    pred->add_option("--points", cfg.points, "grid size (default 200)");

    auto* sim = app.add_subcommand("simulate", "generate a marked renewal process");
    add_io(sim, false);
    sim->add_option("--beta", cfg.beta, "stable tail parameter in (0,1) (default 0.8)");
    sim->add_option("--n", cfg.n, "number of events (default 10000)");
    sim->add_option("--seed", cfg.seed, "RNG seed (default 0)");
    sim->add_option("--magnitudes", magnitudes, "exponential or gumbel")
        ->check(CLI::IsMember({"exponential", "gumbel"}));
    sim->add_option("--waits", waits, "stable or exponential (null model)")
        ->check(CLI::IsMember({"stable", "exponential"}));

    CLI11_PARSE(app, argc, argv);

    cfg.has_k = fit->count("--k") || diag->count("--k") || pred->count("--k");
    cfg.has_ell = fit->count("--ell") || diag->count("--ell");
    cfg.keep_first = !drop_first;
    cfg.method = (method == "mle") ? ctre::FitMethod::mle : ctre::FitMethod::log_moment;
    cfg.format = (format == "json") ? ctre::OutFormat::json : ctre::OutFormat::csv;
    cfg.magnitude_law = (magnitudes == "gumbel") ? ctre::MagnitudeLaw::standard_gumbel
                                                 : ctre::MagnitudeLaw::unit_exponential;
    cfg.waiting_law =
        (waits == "exponential") ? ctre::WaitingLaw::exponential : ctre::WaitingLaw::stable;

    if (fit->parsed()) cfg.command = ctre::Command::fit;
    if (scan->parsed()) cfg.command = ctre::Command::scan;
    if (diag->parsed()) cfg.command = ctre::Command::diagnose;
    if (pred->parsed()) cfg.command = ctre::Command::predict;
    if (sim->parsed()) cfg.command = ctre::Command::simulate;

    return ctre::run(cfg);
}
