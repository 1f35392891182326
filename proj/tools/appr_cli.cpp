#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "appr/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"local-push personalized PageRank toolkit"};
    app.require_subcommand(0, 1);  // zero only with --spec, checked below
    app.fallthrough();  // let global flags appear after the subcommand

    appr::ExperimentSpec spec;
    std::string from_spec;

    app.add_option("--seed", spec.seed, "global RNG seed");
    app.add_option("--threads", spec.threads, "worker threads for replicate loops");
    app.add_option("--out", spec.out_dir, "output directory");
    app.add_option("--spec", from_spec, "load a persisted spec.toml and run it");

    auto add_dataset = [&](CLI::App* cmd, bool required = true) {
        auto* opt = cmd->add_option("dataset", spec.dataset, "edge-list file");
        if (required) opt->required();
        cmd->add_flag("--weighted", spec.weighted, "read third column as weight");
        cmd->add_option("--labels", spec.labels, "node label file");
    };
    auto add_solver_params = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", spec.alpha, "teleportation parameter");
        cmd->add_option("--epsilon", spec.epsilon, "push tolerance");
        cmd->add_option("--qbar", spec.q_bar, "neighbor sampling budget");
        cmd->add_option("--qbar-mult", spec.q_bar_mult,
                        "q_bar as a multiple of the median degree");
        cmd->add_option("--weighting", spec.weighting,
                        "sampling scheme: uniform|edge|degree");
    };

    auto* stats = app.add_subcommand("stats", "degree statistics of a graph");
    add_dataset(stats);

    auto* sparsify = app.add_subcommand("sparsify", "offline edge subsampling");
    add_dataset(sparsify);
    sparsify->add_option("--scheme", spec.scheme,
                         "uniform|influencer|resistive");
    sparsify->add_option("--keep-prob", spec.keep_prob,
                         "uniform scheme keep probability");
    sparsify->add_option("--qbar", spec.q_bar, "influencer degree threshold");
    sparsify->add_option("--qbar-mult", spec.q_bar_mult,
                         "threshold as multiple of median degree");
    sparsify->add_option("--target-ratio", spec.resistive_target,
                         "resistive scheme expected keep ratio");

    auto* solve = app.add_subcommand("solve", "APPR solve from a seed node");
    add_dataset(solve);
    add_solver_params(solve);
    solve->add_option("--node,--seed-node", spec.seed_node,
                      "seed node (original id space)");
    solve->add_flag("--online", spec.online, "neighbor subsampling inside pushes");
    solve->add_option("--c", spec.c, "active-set deflation in (0,1]");
    solve->add_option("--period", spec.period, "dual-correction period (epochs)");
    solve->add_option("--trials", spec.trials, "replicates for online runs");
    solve->add_option("--eps-sweep", spec.epsilon_sweep,
                      "sweep tolerances (overrides --epsilon)");

    auto* onl = app.add_subcommand("onl", "online node labeling");
    add_dataset(onl);
    add_solver_params(onl);
    onl->add_option("--method", spec.method, "relax|reg|wma|wmastar");
    onl->add_option("--solver", spec.solver, "exact|appr|random");
    onl->add_option("--gamma", spec.gamma, "smoothness budget (0: measured)");
    onl->add_option("--order", spec.order, "natural|shuffled:SEED");
    onl->add_flag("--argmax", spec.argmax, "deterministic argmax prediction");
    onl->add_option("--c", spec.c, "active-set deflation for random solver");
    onl->add_option("--period", spec.period, "dual-correction period");

    auto* cluster = app.add_subcommand("cluster", "embedding-based clustering");
    add_dataset(cluster);
    add_solver_params(cluster);
    cluster->add_option("--seeds", spec.n_seeds, "number of seed nodes");
    cluster->add_option("--beta", spec.shift, "embedding shift (0: default)");
    cluster->add_option("--solver", spec.solver, "exact|appr|random");

    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("--suite", spec.suite,
                       "lemma1|offline|sampler|rates|early-stop|all");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!from_spec.empty()) {
            appr::ExperimentSpec loaded =
                appr::ExperimentSpec::from_toml_file(from_spec);
            loaded.out_dir = spec.out_dir;
            return appr::run_experiment(loaded);
        }
        if (app.get_subcommands().empty()) {
            std::fprintf(stderr, "error: a subcommand (or --spec) is required\n");
            return 2;
        }
        spec.task = app.get_subcommands().front()->get_name();
        return appr::run_experiment(spec);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
