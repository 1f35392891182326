#include "appr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "appr/appr.hpp"
#include "appr/clustering.hpp"
#include "appr/graph.hpp"
#include "appr/onl.hpp"
#include "appr/oracle.hpp"
#include "appr/random_appr.hpp"
#include "appr/rng.hpp"
#include "appr/sparsify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace appr {

namespace {

constexpr int kSchemaVersion = 1;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Weighting parse_weighting(const std::string& w) {
    if (w == "uniform") return Weighting::Uniform;
    if (w == "edge") return Weighting::EdgeWeighted;
    if (w == "degree") return Weighting::DegreeWeighted;
    throw GraphError("unknown weighting: " + w);
}

SolverChoice parse_solver(const ExperimentSpec& spec, int q_bar) {
    SolverChoice sc;
    if (spec.solver == "exact") {
        sc.kind = SolverKind::Exact;
    } else if (spec.solver == "appr") {
        sc.kind = SolverKind::Appr;
    } else if (spec.solver == "random") {
        sc.kind = SolverKind::RandomAppr;
    } else {
        throw GraphError("unknown solver: " + spec.solver);
    }
    sc.params = ApprParams{spec.alpha, spec.epsilon};
    sc.sampler.q_bar = std::max(1, q_bar);
    sc.sampler.weighting = parse_weighting(spec.weighting);
    sc.sampler.rng_seed = spec.seed;
    sc.random_opts.c = spec.c;
    sc.random_opts.correction_period = spec.period;
    return sc;
}

std::vector<int> parse_order(const ExperimentSpec& spec, int n) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (spec.order == "natural") return order;
    if (spec.order.rfind("shuffled:", 0) == 0) {
        const std::uint64_t s = std::stoull(spec.order.substr(9));
        KeyedRng rng(s, 0x0bdull);
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[i], order[j]);
        }
        return order;
    }
    throw GraphError("unknown visit order: " + spec.order);
}

/// Tracks written outputs so failures leave no partial files behind.
class OutputSet {
public:
    explicit OutputSet(const std::string& dir) : dir_(dir) {
        fs::create_directories(dir_);
    }
    std::ofstream open(const std::string& name) {
        const fs::path p = dir_ / name;
        paths_.push_back(p);
        std::ofstream out(p);
        if (!out) throw GraphError("cannot write " + p.string());
        return out;
    }
    void cleanup() {
        for (const auto& p : paths_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

private:
    fs::path dir_;
    std::vector<fs::path> paths_;
};

}  // namespace

std::string ExperimentSpec::to_toml() const {
    std::ostringstream os;
    os << "[experiment]\n";
    os << "task = " << quote(task) << "\n";
    os << "dataset = " << quote(dataset) << "\n";
    os << "labels = " << quote(labels) << "\n";
    os << "weighted = " << (weighted ? "true" : "false") << "\n";
    os << "seed = " << seed << "\n";
    os << "threads = " << threads << "\n";
    os << "out_dir = " << quote(out_dir) << "\n";
    os << "alpha = " << fmt(alpha) << "\n";
    os << "epsilon = " << fmt(epsilon) << "\n";
    os << "epsilon_sweep = [";
    for (std::size_t i = 0; i < epsilon_sweep.size(); ++i)
        os << (i ? ", " : "") << fmt(epsilon_sweep[i]);
    os << "]\n";
    os << "seed_node = " << seed_node << "\n";
    os << "online = " << (online ? "true" : "false") << "\n";
    os << "q_bar = " << q_bar << "\n";
    os << "q_bar_mult = " << fmt(q_bar_mult) << "\n";
    os << "weighting = " << quote(weighting) << "\n";
    os << "c = " << fmt(c) << "\n";
    os << "period = " << period << "\n";
    os << "trials = " << trials << "\n";
    os << "scheme = " << quote(scheme) << "\n";
    os << "keep_prob = " << fmt(keep_prob) << "\n";
    os << "resistive_target = " << fmt(resistive_target) << "\n";
    os << "method = " << quote(method) << "\n";
    os << "solver = " << quote(solver) << "\n";
    os << "gamma = " << fmt(gamma) << "\n";
    os << "order = " << quote(order) << "\n";
    os << "argmax = " << (argmax ? "true" : "false") << "\n";
    os << "n_seeds = " << n_seeds << "\n";
    os << "shift = " << fmt(shift) << "\n";
    os << "suite = " << quote(suite) << "\n";
    return os.str();
}

ExperimentSpec ExperimentSpec::from_toml(const std::string& text) {
    ExperimentSpec s;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = strip(line);
        if (line.empty() || line[0] == '#' || line[0] == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw GraphError("bad spec line: " + line);
        const std::string key = strip(line.substr(0, eq));
        std::string val = strip(line.substr(eq + 1));
        auto unquote = [&]() {
            if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
                return val.substr(1, val.size() - 2);
            return val;
        };
        if (key == "task") s.task = unquote();
        else if (key == "dataset") s.dataset = unquote();
        else if (key == "labels") s.labels = unquote();
        else if (key == "weighted") s.weighted = val == "true";
        else if (key == "seed") s.seed = std::stoull(val);
        else if (key == "threads") s.threads = std::stoi(val);
        else if (key == "out_dir") s.out_dir = unquote();
        else if (key == "alpha") s.alpha = std::stod(val);
        else if (key == "epsilon") s.epsilon = std::stod(val);
        else if (key == "epsilon_sweep") {
            s.epsilon_sweep.clear();
            std::string body = val;
            if (!body.empty() && body.front() == '[') body = body.substr(1);
            if (!body.empty() && body.back() == ']') body.pop_back();
            std::istringstream bs(body);
            std::string tok;
            while (std::getline(bs, tok, ',')) {
                tok = strip(tok);
                if (!tok.empty()) s.epsilon_sweep.push_back(std::stod(tok));
            }
        }
        else if (key == "seed_node") s.seed_node = std::stoi(val);
        else if (key == "online") s.online = val == "true";
        else if (key == "q_bar") s.q_bar = std::stoi(val);
        else if (key == "q_bar_mult") s.q_bar_mult = std::stod(val);
        else if (key == "weighting") s.weighting = unquote();
        else if (key == "c") s.c = std::stod(val);
        else if (key == "period") s.period = std::stoi(val);
        else if (key == "trials") s.trials = std::stoi(val);
        else if (key == "scheme") s.scheme = unquote();
        else if (key == "keep_prob") s.keep_prob = std::stod(val);
        else if (key == "resistive_target") s.resistive_target = std::stod(val);
        else if (key == "method") s.method = unquote();
        else if (key == "solver") s.solver = unquote();
        else if (key == "gamma") s.gamma = std::stod(val);
        else if (key == "order") s.order = unquote();
        else if (key == "argmax") s.argmax = val == "true";
        else if (key == "n_seeds") s.n_seeds = std::stoi(val);
        else if (key == "shift") s.shift = std::stod(val);
        else if (key == "suite") s.suite = unquote();
        else throw GraphError("unknown spec key: " + key);
    }
    return s;
}

ExperimentSpec ExperimentSpec::from_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open spec: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return from_toml(os.str());
}

int effective_q_bar(const ExperimentSpec& spec, double median_degree) {
    if (spec.q_bar_mult > 0.0)
        return std::max(1, static_cast<int>(std::llround(spec.q_bar_mult * median_degree)));
    return std::max(1, spec.q_bar);
}

namespace {

void run_stats(const ExperimentSpec& spec, OutputSet& out) {
    const Graph g = load_edge_list(spec.dataset, spec.weighted);
    const DegreeStats st = degree_stats(g);
    auto csv = out.open("stats_results.csv");
    csv << "n,m,avg_degree,median_degree,max_degree,max_over_n,max_over_avg\n";
    csv << st.n << ',' << st.m << ',' << fmt(st.avg_degree) << ','
        << fmt(st.median_degree) << ',' << fmt(st.max_degree) << ','
        << fmt(st.max_over_n) << ',' << fmt(st.max_over_avg) << '\n';
    json j{{"schema_version", kSchemaVersion}, {"task", "stats"},
           {"n", st.n},  {"m", st.m},
           {"avg_degree", st.avg_degree}, {"median_degree", st.median_degree},
           {"max_degree", st.max_degree}};
    out.open("stats_summary.json") << j.dump(2) << '\n';
}

void run_sparsify(const ExperimentSpec& spec, OutputSet& out) {
    const Graph g = load_edge_list(spec.dataset, spec.weighted);
    EdgeProbabilityScheme scheme = UniformScheme{spec.keep_prob};
    const DegreeStats st = degree_stats(g);
    if (spec.scheme == "influencer") {
        scheme = InfluencerScheme{
            static_cast<double>(effective_q_bar(spec, st.median_degree))};
    } else if (spec.scheme == "resistive") {
        scheme = ResistiveScheme{calibrate_resistive_scale(g, spec.resistive_target)};
    } else if (spec.scheme != "uniform") {
        throw GraphError("unknown scheme: " + spec.scheme);
    }
    const Graph gs = sparsify_offline(g, scheme, spec.seed);

    {
        auto el = out.open("sparsified_edges.txt");
        char buf[64];
        for (int u = 0; u < gs.node_count(); ++u) {
            auto nb = gs.neighbors(u);
            auto wt = gs.weights(u);
            for (std::size_t k = 0; k < nb.size(); ++k) {
                if (nb[k] < u) continue;
                std::snprintf(buf, sizeof(buf), "%.17g", wt[k]);
                el << g.original_ids()[u] << ' ' << g.original_ids()[nb[k]]
                   << ' ' << buf << '\n';
            }
        }
    }
    json j{{"schema_version", kSchemaVersion}, {"task", "sparsify"},
           {"scheme", spec.scheme}, {"seed", spec.seed},
           {"kept_edges", gs.edge_count()}, {"original_edges", g.edge_count()}};
    if (!spec.labels.empty()) {
        const LabelSet labels = load_labels(spec.labels, g);
        const double before = edge_ratio(g, labels);
        const double after = edge_ratio(gs, labels);
        j["edge_ratio_before"] = std::isfinite(before) ? json(before) : json(nullptr);
        j["edge_ratio_after"] = std::isfinite(after) ? json(after) : json(nullptr);
    }
    out.open("sparsify_summary.json") << j.dump(2) << '\n';
}

void run_solve(const ExperimentSpec& spec, OutputSet& out) {
    const Graph g = load_edge_list(spec.dataset, spec.weighted);
    const DegreeStats st = degree_stats(g);
    std::vector<double> sweep = spec.epsilon_sweep;
    if (sweep.empty()) sweep.push_back(spec.epsilon);
    const int s = spec.seed_node;

    SparseVec b;
    b.set(s, (2.0 * spec.alpha / (1.0 + spec.alpha)) / std::sqrt(g.degree(s)));

    auto csv = out.open("solve_results.csv");
    json summary{{"schema_version", kSchemaVersion}, {"task", "solve"},
                 {"online", spec.online}, {"seed_node", s}};
    std::uint64_t total_queried = 0;

    if (!spec.online) {
        csv << "epsilon,pushes,nodes_queried,l1_residual,l2_residual,support_x\n";
        for (double eps : sweep) {
            const ApprParams params{spec.alpha, eps};
            const ApprResult res = appr_solve(g, s, params);
            const SparseVec zex = residual_exact(g, res.x, b, params);
            const SparseVec r = unscaled_residual(g, zex, params);
            double l1 = 0.0, l2 = 0.0;
            for (const auto& [i, v] : r.sorted_entries()) {
                l1 += std::abs(v);
                l2 += v * v;
            }
            total_queried += res.nodes_queried;
            csv << fmt(eps) << ',' << res.push_count << ',' << res.nodes_queried
                << ',' << fmt(l1) << ',' << fmt(std::sqrt(l2)) << ','
                << res.x.support_size() << '\n';

            if (eps == sweep.back()) {  // solution at the final sweep point
                auto sol = out.open("solve_solution.txt");
                for (const auto& [i, v] : res.x.sorted_entries())
                    sol << g.original_ids()[i] << ' ' << fmt(v) << '\n';
                summary["pushes"] = res.push_count;
                summary["residual_linf"] = r.linf();
                summary["support_x"] = res.x.support_size();
                summary["support_z"] = zex.support_size();
            }
        }
    } else {
        const int qb = effective_q_bar(spec, st.median_degree);
        summary["q_bar"] = qb;
        csv << "epsilon,trial,epoch,pushes,l1_residual_exact,l2_residual_exact,"
               "support_x,correction\n";
        for (double eps : sweep) {
            const ApprParams params{spec.alpha, eps};
            for (int trial = 0; trial < spec.trials; ++trial) {
                SamplerConfig cfg;
                cfg.q_bar = qb;
                cfg.weighting = parse_weighting(spec.weighting);
                cfg.rng_seed =
                    KeyedRng(spec.seed, static_cast<std::uint64_t>(trial)).next_u64();
                RandomApprOptions opts;
                opts.c = spec.c;
                opts.correction_period = spec.period;
                opts.record_exact_residual = true;
                const RandomApprResult res = random_appr(g, s, params, cfg, opts);
                total_queried += res.nodes_queried;
                for (const auto& ep : res.trace) {
                    csv << fmt(eps) << ',' << trial << ',' << ep.epoch << ','
                        << ep.pushes << ',' << fmt(ep.l1_residual_exact) << ','
                        << fmt(ep.l2_residual_exact) << ',' << ep.support_x
                        << ',' << (ep.correction ? 1 : 0) << '\n';
                }
            }
        }
    }
    summary["nodes_queried"] = total_queried;
    out.open("solve_summary.json") << summary.dump(2) << '\n';
}

void run_onl(const ExperimentSpec& spec, OutputSet& out) {
    const Graph g = load_edge_list(spec.dataset, spec.weighted);
    if (spec.labels.empty()) throw GraphError("onl task needs --labels");
    const LabelSet labels = load_labels(spec.labels, g);
    const DegreeStats st = degree_stats(g);

    OnlConfig cfg;
    cfg.gamma = spec.gamma;
    cfg.seed = spec.seed;
    cfg.argmax_predict = spec.argmax;
    cfg.solver = parse_solver(spec, effective_q_bar(spec, st.median_degree));
    const std::vector<int> order = parse_order(spec, g.node_count());

    RegretTrace tr;
    if (spec.method == "relax") tr = relaxation_run(g, labels, cfg, order);
    else if (spec.method == "reg") tr = regularize_run(g, labels, cfg, order);
    else if (spec.method == "wma") tr = wma_run(g, labels, cfg, order, false);
    else if (spec.method == "wmastar") tr = wma_run(g, labels, cfg, order, true);
    else throw GraphError("unknown onl method: " + spec.method);

    auto csv = out.open("onl_results.csv");
    csv << "t,node,prediction,truth,loss,cumulative_mistakes\n";
    for (std::size_t i = 0; i < order.size(); ++i) {
        csv << i << ',' << order[i] << ',' << tr.predictions[i] << ','
            << labels.labels[order[i]] << ',' << tr.losses[i] << ','
            << tr.cumulative_loss[i] << '\n';
    }
    json j{{"schema_version", kSchemaVersion}, {"task", "onl"},
           {"method", spec.method}, {"mistakes", tr.mistakes},
           {"mistake_rate", static_cast<double>(tr.mistakes) / g.node_count()},
           {"regret_bound", tr.regret_bound}, {"trace_bound", tr.trace_bound},
           {"gamma_used", tr.gamma_used}, {"nodes_queried", tr.nodes_queried}};
    out.open("onl_summary.json") << j.dump(2) << '\n';
}

void run_cluster(const ExperimentSpec& spec, OutputSet& out) {
    const Graph g = load_edge_list(spec.dataset, spec.weighted);
    const DegreeStats st = degree_stats(g);
    LabelSet labels;
    if (!spec.labels.empty()) labels = load_labels(spec.labels, g);
    int n_seeds = spec.n_seeds;
    if (n_seeds <= 0) {
        if (labels.k_classes == 0)
            throw GraphError("cluster task needs --seeds or a label file");
        n_seeds = labels.k_classes;
    }
    const double shift = spec.shift > 0.0 ? spec.shift : default_embedding_shift();
    const SolverChoice solver = parse_solver(spec, effective_q_bar(spec, st.median_degree));

    std::uint64_t queried = 0;
    const auto seeds = select_seeds(g, n_seeds);
    const auto cols = embed_columns(g, seeds, shift, solver, 1.0, &queried);
    ClusterAssignment asg = assign_clusters(cols, g.node_count());
    if (labels.k_classes > 0) asg.score = purity_score(asg, labels);

    auto csv = out.open("cluster_results.csv");
    csv << "node,seed\n";
    for (int u = 0; u < g.node_count(); ++u)
        csv << g.original_ids()[u] << ',' << asg.assignment[u] << '\n';
    json j{{"schema_version", kSchemaVersion}, {"task", "cluster"},
           {"n_seeds", n_seeds}, {"unreached_count", asg.unreached},
           {"nodes_queried", queried}};
    j["score"] = labels.k_classes > 0 ? json(asg.score) : json(nullptr);
    out.open("cluster_summary.json") << j.dump(2) << '\n';
}

int run_verify(const ExperimentSpec& spec, OutputSet& out) {
    std::vector<std::string> names;
    if (spec.suite == "all") names = oracle::suite_names();
    else names.push_back(spec.suite);

    bool all_pass = true;
    json j{{"schema_version", kSchemaVersion}, {"task", "verify"}};
    j["suites"] = json::array();
    for (const auto& name : names) {
        const oracle::SuiteReport rep = oracle::run_suite(name, spec.seed, spec.threads);
        json js{{"suite", rep.suite}, {"pass", rep.pass}};
        js["checks"] = json::array();
        for (const auto& c : rep.checks)
            js["checks"].push_back(
                {{"name", c.name}, {"pass", c.pass}, {"details", c.details}});
        j["suites"].push_back(js);
        all_pass = all_pass && rep.pass;
    }
    j["pass"] = all_pass;
    out.open("verify_report.json") << j.dump(2) << '\n';
    return all_pass ? 0 : 1;
}

}  // namespace

int run_experiment(const ExperimentSpec& spec) {
    OutputSet out(spec.out_dir);
    try {
        out.open("spec.toml") << spec.to_toml();
        if (spec.task == "stats") run_stats(spec, out);
        else if (spec.task == "sparsify") run_sparsify(spec, out);
        else if (spec.task == "solve") run_solve(spec, out);
        else if (spec.task == "onl") run_onl(spec, out);
        else if (spec.task == "cluster") run_cluster(spec, out);
        else if (spec.task == "verify") return run_verify(spec, out);
        else throw GraphError("unknown task: " + spec.task);
        return 0;
    } catch (...) {
        out.cleanup();
        throw;
    }
}

}  // namespace appr
