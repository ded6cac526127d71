// stochmatch: command-line front end for the sparsifier pipeline and its audits.

#include "stochmatch/errors.hpp"
#include "stochmatch/experiment.hpp"
#include "stochmatch/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace stochmatch;

namespace {

struct Flags {
    std::string config;
    std::string graph;
    std::string gen;
    std::string epsilon;
    std::string p;
    std::string vimatch_epsilon;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> R;
    std::uint64_t t_eval = 0;
    int lambda_hops = 0;
    std::uint64_t runs = 0;
    std::uint64_t N_q = 0;
    int K_Z = 0;
    int K_gamma = 0;
    int alpha = 0;
    int t = 0;
    int l = 0;
    int blossom_max_odd = 0;
    std::vector<int> depths;
    bool fresh_graphs = false;
    bool no_timestamps = false;
    std::string out;
};

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Rational parse_fraction_or_decimal(const std::string& s) {
    if (s.find('/') == std::string::npos) return parse_decimal(s);
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw ParseError("bad rational '" + s + "'");
    q.canonicalize();
    return q;
}

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON experiment spec; flags override its fields");
    cmd->add_option("--graph", f.graph, "graph file: 'n m' then m lines 'u v w'");
    cmd->add_option("--gen", f.gen, "generator: er:n:m:wmin:wmax, path:n, cycle:n, clique:n, empty:n");
    cmd->add_option("--epsilon", f.epsilon, "pipeline epsilon (decimal or a/b)");
    cmd->add_option("--p", f.p, "edge realization probability");
    cmd->add_option("--seed", f.seed, "root seed");
    cmd->add_option("--trials", f.trials, "number of trials");
    cmd->add_option("--R", f.R, "sampler rounds (comma-separated list for ratio-sweep)")->delimiter(',');
    cmd->add_option("--t-eval", f.t_eval, "evaluation realizations");
    cmd->add_option("--lambda-hops", f.lambda_hops, "hop distance for independence pairs");
    cmd->add_option("--runs", f.runs, "findmatching repetitions");
    cmd->add_option("--N-q", f.N_q, "realizations for edge statistics and opt");
    cmd->add_option("--K-Z", f.K_Z, "reruns estimating Pr[v in Z]");
    cmd->add_option("--K-gamma", f.K_gamma, "reruns per saturation table");
    cmd->add_option("--alpha", f.alpha, "profile size");
    cmd->add_option("--t", f.t, "top-level recursion depth");
    cmd->add_option("--l", f.l, "maximum walk length (multiple of 4)");
    cmd->add_option("--vimatch-epsilon", f.vimatch_epsilon, "epsilon inside findmatching");
    cmd->add_option("--blossom-max-odd", f.blossom_max_odd, "largest odd set checked");
    cmd->add_option("--depths", f.depths, "depths for vimatch-demo")->delimiter(',');
    cmd->add_flag("--fresh-graphs", f.fresh_graphs, "draw a new generated graph per trial");
    cmd->add_flag("--no-timestamps", f.no_timestamps, "omit timestamps from the report");
    cmd->add_option("--out", f.out, "report path (JSON; CSV written alongside); stdout if omitted");
}

ExperimentSpec build_spec(const CLI::App* cmd, const Flags& f) {
    ExperimentSpec s = f.config.empty() ? ExperimentSpec{} : spec_from_json(slurp(f.config));
    auto given = [&](const char* name) { return cmd->count(name) > 0; };
    if (given("--graph")) {
        s.graph_path = f.graph;
        s.generator.clear();
    }
    if (given("--gen")) {
        s.generator = f.gen;
        s.graph_path.clear();
    }
    if (given("--epsilon")) s.sparsifier.epsilon = parse_fraction_or_decimal(f.epsilon);
    if (given("--p")) s.sparsifier.p = Probability(parse_fraction_or_decimal(f.p));
    if (given("--vimatch-epsilon")) s.vimatch.epsilon = parse_fraction_or_decimal(f.vimatch_epsilon);
    if (given("--seed")) s.seed = f.seed;
    if (given("--trials")) s.trials = f.trials;
    if (given("--t-eval")) s.T_eval = f.t_eval;
    if (given("--lambda-hops")) s.lambda_hops = f.lambda_hops;
    if (given("--runs")) s.runs = f.runs;
    if (given("--N-q")) s.sparsifier.N_q = s.sparsifier.N_opt = f.N_q;
    if (given("--K-Z")) s.K_Z = f.K_Z;
    if (given("--K-gamma")) s.vimatch.K_gamma = f.K_gamma;
    if (given("--alpha")) s.vimatch.alpha = f.alpha;
    if (given("--t")) s.vimatch.t = f.t;
    if (given("--l")) s.vimatch.l = f.l;
    if (given("--blossom-max-odd")) s.blossom_max_odd = f.blossom_max_odd;
    if (given("--depths")) s.depths = f.depths;
    if (given("--fresh-graphs")) s.fresh_graph_per_trial = true;
    if (given("--out")) s.output = f.out;
    if (given("--R")) {
        if (cmd->get_name() == "ratio-sweep") {
            s.R_values = f.R;
        } else {
            if (f.R.size() != 1) throw ConfigError("--R takes a single value here");
            s.sparsifier.R_override = f.R.front();
        }
    }
    return s;
}

void print_summary(const Report& r) {
    for (const auto& c : r.criteria)
        std::cerr << (c.passed ? "PASS " : "FAIL ") << (c.hard ? "[hard] " : "[soft] ") << c.name
                  << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
    std::cerr << (r.passed() ? "all hard criteria passed" : "hard criteria failed") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic matching sparsifier: build Q, audit certificates, measure ratios"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(STOCHMATCH_VERSION));
    Flags f;
    const char* names[] = {"sparsify", "audit", "ratio-sweep", "independence", "vimatch-demo"};
    const char* help[] = {
        "build Q once and report it",
        "run full pipeline trials and check every hard invariant",
        "approximation ratio for each R over paired realizations",
        "chi-square independence of matched indicators at far vertex pairs",
        "mean findmatching weight by recursion depth",
    };
    std::vector<CLI::App*> cmds;
    for (int i = 0; i < 5; ++i) {
        CLI::App* c = app.add_subcommand(names[i], help[i]);
        add_common(c, f);
        cmds.push_back(c);
    }
    CLI11_PARSE(app, argc, argv);

    const CLI::App* cmd = nullptr;
    for (auto* c : cmds)
        if (c->parsed()) cmd = c;

    try {
        ExperimentSpec spec = build_spec(cmd, f);
        const std::string started = f.no_timestamps ? std::string() : utc_now();
        Report report;
        const std::string name = cmd->get_name();
        if (name == "sparsify") {
            report = run_sparsify(spec);
        } else if (name == "audit") {
            report = run_validity_audit(spec);
        } else if (name == "ratio-sweep") {
            if (spec.R_values.empty()) spec.R_values = {1, 4, 16, 64};
            report = run_ratio_sweep(spec, spec.R_values);
        } else if (name == "independence") {
            report = run_independence_test(spec, spec.lambda_hops);
        } else {
            report = run_vimatch_demo(spec);
        }
        if (!f.no_timestamps) {
            report.started = started;
            report.finished = utc_now();
        }
        if (spec.output.empty()) {
            std::cout << report_to_json(report);
        } else {
            emit_report(report, spec.output);
        }
        print_summary(report);
        return report.passed() ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
