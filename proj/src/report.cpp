#include "stochmatch/report.hpp"

#include "stochmatch/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace stochmatch {

using json = nlohmann::ordered_json;

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
    if (!j.is_object()) throw ParseError(std::string(where) + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.count(key)) throw ParseError(std::string("unknown key '") + key + "' in " + where);
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double get_double(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Rational parse_rational(const json& j) {
    if (j.is_number()) return rational_from_double(j.get<double>());
    const std::string s = j.get<std::string>();
    if (s.find('/') == std::string::npos) return parse_decimal(s);
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw ParseError("bad rational '" + s + "'");
    q.canonicalize();
    return q;
}

template <class T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

json to_json(const SparsifierConfig& c) {
    json j;
    j["epsilon"] = to_string(c.epsilon);
    j["p"] = to_string(c.p.exact());
    j["lambda_constant_C"] = c.lambda_constant_C;
    j["lambda_cap"] = c.lambda_cap;
    j["R_override"] = c.R_override ? json(*c.R_override) : json(nullptr);
    j["R_hard_cap"] = c.R_hard_cap;
    j["N_q"] = c.N_q;
    j["N_opt"] = c.N_opt;
    return j;
}

SparsifierConfig sparsifier_from(const json& j) {
    require_keys(j, {"epsilon", "p", "lambda_constant_C", "lambda_cap", "R_override", "R_hard_cap", "N_q", "N_opt"},
                 "sparsifier");
    SparsifierConfig c;
    if (j.contains("epsilon")) c.epsilon = parse_rational(j.at("epsilon"));
    if (j.contains("p")) c.p = Probability(parse_rational(j.at("p")));
    read_if(j, "lambda_constant_C", c.lambda_constant_C);
    read_if(j, "lambda_cap", c.lambda_cap);
    if (j.contains("R_override") && !j.at("R_override").is_null()) c.R_override = j.at("R_override").get<std::uint64_t>();
    read_if(j, "R_hard_cap", c.R_hard_cap);
    read_if(j, "N_q", c.N_q);
    read_if(j, "N_opt", c.N_opt);
    return c;
}

json to_json(const VimatchParams& v) {
    json j;
    j["epsilon"] = v.epsilon ? json(to_string(*v.epsilon)) : json(nullptr);
    j["alpha"] = v.alpha;
    j["t"] = v.t;
    j["l"] = v.l;
    j["K_gamma"] = v.K_gamma;
    j["walk_cap"] = v.walk_cap;
    j["budget"] = v.budget;
    return j;
}

VimatchParams vimatch_from(const json& j) {
    require_keys(j, {"epsilon", "alpha", "t", "l", "K_gamma", "walk_cap", "budget"}, "vimatch");
    VimatchParams v;
    if (j.contains("epsilon") && !j.at("epsilon").is_null()) v.epsilon = parse_rational(j.at("epsilon"));
    read_if(j, "alpha", v.alpha);
    read_if(j, "t", v.t);
    read_if(j, "l", v.l);
    read_if(j, "K_gamma", v.K_gamma);
    read_if(j, "walk_cap", v.walk_cap);
    read_if(j, "budget", v.budget);
    return v;
}

json to_json(const ExperimentSpec& s) {
    json j;
    j["graph"] = {{"path", s.graph_path},
                  {"generator", s.generator},
                  {"fresh_per_trial", s.fresh_graph_per_trial},
                  {"denominator", s.denominator}};
    j["sparsifier"] = to_json(s.sparsifier);
    j["vimatch"] = to_json(s.vimatch);
    j["K_Z"] = s.K_Z;
    j["blossom_max_odd"] = s.blossom_max_odd ? json(*s.blossom_max_odd) : json(nullptr);
    j["trials"] = s.trials;
    j["T_eval"] = s.T_eval;
    j["seed"] = s.seed;
    j["R_values"] = s.R_values;
    j["lambda_hops"] = s.lambda_hops;
    j["runs"] = s.runs;
    j["depths"] = s.depths;
    j["output"] = s.output;
    return j;
}

ExperimentSpec spec_from(const json& j) {
    require_keys(j,
                 {"graph", "sparsifier", "vimatch", "K_Z", "blossom_max_odd", "trials", "T_eval", "seed", "R_values",
                  "lambda_hops", "runs", "depths", "output"},
                 "config");
    ExperimentSpec s;
    if (j.contains("graph")) {
        const json& g = j.at("graph");
        require_keys(g, {"path", "generator", "fresh_per_trial", "denominator"}, "graph");
        read_if(g, "path", s.graph_path);
        read_if(g, "generator", s.generator);
        read_if(g, "fresh_per_trial", s.fresh_graph_per_trial);
        read_if(g, "denominator", s.denominator);
    }
    if (j.contains("sparsifier")) s.sparsifier = sparsifier_from(j.at("sparsifier"));
    if (j.contains("vimatch")) s.vimatch = vimatch_from(j.at("vimatch"));
    read_if(j, "K_Z", s.K_Z);
    if (j.contains("blossom_max_odd") && !j.at("blossom_max_odd").is_null())
        s.blossom_max_odd = j.at("blossom_max_odd").get<int>();
    read_if(j, "trials", s.trials);
    read_if(j, "T_eval", s.T_eval);
    read_if(j, "seed", s.seed);
    read_if(j, "R_values", s.R_values);
    read_if(j, "lambda_hops", s.lambda_hops);
    read_if(j, "runs", s.runs);
    read_if(j, "depths", s.depths);
    read_if(j, "output", s.output);
    return s;
}

json to_json(const MeanSE& m) {
    return {{"mean", number(m.mean)}, {"standard_error", number(m.standard_error)}, {"samples", m.samples}};
}

MeanSE mean_se_from(const json& j) {
    return {get_double(j.at("mean")), get_double(j.at("standard_error")), j.at("samples").get<std::uint64_t>()};
}

json to_json(const RatioEstimate& r) {
    return {{"ratio", number(r.ratio)},
            {"standard_error", number(r.standard_error)},
            {"numerator_mean", number(r.numerator_mean)},
            {"denominator_mean", number(r.denominator_mean)},
            {"samples", r.samples}};
}

RatioEstimate ratio_from(const json& j) {
    RatioEstimate r;
    r.ratio = get_double(j.at("ratio"));
    r.standard_error = get_double(j.at("standard_error"));
    r.numerator_mean = get_double(j.at("numerator_mean"));
    r.denominator_mean = get_double(j.at("denominator_mean"));
    r.samples = j.at("samples").get<std::uint64_t>();
    return r;
}

json to_json(const TrialResult& t) {
    json w = json::array();
    for (const auto& x : t.witnesses)
        w.push_back({{"kind", x.kind}, {"vertices", x.vertices}, {"edge", x.edge}, {"value", x.value}, {"bound", x.bound}});
    json j;
    j["index"] = t.index;
    j["seed"] = t.seed;
    j["n"] = t.n;
    j["m"] = t.m;
    j["R"] = t.R;
    j["Delta"] = t.Delta;
    j["lambda"] = t.lambda;
    j["greedy_iterations"] = t.greedy_iterations;
    j["P_size"] = t.P_size;
    j["P_edges"] = t.P_edges;
    j["I_prime_size"] = t.I_prime_size;
    j["N_size"] = t.N_size;
    j["Q_size"] = t.Q_size;
    j["Q_max_degree"] = t.Q_max_degree;
    j["Q_edges"] = t.Q_edges;
    j["Z_size"] = t.Z_size;
    j["mu_realized"] = number(t.mu_realized);
    j["mu_Q"] = number(t.mu_Q);
    j["chi_N"] = number(t.chi_N);
    j["w_f"] = number(t.w_f);
    j["w_g"] = number(t.w_g);
    j["w_h"] = number(t.w_h);
    j["w_x"] = number(t.w_x);
    j["fractional_ok"] = t.fractional_ok;
    j["max_odd_size"] = t.max_odd_size;
    j["blossom_subsets"] = t.blossom_subsets;
    j["witnesses"] = std::move(w);
    j["gain_residual"] = t.gain_residual;
    j["degree_ok"] = t.degree_ok;
    j["iterations_ok"] = t.iterations_ok;
    j["partition_ok"] = t.partition_ok;
    j["error"] = t.error;
    return j;
}

TrialResult trial_from(const json& j) {
    TrialResult t;
    t.index = j.at("index").get<std::uint64_t>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.n = j.at("n").get<int>();
    t.m = j.at("m").get<int>();
    t.R = j.at("R").get<std::uint64_t>();
    t.Delta = j.at("Delta").get<std::uint64_t>();
    t.lambda = j.at("lambda").get<std::uint64_t>();
    t.greedy_iterations = j.at("greedy_iterations").get<int>();
    t.P_size = j.at("P_size").get<std::size_t>();
    t.P_edges = j.at("P_edges").get<std::vector<int>>();
    t.I_prime_size = j.at("I_prime_size").get<std::size_t>();
    t.N_size = j.at("N_size").get<std::size_t>();
    t.Q_size = j.at("Q_size").get<std::size_t>();
    t.Q_max_degree = j.at("Q_max_degree").get<int>();
    t.Q_edges = j.at("Q_edges").get<std::vector<int>>();
    t.Z_size = j.at("Z_size").get<std::size_t>();
    t.mu_realized = get_double(j.at("mu_realized"));
    t.mu_Q = get_double(j.at("mu_Q"));
    t.chi_N = get_double(j.at("chi_N"));
    t.w_f = get_double(j.at("w_f"));
    t.w_g = get_double(j.at("w_g"));
    t.w_h = get_double(j.at("w_h"));
    t.w_x = get_double(j.at("w_x"));
    t.fractional_ok = j.at("fractional_ok").get<bool>();
    t.max_odd_size = j.at("max_odd_size").get<int>();
    t.blossom_subsets = j.at("blossom_subsets").get<std::uint64_t>();
    for (const auto& w : j.at("witnesses"))
        t.witnesses.push_back({w.at("kind").get<std::string>(), w.at("vertices").get<std::vector<int>>(),
                               w.at("edge").get<int>(), w.at("value").get<std::string>(),
                               w.at("bound").get<std::string>()});
    t.gain_residual = j.at("gain_residual").get<std::int64_t>();
    t.degree_ok = j.at("degree_ok").get<bool>();
    t.iterations_ok = j.at("iterations_ok").get<bool>();
    t.partition_ok = j.at("partition_ok").get<bool>();
    t.error = j.at("error").get<std::string>();
    return t;
}

json to_json(const IndependenceResult& r) {
    json pairs = json::array();
    for (const auto& p : r.pairs) {
        json jp = {{"u", p.u}, {"v", p.v}, {"distance", p.distance}, {"table", p.table}};
        jp["statistic"] = p.test ? number(p.test->statistic) : json(nullptr);
        jp["p_value"] = p.test ? number(p.test->p_value) : json(nullptr);
        pairs.push_back(std::move(jp));
    }
    return {{"lambda_hops", r.lambda_hops},
            {"runs", r.runs},
            {"eligible_pairs", r.eligible_pairs},
            {"tested_pairs", r.tested_pairs},
            {"rejected", r.rejected},
            {"significance", r.significance},
            {"rejection_fraction", number(r.rejection_fraction)},
            {"pairs", std::move(pairs)}};
}

IndependenceResult independence_from(const json& j) {
    IndependenceResult r;
    r.lambda_hops = j.at("lambda_hops").get<int>();
    r.runs = j.at("runs").get<std::uint64_t>();
    r.eligible_pairs = j.at("eligible_pairs").get<std::uint64_t>();
    r.tested_pairs = j.at("tested_pairs").get<std::uint64_t>();
    r.rejected = j.at("rejected").get<std::uint64_t>();
    r.significance = get_double(j.at("significance"));
    r.rejection_fraction = get_double(j.at("rejection_fraction"));
    for (const auto& jp : j.at("pairs")) {
        PairTest p;
        p.u = jp.at("u").get<int>();
        p.v = jp.at("v").get<int>();
        p.distance = jp.at("distance").get<int>();
        p.table = jp.at("table").get<std::array<std::uint64_t, 4>>();
        if (!jp.at("p_value").is_null() || !jp.at("statistic").is_null())
            p.test = ChiSquare{get_double(jp.at("statistic")), get_double(jp.at("p_value"))};
        r.pairs.push_back(p);
    }
    return r;
}

json to_json(const Report& r) {
    json j;
    j["schema_version"] = r.schema_version;
    j["tool_version"] = r.tool_version;
    j["command"] = r.command;
    if (r.started || r.finished) {
        json ts = json::object();
        if (r.started) ts["started"] = *r.started;
        if (r.finished) ts["finished"] = *r.finished;
        j["timestamps"] = std::move(ts);
    }
    j["passed"] = r.passed();
    j["config"] = to_json(r.spec);
    json crit = json::array();
    for (const auto& c : r.criteria)
        crit.push_back({{"name", c.name}, {"hard", c.hard}, {"passed", c.passed}, {"detail", c.detail}});
    j["criteria"] = std::move(crit);
    j["ratio"] = r.ratio ? to_json(*r.ratio) : json(nullptr);
    j["degree_histogram"] = r.degree_histogram;
    json sweep = json::array();
    for (const auto& p : r.sweep)
        sweep.push_back({{"R", p.R},
                         {"ratio", to_json(p.ratio)},
                         {"Q_size", p.Q_size},
                         {"Q_max_degree", p.Q_max_degree},
                         {"Q_mean_degree", number(p.Q_mean_degree)},
                         {"dominated", p.dominated}});
    j["sweep"] = std::move(sweep);
    j["independence"] = r.independence ? to_json(*r.independence) : json(nullptr);
    json depths = json::array();
    for (const auto& d : r.depths)
        depths.push_back({{"depth", d.depth},
                          {"weight", to_json(d.weight)},
                          {"min_weight", number(d.min_weight)},
                          {"max_weight", number(d.max_weight)}});
    j["depths"] = std::move(depths);
    json trials = json::array();
    for (const auto& t : r.trials) trials.push_back(to_json(t));
    j["trials"] = std::move(trials);
    return j;
}

Report report_from(const json& j) {
    Report r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion)
        throw ParseError("unsupported report schema version " + std::to_string(r.schema_version));
    r.tool_version = j.at("tool_version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    if (j.contains("timestamps")) {
        const json& ts = j.at("timestamps");
        if (ts.contains("started")) r.started = ts.at("started").get<std::string>();
        if (ts.contains("finished")) r.finished = ts.at("finished").get<std::string>();
    }
    r.spec = spec_from(j.at("config"));
    for (const auto& c : j.at("criteria"))
        r.criteria.push_back({c.at("name").get<std::string>(), c.at("hard").get<bool>(), c.at("passed").get<bool>(),
                              c.at("detail").get<std::string>()});
    if (!j.at("ratio").is_null()) r.ratio = ratio_from(j.at("ratio"));
    r.degree_histogram = j.at("degree_histogram").get<std::vector<std::uint64_t>>();
    for (const auto& p : j.at("sweep")) {
        SweepPoint s;
        s.R = p.at("R").get<std::uint64_t>();
        s.ratio = ratio_from(p.at("ratio"));
        s.Q_size = p.at("Q_size").get<std::size_t>();
        s.Q_max_degree = p.at("Q_max_degree").get<int>();
        s.Q_mean_degree = get_double(p.at("Q_mean_degree"));
        s.dominated = p.at("dominated").get<bool>();
        r.sweep.push_back(s);
    }
    if (!j.at("independence").is_null()) r.independence = independence_from(j.at("independence"));
    for (const auto& d : j.at("depths")) {
        DepthResult x;
        x.depth = d.at("depth").get<int>();
        x.weight = mean_se_from(d.at("weight"));
        x.min_weight = get_double(d.at("min_weight"));
        x.max_weight = get_double(d.at("max_weight"));
        r.depths.push_back(x);
    }
    for (const auto& t : j.at("trials")) r.trials.push_back(trial_from(t));
    return r;
}

template <class F>
auto parsing(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string report_to_json(const Report& report) { return to_json(report).dump(2) + "\n"; }

Report report_from_json(const std::string& text) {
    return parsing([&] { return report_from(json::parse(text)); });
}

std::string spec_to_json(const ExperimentSpec& spec) { return to_json(spec).dump(2) + "\n"; }

ExperimentSpec spec_from_json(const std::string& text) {
    return parsing([&] { return spec_from(json::parse(text)); });
}

void write_trials_csv(std::ostream& out, const Report& report) {
    out << "index,seed,n,m,R,Delta,lambda,greedy_iterations,P_size,I_prime_size,N_size,Q_size,Q_max_degree,Z_size,"
           "mu_realized,mu_Q,chi_N,w_f,w_g,w_h,w_x,fractional_ok,max_odd_size,blossom_subsets,witnesses,"
           "gain_residual,degree_ok,iterations_ok,partition_ok,error\n";
    for (const auto& t : report.trials) {
        out << t.index << ',' << t.seed << ',' << t.n << ',' << t.m << ',' << t.R << ',' << t.Delta << ',' << t.lambda
            << ',' << t.greedy_iterations << ',' << t.P_size << ',' << t.I_prime_size << ',' << t.N_size << ','
            << t.Q_size << ',' << t.Q_max_degree << ',' << t.Z_size << ',' << csv_double(t.mu_realized) << ','
            << csv_double(t.mu_Q) << ',' << csv_double(t.chi_N) << ',' << csv_double(t.w_f) << ','
            << csv_double(t.w_g) << ',' << csv_double(t.w_h) << ',' << csv_double(t.w_x) << ','
            << (t.fractional_ok ? 1 : 0) << ',' << t.max_odd_size << ',' << t.blossom_subsets << ','
            << t.witnesses.size() << ',' << t.gain_residual << ',' << (t.degree_ok ? 1 : 0) << ','
            << (t.iterations_ok ? 1 : 0) << ',' << (t.partition_ok ? 1 : 0) << ',' << csv_field(t.error) << '\n';
    }
}

std::string csv_path_for(const std::string& json_path) {
    const std::string ext = ".json";
    if (json_path.size() > ext.size() && json_path.compare(json_path.size() - ext.size(), ext.size(), ext) == 0)
        return json_path.substr(0, json_path.size() - ext.size()) + ".csv";
    return json_path + ".csv";
}

void emit_report(const Report& report, const std::string& path) {
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open '" + path + "' for writing");
        out << report_to_json(report);
        if (!out) throw IoError("write failed for '" + path + "'");
    }
    const std::string csv = csv_path_for(path);
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw IoError("cannot open '" + csv + "' for writing");
    write_trials_csv(out, report);
    if (!out) throw IoError("write failed for '" + csv + "'");
}

Report read_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return report_from_json(ss.str());
}

}  // namespace stochmatch
