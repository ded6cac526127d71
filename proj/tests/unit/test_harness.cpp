#include "doctest.h"

#include "stochmatch/errors.hpp"
#include "stochmatch/experiment.hpp"
#include "stochmatch/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace stochmatch;

namespace {

ExperimentSpec small_spec(const std::string& gen) {
    ExperimentSpec s;
    s.generator = gen;
    s.sparsifier.epsilon = make_rational(3, 10);
    s.sparsifier.p = Probability(make_rational(1, 2));
    s.sparsifier.R_override = 4;
    s.sparsifier.N_q = 200;
    s.sparsifier.N_opt = 200;
    s.vimatch.K_gamma = 4;
    s.vimatch.t = 1;
    s.K_Z = 4;
    s.T_eval = 20;
    s.runs = 50;
    return s;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("spec validation") {
    ExperimentSpec s;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.generator = "path:4";
    CHECK_NOTHROW(s.validate());
    s.trials = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.trials = 1;
    s.generator = "blob:3";
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.generator = "path:4";
    s.graph_path = "x.txt";
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("audit on the empty graph passes") {
    ExperimentSpec s = small_spec("empty:5");
    const Report r = run_validity_audit(s);
    CHECK(r.passed());
    REQUIRE(r.trials.size() == 1);
    CHECK(r.trials[0].error.empty());
    CHECK(r.trials[0].Q_size == 0);
}

TEST_CASE("audit on small random graphs") {
    ExperimentSpec s = small_spec("er:8:12:1:5");
    s.trials = 3;
    s.fresh_graph_per_trial = true;
    s.blossom_max_odd = 5;
    const Report r = run_validity_audit(s);
    for (const auto& c : r.criteria) {
        INFO(c.name << ": " << c.detail);
        if (c.hard) CHECK(c.passed);
    }
    CHECK(r.trials.size() == 3);
    CHECK(r.trials[0].max_odd_size == 5);
    CHECK(r.ratio.has_value());
    for (const auto& t : r.trials) CHECK(t.mu_Q <= t.mu_realized);
}

TEST_CASE("mutation hook produces a vertex witness") {
    ExperimentSpec s = small_spec("path:3:1:1");
    s.sparsifier.p = Probability(Rational(1));
    const Report r = run_validity_audit(s, [](Assignment& x, const WeightedGraph&) {
        x[0] = 1;
        x[1] = 1;
    });
    CHECK_FALSE(r.passed());
    REQUIRE(r.trials.size() == 1);
    bool vertex_witness = false;
    for (const auto& w : r.trials[0].witnesses)
        if (w.kind == "vertex_load" && w.vertices == std::vector<int>{1}) vertex_witness = true;
    CHECK(vertex_witness);
}

TEST_CASE("identical specs give identical reports") {
    ExperimentSpec s = small_spec("er:7:10:1:9");
    s.trials = 2;
    CHECK(report_to_json(run_validity_audit(s)) == report_to_json(run_validity_audit(s)));
    ExperimentSpec t = s;
    t.seed = 2;
    CHECK(report_to_json(run_validity_audit(s)) != report_to_json(run_validity_audit(t)));
}

TEST_CASE("report JSON round trip") {
    ExperimentSpec s = small_spec("er:7:10:1:9");
    s.trials = 3;
    Report r = run_validity_audit(s);
    r.started = "2026-01-01T00:00:00Z";
    const std::string text = report_to_json(r);
    const Report back = report_from_json(text);
    CHECK(back == r);
    CHECK(report_to_json(back) == text);

    Report sweep = run_ratio_sweep(small_spec("er:6:8:1:9"), {1, 2});
    CHECK(report_from_json(report_to_json(sweep)) == sweep);
    Report ind = run_independence_test(small_spec("er:6:3:1:9"), 2);
    CHECK(report_from_json(report_to_json(ind)) == ind);
}

TEST_CASE("empty report and CSV rows") {
    Report empty;
    const std::string text = report_to_json(empty);
    CHECK(text.find("\"trials\": []") != std::string::npos);
    CHECK(text.find("\"schema_version\": 1") == text.find("\"schema_version\""));
    CHECK(text.find("timestamps") == std::string::npos);
    std::ostringstream csv;
    write_trials_csv(csv, empty);
    CHECK(count_lines(csv.str()) == 1);

    ExperimentSpec s = small_spec("er:6:8:1:9");
    s.trials = 3;
    std::ostringstream csv3;
    write_trials_csv(csv3, run_validity_audit(s));
    CHECK(count_lines(csv3.str()) == 4);
}

TEST_CASE("emit and read back") {
    Report r = run_sparsify(small_spec("cycle:5"));
    const std::string path = "harness_test_report.json";
    emit_report(r, path);
    CHECK(read_report(path) == r);
    std::ifstream csv(csv_path_for(path));
    CHECK(csv.good());
    std::remove(path.c_str());
    std::remove(csv_path_for(path).c_str());
    CHECK(csv_path_for("a/b.json") == "a/b.csv");
    CHECK(csv_path_for("out") == "out.csv");
    CHECK_THROWS_AS(emit_report(r, "/nonexistent-dir/x.json"), IoError);
}

TEST_CASE("spec JSON") {
    ExperimentSpec s = small_spec("path:5");
    s.R_values = {1, 4};
    s.vimatch.epsilon = make_rational(4, 5);
    CHECK(spec_from_json(spec_to_json(s)) == s);
    const ExperimentSpec d = spec_from_json(R"({"graph": {"generator": "path:3"}, "sparsifier": {"epsilon": "0.25", "p": 0.5}})");
    CHECK(d.generator == "path:3");
    CHECK(d.sparsifier.epsilon == make_rational(1, 4));
    CHECK(d.sparsifier.p.exact() == make_rational(1, 2));
    CHECK_THROWS_AS(spec_from_json(R"({"bogus": 1})"), ParseError);
    CHECK_THROWS_AS(spec_from_json("{"), ParseError);
}

TEST_CASE("ratio sweep special cases") {
    ExperimentSpec s = small_spec("er:6:8:1:9");
    s.sparsifier.p = Probability(Rational(1));
    Report r = run_ratio_sweep(s, {1});
    CHECK(r.sweep.at(0).ratio.ratio == 1.0);

    ExperimentSpec one = small_spec("path:2:3:3");
    r = run_ratio_sweep(one, {1, 3});
    for (const auto& p : r.sweep) CHECK(p.ratio.ratio == 1.0);
    CHECK(r.passed());
}

TEST_CASE("ratio sweep reports the offending R") {
    ExperimentSpec s = small_spec("er:6:8:1:9");
    try {
        (void)run_ratio_sweep(s, {2, 0});
        FAIL("expected an error");
    } catch (const ConfigError&) {
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("R = 0") != std::string::npos);
    }
}

TEST_CASE("independence on two disjoint edges") {
    ExperimentSpec s = small_spec("path:2");
    s.graph_path.clear();
    CHECK_THROWS_AS(run_independence_test(s, 2), NoEligiblePairs);

    const std::string path = "harness_two_edges.txt";
    {
        std::ofstream out(path);
        out << "4 2\n0 1 1\n2 3 1\n";
    }
    ExperimentSpec t = small_spec("");
    t.generator.clear();
    t.graph_path = path;
    t.runs = 400;
    const Report r = run_independence_test(t, 2);
    std::remove(path.c_str());
    REQUIRE(r.independence);
    CHECK(r.independence->eligible_pairs == 4);
    CHECK(r.independence->rejection_fraction <= 0.5);
}

TEST_CASE("vimatch demo at depth zero is empty") {
    ExperimentSpec s = small_spec("er:6:8:1:9");
    s.runs = 10;
    s.depths = {0, 1};
    const Report r = run_vimatch_demo(s);
    REQUIRE(r.depths.size() == 2);
    CHECK(r.depths[0].weight.mean == 0.0);
    CHECK(r.passed());
}

}  // TEST_SUITE
