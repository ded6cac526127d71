#include "stochmatch/vimatch.hpp"

#include "stochmatch/errors.hpp"
#include "stochmatch/mwm.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <unordered_set>

namespace stochmatch {

Profile::Profile(const WeightedGraph& g, std::vector<ProfileEntry> entries)
    : graph_(&g), entries_(std::move(entries)), n_(static_cast<std::size_t>(g.n())), m_(static_cast<std::size_t>(g.m())) {
    const std::size_t a = entries_.size();
    sub_.assign(a * m_, 0);
    match_.assign(a * m_, 0);
    mate_.assign(a * n_, -1);
    for (std::size_t i = 0; i < a; ++i) {
        ProfileEntry& en = entries_[i];
        en.subgraph = normalized(std::move(en.subgraph));
        en.matching = normalized(std::move(en.matching));
        for (int e : en.subgraph) {
            if (e < 0 || e >= g.m()) throw ConfigError("profile subgraph edge out of range");
            sub_[i * m_ + static_cast<std::size_t>(e)] = 1;
        }
        for (int e : en.matching) {
            if (e < 0 || e >= g.m() || !sub_[i * m_ + static_cast<std::size_t>(e)])
                throw ConfigError("profile matching edge " + std::to_string(e) + " not in its subgraph");
            match_[i * m_ + static_cast<std::size_t>(e)] = 1;
            for (int x : {g.edge(e).u, g.edge(e).v}) {
                int& slot = mate_[i * n_ + static_cast<std::size_t>(x)];
                if (slot >= 0) throw ConfigError("profile entry " + std::to_string(i) + " is not a matching");
                slot = e;
            }
        }
    }
}

int Profile::matched_count(int v) const {
    int c = 0;
    for (int i = 0; i < alpha(); ++i) c += matched(i, v) ? 1 : 0;
    return c;
}

std::int64_t Profile::total_weight() const {
    std::int64_t s = 0;
    for (const auto& en : entries_) s += graph_->total_weight(en.matching);
    return s;
}

std::optional<std::vector<int>> walk_vertices(const WeightedGraph& g, const MultiWalk& w) {
    if (w.empty()) return std::vector<int>{};
    const Edge& first = g.edge(w.front().e);
    for (int start : {std::min(first.u, first.v), std::max(first.u, first.v)}) {
        std::vector<int> seq{start};
        int cur = start;
        bool ok = true;
        for (const auto& el : w) {
            const Edge& ed = g.edge(el.e);
            if (!ed.touches(cur)) {
                ok = false;
                break;
            }
            cur = ed.other(cur);
            seq.push_back(cur);
        }
        if (ok) return seq;
    }
    return std::nullopt;
}

bool is_multiwalk(const MultiWalk& w, const Profile& prof) {
    const WeightedGraph& g = prof.graph();
    for (const auto& el : w) {
        if (el.s < 0 || el.s >= prof.alpha() || el.e < 0 || el.e >= g.m()) return false;
        if (!prof.in_subgraph(el.s, el.e)) return false;
    }
    MultiWalk sorted = w;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    return walk_vertices(g, w).has_value();
}

bool is_alternating(const MultiWalk& w, const Profile& prof) {
    if (!is_multiwalk(w, prof)) return false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        const int a = prof.in_matching(w[i].s, w[i].e) ? 1 : 0;
        const int b = prof.in_matching(w[i + 1].s, w[i + 1].e) ? 1 : 0;
        if (a + b != 1) return false;
    }
    std::map<int, EdgeSet> flips;
    for (const auto& el : w) flips[el.s].push_back(el.e);
    for (auto& [s, edges] : flips) {
        std::sort(edges.begin(), edges.end());
        const EdgeSet& m = prof.entry(s).matching;
        EdgeSet next;
        std::set_symmetric_difference(m.begin(), m.end(), edges.begin(), edges.end(), std::back_inserter(next));
        if (!is_matching(prof.graph(), next)) return false;
    }
    return true;
}

std::pair<int, int> walk_degrees(const MultiWalk& w, const Profile& prof, int v) {
    int d = 0, dbar = 0;
    for (const auto& el : w) {
        if (!prof.graph().edge(el.e).touches(v)) continue;
        if (prof.in_matching(el.s, el.e))
            ++d;
        else
            ++dbar;
    }
    return {d, dbar};
}

bool is_applicable(const MultiWalk& w, const Profile& prof, const std::vector<char>& saturated) {
    if (!is_alternating(w, prof)) return false;
    for (int v : walk_vertex_set(prof.graph(), w)) {
        if (static_cast<std::size_t>(v) >= saturated.size() || !saturated[static_cast<std::size_t>(v)]) continue;
        auto [d, dbar] = walk_degrees(w, prof, v);
        if (d < dbar) return false;
    }
    return true;
}

std::int64_t gain(const MultiWalk& w, const Profile& prof) {
    std::int64_t s = 0;
    for (const auto& el : w) {
        const std::int64_t we = prof.graph().edge(el.e).w;
        s += prof.in_matching(el.s, el.e) ? -we : we;
    }
    return s;
}

Profile apply_walk(const Profile& prof, const MultiWalk& w) {
    if (!is_alternating(w, prof)) throw InvalidWalk("apply_walk: walk is not alternating for this profile");
    std::vector<ProfileEntry> entries = prof.entries();
    std::map<int, EdgeSet> flips;
    for (const auto& el : w) flips[el.s].push_back(el.e);
    for (auto& [s, edges] : flips) {
        std::sort(edges.begin(), edges.end());
        EdgeSet next;
        const EdgeSet& m = entries[static_cast<std::size_t>(s)].matching;
        std::set_symmetric_difference(m.begin(), m.end(), edges.begin(), edges.end(), std::back_inserter(next));
        entries[static_cast<std::size_t>(s)].matching = std::move(next);
    }
    return Profile(prof.graph(), std::move(entries));
}

std::vector<int> walk_vertex_set(const WeightedGraph& g, const MultiWalk& w) {
    std::vector<int> vs;
    vs.reserve(2 * w.size());
    for (const auto& el : w) {
        vs.push_back(g.edge(el.e).u);
        vs.push_back(g.edge(el.e).v);
    }
    return normalized(std::move(vs));
}

MultiWalk canonical_walk(const MultiWalk& w) {
    MultiWalk r(w.rbegin(), w.rend());
    return std::min(w, r);
}

int GainHypergraph::rank() const {
    std::size_t r = 0;
    for (const auto& h : edges) r = std::max(r, h.vertices.size());
    return static_cast<int>(r);
}

int GainHypergraph::max_degree(int n) const {
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    int best = 0;
    for (const auto& h : edges)
        for (int v : h.vertices) best = std::max(best, ++deg[static_cast<std::size_t>(v)]);
    return best;
}

namespace {

struct WalkHash {
    std::size_t operator()(const MultiWalk& w) const {
        std::uint64_t h = 0x51ed27f1c0ffeeULL;
        for (const auto& el : w)
            h = hash_combine(h, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(el.s)) << 32) |
                                    static_cast<std::uint32_t>(el.e));
        return static_cast<std::size_t>(h);
    }
};

class WalkEnumerator {
public:
    WalkEnumerator(const Profile& prof, const std::vector<char>& saturated, int l, std::size_t cap, bool positive_only)
        : prof_(prof), g_(prof.graph()), saturated_(saturated), l_(l), cap_(cap), positive_only_(positive_only) {
        n_ = static_cast<std::size_t>(g_.n());
        load_.assign(static_cast<std::size_t>(prof.alpha()) * n_, 0);
        for (int i = 0; i < prof.alpha(); ++i)
            for (int v = 0; v < g_.n(); ++v) load_[idx(i, v)] = prof.matched(i, v) ? 1 : 0;
        balance_.assign(n_, 0);
    }

    GainHypergraph run() {
        for (int s = 0; s < prof_.alpha() && !stop_; ++s) {
            for (int e : prof_.entry(s).subgraph) {
                if (stop_) break;
                const Edge& ed = g_.edge(e);
                for (int start : {ed.u, ed.v}) {
                    if (stop_) break;
                    push({s, e}, start);
                    extend(ed.other(start));
                    pop(start);
                }
            }
        }
        return std::move(out_);
    }

private:
    std::size_t idx(int i, int v) const { return static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(v); }

    void bump_load(int s, int v, int delta) {
        int& x = load_[idx(s, v)];
        if (x >= 2) --overloaded_;
        x += delta;
        if (x >= 2) ++overloaded_;
    }

    void bump_balance(int v, int delta) {
        if (!saturated(v)) return;
        int& b = balance_[static_cast<std::size_t>(v)];
        if (b < 0) deficit_ += b;  // remove old contribution
        b += delta;
        if (b < 0) deficit_ -= b;
    }

    bool saturated(int v) const {
        return static_cast<std::size_t>(v) < saturated_.size() && saturated_[static_cast<std::size_t>(v)];
    }

    void push(WalkElement el, int from) {
        (void)from;
        const Edge& ed = g_.edge(el.e);
        const bool matched = prof_.in_matching(el.s, el.e);
        const int delta = matched ? -1 : 1;
        bump_load(el.s, ed.u, delta);
        bump_load(el.s, ed.v, delta);
        bump_balance(ed.u, matched ? 1 : -1);
        bump_balance(ed.v, matched ? 1 : -1);
        gain_ += matched ? -ed.w : ed.w;
        walk_.push_back(el);
        record();
    }

    void pop(int from) {
        (void)from;
        const WalkElement el = walk_.back();
        walk_.pop_back();
        const Edge& ed = g_.edge(el.e);
        const bool matched = prof_.in_matching(el.s, el.e);
        const int delta = matched ? 1 : -1;
        bump_load(el.s, ed.u, delta);
        bump_load(el.s, ed.v, delta);
        bump_balance(ed.u, matched ? -1 : 1);
        bump_balance(ed.v, matched ? -1 : 1);
        gain_ -= matched ? -ed.w : ed.w;
    }

    bool used(WalkElement el) const { return std::find(walk_.begin(), walk_.end(), el) != walk_.end(); }

    void record() {
        if (overloaded_ != 0 || deficit_ != 0) return;
        if (positive_only_ && gain_ <= 0) return;
        MultiWalk key = canonical_walk(walk_);
        if (seen_.count(key)) return;
        if (out_.edges.size() >= cap_) {
            out_.truncated = true;
            stop_ = true;
            return;
        }
        Hyperedge h;
        h.vertices = walk_vertex_set(g_, key);
        h.gain = gain_;
        h.walk = key;
        seen_.insert(std::move(key));
        out_.edges.push_back(std::move(h));
    }

    void extend(int cur) {
        if (stop_) return;
        const int remaining = l_ - static_cast<int>(walk_.size());
        if (remaining <= 0) return;
        if (overloaded_ > 2 * remaining || deficit_ > 2 * remaining) return;
        const WalkElement last = walk_.back();
        const bool last_matched = prof_.in_matching(last.s, last.e);
        for (int i = 0; i < prof_.alpha() && !stop_; ++i) {
            if (!last_matched) {
                const int e = prof_.mate_edge(i, cur);
                if (e < 0) continue;
                const WalkElement el{i, e};
                if (used(el)) continue;
                push(el, cur);
                extend(g_.edge(e).other(cur));
                pop(cur);
            } else {
                for (int e : g_.incident(cur)) {
                    if (stop_) break;
                    if (!prof_.in_subgraph(i, e) || prof_.in_matching(i, e)) continue;
                    const WalkElement el{i, e};
                    if (used(el)) continue;
                    push(el, cur);
                    extend(g_.edge(e).other(cur));
                    pop(cur);
                }
            }
        }
    }

    const Profile& prof_;
    const WeightedGraph& g_;
    const std::vector<char>& saturated_;
    int l_;
    std::size_t cap_;
    bool positive_only_;
    std::size_t n_ = 0;
    std::vector<int> load_;
    std::vector<int> balance_;
    int overloaded_ = 0;
    int deficit_ = 0;
    std::int64_t gain_ = 0;
    MultiWalk walk_;
    bool stop_ = false;
    std::unordered_set<MultiWalk, WalkHash> seen_;
    GainHypergraph out_;
};

}  // namespace

GainHypergraph build_H(const Profile& prof, const std::vector<char>& saturated, int l, std::size_t walk_cap,
                       bool positive_only) {
    if (l < 1) throw ConfigError("build_H: l must be at least 1");
    WalkEnumerator en(prof, saturated, l, walk_cap, positive_only);
    return en.run();
}

std::vector<int> greedy_hypergraph_matching(const GainHypergraph& H) {
    std::vector<int> order;
    int n = 0;
    for (std::size_t i = 0; i < H.edges.size(); ++i) {
        if (H.edges[i].gain > 0) order.push_back(static_cast<int>(i));
        for (int v : H.edges[i].vertices) n = std::max(n, v + 1);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return H.edges[static_cast<std::size_t>(a)].gain > H.edges[static_cast<std::size_t>(b)].gain;
    });
    std::vector<char> taken(static_cast<std::size_t>(n), 0);
    std::vector<int> chosen;
    for (int i : order) {
        const auto& vs = H.edges[static_cast<std::size_t>(i)].vertices;
        if (std::any_of(vs.begin(), vs.end(), [&](int v) { return taken[static_cast<std::size_t>(v)] != 0; }))
            continue;
        for (int v : vs) taken[static_cast<std::size_t>(v)] = 1;
        chosen.push_back(i);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

ReferenceAlgorithm make_reference(const WeightedGraph& g, const EdgeSet& crucial, const Probability& p) {
    EdgeSet rest = set_difference(all_edges(g), normalized(crucial));
    return [&g, rest = std::move(rest), p](const EdgeSet& H, RngStream stream) {
        if (rest.empty()) return mwm(g, H).edges;
        EdgeSet extended = set_union(H, sample_subset(rest, p, stream));
        return set_intersection(mwm(g, extended).edges, H);
    };
}

VimatchParams VimatchParams::closed_form(const Rational& epsilon) {
    const double eps = epsilon.get_d();
    auto clamp_int = [](long double x) {
        return x >= static_cast<long double>(INT_MAX) ? INT_MAX : static_cast<int>(std::ceil(x));
    };
    VimatchParams p;
    p.epsilon = epsilon;
    p.alpha = clamp_int(std::pow(static_cast<long double>(eps), -12.0L) + 1.0L);
    p.t = clamp_int(std::pow(static_cast<long double>(eps), -20.0L));
    int l = clamp_int(3.0L * std::pow(static_cast<long double>(eps), -3.0L));
    if (l < INT_MAX - 4) l = (l + 3) / 4 * 4;
    p.l = l;
    return p;
}

void VimatchParams::validate() const {
    if (epsilon && (*epsilon <= 0 || *epsilon >= 1)) throw ConfigError("vimatch epsilon must lie in (0, 1)");
    if (alpha < 2) throw ConfigError("alpha must be at least 2");
    if (t < 0) throw ConfigError("t must be nonnegative");
    if (l < 4 || l % 4 != 0) throw ConfigError("l must be a positive multiple of 4");
    if (K_gamma < 1) throw ConfigError("K_gamma must be positive");
    if (walk_cap < 1) throw ConfigError("walk_cap must be positive");
    if (!(budget > 0)) throw ConfigError("budget must be positive");
}

VimatchSession::VimatchSession(const WeightedGraph& g, EdgeSet crucial, Probability p, VimatchParams params,
                               Rational epsilon, ReferenceAlgorithm reference)
    : g_(&g), crucial_(normalized(std::move(crucial))), p_(std::move(p)), params_(std::move(params)),
      epsilon_(std::move(epsilon)), reference_(std::move(reference)) {
    params_.validate();
}

Matching VimatchSession::run(int r, const EdgeSet& realization, RngStream stream) {
    if (r < 0) throw ConfigError("findmatching depth must be nonnegative");
    const long double estimate =
        std::pow(static_cast<long double>(params_.alpha), static_cast<long double>(r)) * (1.0L + params_.K_gamma);
    if (estimate > static_cast<long double>(params_.budget))
        throw RecursionBudgetExceeded("findmatching: about " + std::to_string(static_cast<double>(estimate)) +
                                      " recursive calls exceeds budget " + std::to_string(params_.budget));
    top_ = stream;
    target_counts_.reset();
    tables_.assign(static_cast<std::size_t>(r) + 1, std::nullopt);
    trace_.assign(static_cast<std::size_t>(r), LevelTrace{});
    for (int d = 0; d < r; ++d) {
        trace_[static_cast<std::size_t>(d)].depth = d + 1;
        trace_[static_cast<std::size_t>(d)].alpha = params_.alpha;
    }
    calls_ = 0;
    Matching out;
    out.edges = recurse(r, normalized(realization), top_.child(StreamPurpose::Vimatch, 1));
    out.weight = g_->total_weight(out.edges);
    return out;
}

const std::vector<std::uint64_t>& VimatchSession::target_counts() {
    if (!target_counts_) {
        std::vector<std::uint64_t> counts(static_cast<std::size_t>(g_->n()), 0);
        const RngStream base = top_.child(StreamPurpose::Vimatch, 2);
        for (int k = 0; k < params_.K_gamma; ++k) {
            const RngStream s = base.child(static_cast<std::uint64_t>(k));
            EdgeSet H = sample_subset(crucial_, p_, s.child(0));
            for (int e : reference_(H, s.child(1))) {
                ++counts[static_cast<std::size_t>(g_->edge(e).u)];
                ++counts[static_cast<std::size_t>(g_->edge(e).v)];
            }
        }
        target_counts_ = std::move(counts);
    }
    return *target_counts_;
}

const SaturationTable& VimatchSession::table(int r) {
    auto& slot = tables_[static_cast<std::size_t>(r)];
    if (slot) return *slot;
    const auto& target = target_counts();
    std::vector<std::uint64_t> gamma(static_cast<std::size_t>(g_->n()), 0);
    const RngStream base = top_.child(StreamPurpose::Vimatch, 16 + static_cast<std::uint64_t>(r));
    for (int k = 0; k < params_.K_gamma; ++k) {
        const RngStream s = base.child(static_cast<std::uint64_t>(k));
        EdgeSet H = sample_subset(crucial_, p_, s.child(0));
        for (int e : recurse(r - 1, H, s.child(1))) {
            ++gamma[static_cast<std::size_t>(g_->edge(e).u)];
            ++gamma[static_cast<std::size_t>(g_->edge(e).v)];
        }
    }
    SaturationTable t;
    t.epsilon = epsilon_;
    t.alpha = params_.alpha;
    const Rational K(params_.K_gamma);
    const Rational slack = pow(epsilon_, 3) - Rational(1, params_.alpha);
    t.gamma_prev.reserve(gamma.size());
    t.target.reserve(gamma.size());
    t.saturated.assign(gamma.size(), 0);
    for (std::size_t v = 0; v < gamma.size(); ++v) {
        t.gamma_prev.emplace_back(Rational(static_cast<unsigned long>(gamma[v])) / K);
        t.target.emplace_back(Rational(static_cast<unsigned long>(target[v])) / K);
        t.saturated[v] = !(t.gamma_prev.back() <= t.target.back() + slack) ? 1 : 0;
    }
    slot = std::move(t);
    return *slot;
}

EdgeSet VimatchSession::recurse(int r, const EdgeSet& realization, RngStream stream) {
    ++calls_;
    if (r == 0) return {};
    const SaturationTable& tab = table(r);

    std::vector<ProfileEntry> entries(static_cast<std::size_t>(params_.alpha));
    entries[0].subgraph = realization;
    for (int i = 1; i < params_.alpha; ++i)
        entries[static_cast<std::size_t>(i)].subgraph =
            sample_subset(crucial_, p_, stream.child(2 * static_cast<std::uint64_t>(i)));
    for (int i = 0; i < params_.alpha; ++i)
        entries[static_cast<std::size_t>(i)].matching = recurse(
            r - 1, entries[static_cast<std::size_t>(i)].subgraph, stream.child(2 * static_cast<std::uint64_t>(i) + 1));

    const Profile prof(*g_, std::move(entries));
    const GainHypergraph H = build_H(prof, tab.saturated, params_.l, params_.walk_cap, true);
    const std::vector<int> selected = greedy_hypergraph_matching(H);

    std::vector<EdgeSet> flips(static_cast<std::size_t>(params_.alpha));
    std::int64_t gain_sum = 0;
    for (int h : selected) {
        gain_sum += H.edges[static_cast<std::size_t>(h)].gain;
        for (const auto& el : H.edges[static_cast<std::size_t>(h)].walk) flips[static_cast<std::size_t>(el.s)].push_back(el.e);
    }
    std::int64_t before = prof.total_weight(), after = 0;
    EdgeSet first;
    for (int i = 0; i < params_.alpha; ++i) {
        EdgeSet& f = flips[static_cast<std::size_t>(i)];
        std::sort(f.begin(), f.end());
        const EdgeSet& m = prof.entry(i).matching;
        EdgeSet next;
        std::set_symmetric_difference(m.begin(), m.end(), f.begin(), f.end(), std::back_inserter(next));
        if (!is_matching(*g_, next)) throw InvariantViolation("selected walks produced a non-matching");
        after += g_->total_weight(next);
        if (i == 0) first = std::move(next);
    }

    LevelTrace& tr = trace_[static_cast<std::size_t>(r) - 1];
    ++tr.calls;
    tr.saturated += static_cast<std::uint64_t>(std::count(tab.saturated.begin(), tab.saturated.end(), 1));
    tr.hyperedges += H.edges.size();
    tr.selected += selected.size();
    tr.gain_sum += gain_sum;
    tr.residual += (after - before) - gain_sum;
    tr.truncated += H.truncated ? 1 : 0;
    return first;
}

Matching findmatching(int r, const WeightedGraph& g, const EdgeSet& realization, const Probability& p,
                      const VimatchParams& params, RngStream stream, std::vector<LevelTrace>* trace) {
    if (!params.epsilon) throw ConfigError("findmatching needs an epsilon");
    const EdgeSet crucial = all_edges(g);
    VimatchSession session(g, crucial, p, params, *params.epsilon, make_reference(g, crucial, p));
    Matching m = session.run(r, realization, stream);
    if (trace) *trace = session.trace();
    return m;
}

namespace {

// Edges of the component of `start` in the subgraph `alive`, ordered along the path or cycle.
std::vector<int> component_order(const WeightedGraph& g, const std::vector<char>& alive, int start) {
    auto alive_at = [&](int v) {
        std::vector<int> out;
        for (int e : g.incident(v))
            if (alive[static_cast<std::size_t>(e)]) out.push_back(e);
        return out;
    };
    // walk from start in one direction to find an end
    int end_vertex = g.edge(start).u;
    int prev_edge = start;
    bool cycle = false;
    {
        int v = g.edge(start).u;
        int e = start;
        for (;;) {
            auto inc = alive_at(v);
            int next = -1;
            for (int x : inc)
                if (x != e) next = x;
            if (next < 0) {
                end_vertex = v;
                prev_edge = e;
                break;
            }
            if (next == start) {
                cycle = true;
                break;
            }
            e = next;
            v = g.edge(e).other(v);
        }
    }
    std::vector<int> order;
    int v, e;
    if (cycle) {
        v = g.edge(start).u;
        e = start;
    } else {
        v = end_vertex;
        e = prev_edge;
    }
    (void)prev_edge;
    for (;;) {
        order.push_back(e);
        v = g.edge(e).other(v);
        int next = -1;
        for (int x : alive_at(v))
            if (x != e) next = x;
        if (next < 0 || next == order.front()) break;
        e = next;
    }
    return order;
}

MultiWalk tag(int s, const std::vector<int>& edges) {
    MultiWalk w;
    for (int e : edges) w.push_back({s, e});
    return w;
}

MultiWalk concat(const MultiWalk& a, const MultiWalk& b) {
    MultiWalk w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

bool is_cycle(const WeightedGraph& g, const std::vector<int>& order) {
    if (order.size() < 3) return false;
    const Edge& a = g.edge(order.front());
    const Edge& b = g.edge(order.back());
    // the closing vertex is shared by the first and last edges
    return a.touches(b.u) || a.touches(b.v);
}

// Orientations of a component: both directions, and every rotation when it is a cycle.
std::vector<std::vector<int>> orientations(const WeightedGraph& g, const std::vector<int>& order) {
    std::vector<std::vector<int>> out;
    const bool cyc = is_cycle(g, order);
    const std::size_t k = order.size();
    const std::size_t rotations = cyc ? k : 1;
    for (std::size_t r = 0; r < rotations; ++r) {
        std::vector<int> fwd(k);
        for (std::size_t i = 0; i < k; ++i) fwd[i] = order[(i + r) % k];
        out.push_back(fwd);
        std::reverse(fwd.begin(), fwd.end());
        out.push_back(fwd);
    }
    return out;
}

std::optional<MultiWalk> try_expand(const MultiWalk& W, const MultiWalk& piece, const Profile& prof) {
    MultiWalk a = concat(W, piece);
    if (is_alternating(a, prof)) return a;
    MultiWalk b = concat(piece, W);
    if (is_alternating(b, prof)) return b;
    return std::nullopt;
}

std::optional<MultiWalk> try_expand_component(const MultiWalk& W, int s, const std::vector<int>& order,
                                              const Profile& prof) {
    for (const auto& o : orientations(prof.graph(), order)) {
        if (auto r = try_expand(W, tag(s, o), prof)) return r;
    }
    return std::nullopt;
}

}  // namespace

GainHypergraph construct_H_prime(const Profile& prof, const std::vector<char>& saturated,
                                 const std::vector<EdgeSet>& reference_matchings, int l, RngStream stream) {
    const WeightedGraph& g = prof.graph();
    const int alpha = prof.alpha();
    if (static_cast<int>(reference_matchings.size()) != alpha)
        throw ConfigError("construct_H_prime: one reference matching per entry required");
    if (l < 4 || l % 4 != 0) throw ConfigError("construct_H_prime: l must be a positive multiple of 4");

    std::vector<EdgeSet> ref(static_cast<std::size_t>(alpha));
    std::vector<int> count_ref(static_cast<std::size_t>(g.n()), 0);
    for (int i = 0; i < alpha; ++i) {
        ref[static_cast<std::size_t>(i)] = normalized(reference_matchings[static_cast<std::size_t>(i)]);
        const EdgeSet& r = ref[static_cast<std::size_t>(i)];
        if (!is_matching(g, r)) throw ConfigError("reference matching is not a matching");
        for (int e : r) {
            if (!prof.in_subgraph(i, e)) throw ConfigError("reference matching edge outside its subgraph");
            ++count_ref[static_cast<std::size_t>(g.edge(e).u)];
            ++count_ref[static_cast<std::size_t>(g.edge(e).v)];
        }
    }
    auto is_sat = [&](int v) {
        return static_cast<std::size_t>(v) < saturated.size() && saturated[static_cast<std::size_t>(v)];
    };
    std::vector<char> in_Vr(static_cast<std::size_t>(g.n()), 0);
    for (int v = 0; v < g.n(); ++v)
        in_Vr[static_cast<std::size_t>(v)] = is_sat(v) && count_ref[static_cast<std::size_t>(v)] > prof.matched_count(v);

    std::vector<std::vector<char>> alive(static_cast<std::size_t>(alpha), std::vector<char>(static_cast<std::size_t>(g.m()), 0));
    std::vector<int> alive_count(static_cast<std::size_t>(alpha), 0);
    for (int i = 0; i < alpha; ++i) {
        const EdgeSet& m = prof.entry(i).matching;
        const EdgeSet& r = ref[static_cast<std::size_t>(i)];
        EdgeSet diff;
        std::set_symmetric_difference(m.begin(), m.end(), r.begin(), r.end(), std::back_inserter(diff));
        for (int e : diff) {
            const bool in_ref = std::binary_search(r.begin(), r.end(), e);
            if (in_ref && (in_Vr[static_cast<std::size_t>(g.edge(e).u)] || in_Vr[static_cast<std::size_t>(g.edge(e).v)]))
                continue;
            alive[static_cast<std::size_t>(i)][static_cast<std::size_t>(e)] = 1;
            ++alive_count[static_cast<std::size_t>(i)];
        }
    }
    auto remove = [&](int s, const MultiWalk& piece) {
        for (const auto& el : piece) {
            if (el.s == s && alive[static_cast<std::size_t>(s)][static_cast<std::size_t>(el.e)]) {
                alive[static_cast<std::size_t>(s)][static_cast<std::size_t>(el.e)] = 0;
                --alive_count[static_cast<std::size_t>(s)];
            }
        }
    };
    auto first_alive = [&](int i) {
        for (int e = 0; e < g.m(); ++e)
            if (alive[static_cast<std::size_t>(i)][static_cast<std::size_t>(e)]) return e;
        return -1;
    };

    std::vector<MultiWalk> walks;
    for (;;) {
        int i0 = -1;
        for (int i = 0; i < alpha && i0 < 0; ++i)
            if (alive_count[static_cast<std::size_t>(i)] > 0) i0 = i;
        if (i0 < 0) break;
        MultiWalk W;
        const auto comp = component_order(g, alive[static_cast<std::size_t>(i0)], first_alive(i0));
        if (auto x = try_expand_component(W, i0, comp, prof)) W = *x;
        remove(i0, tag(i0, comp));

        bool grew = true;
        while (grew) {
            grew = false;
            for (int j = 0; j < alpha && !grew; ++j) {
                std::vector<char> visited(static_cast<std::size_t>(g.m()), 0);
                for (int e = 0; e < g.m() && !grew; ++e) {
                    if (!alive[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)] || visited[static_cast<std::size_t>(e)])
                        continue;
                    const auto c = component_order(g, alive[static_cast<std::size_t>(j)], e);
                    for (int x : c) visited[static_cast<std::size_t>(x)] = 1;
                    if (auto nw = try_expand_component(W, j, c, prof)) {
                        W = *nw;
                        remove(j, tag(j, c));
                        grew = true;
                    }
                }
            }
        }
        if (!W.empty()) walks.push_back(std::move(W));
    }

    const int q = l / 4;
    GainHypergraph out;
    for (std::size_t wi = 0; wi < walks.size(); ++wi) {
        const MultiWalk& W = walks[wi];
        Rng rng(stream.child(wi));
        const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
        std::vector<MultiWalk> pieces;
        if (static_cast<int>(W.size()) <= l) {
            pieces.push_back(W);
        } else {
            pieces.emplace_back();
            for (std::size_t k = 0; k < W.size(); ++k) {
                const int pos = static_cast<int>(k) + 1;
                const bool unmatched = !prof.in_matching(W[k].s, W[k].e);
                if (unmatched && (pos % q == x || pos % q == x + 1)) {
                    pieces.emplace_back();
                } else {
                    pieces.back().push_back(W[k]);
                }
            }
            if (pieces.size() >= 2 && !pieces.front().empty() && !pieces.back().empty()) {
                if (auto merged = try_expand(pieces.front(), pieces.back(), prof)) {
                    pieces.front() = *merged;
                    pieces.back().clear();
                }
            }
        }
        for (auto& piece : pieces) {
            if (piece.empty()) continue;
            if (!is_applicable(piece, prof, saturated)) {
                ++out.dropped;
                continue;
            }
            Hyperedge h;
            h.vertices = walk_vertex_set(g, piece);
            h.gain = gain(piece, prof);
            h.walk = std::move(piece);
            out.edges.push_back(std::move(h));
        }
    }
    return out;
}

}  // namespace stochmatch
