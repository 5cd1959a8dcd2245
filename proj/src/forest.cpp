#include "ham/forest.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "ham/matching.hpp"
#include "json.hpp"

namespace ham::forest {

std::string LinearForest::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (auto& p : paths) j.push_back(p);
    return j.dump();
}

bool validate_linear_forest(const Graph& g, const LinearForest& f, std::string* why) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    VertexSet seen(g.n());
    for (auto& p : f.paths) {
        if (p.empty()) return fail("empty path");
        for (int v : p) {
            if (seen.contains(v)) return fail("vertex on two paths");
            seen.insert(v);
        }
        for (size_t i = 0; i + 1 < p.size(); ++i)
            if (!g.has_edge(p[i], p[i + 1])) return fail("non-edge inside a path");
    }
    return true;
}

CoverResult cover_bad_set(const Graph& g, const VertexSet& x, const VertexSet& y,
                          double delta) {
    CoverResult res;
    if (!x.subset_of(y)) throw std::invalid_argument("cover_bad_set: X must lie in Y");
    int n = g.n();
    if (x.empty()) {
        res.ok = true;
        return res;
    }
    VertexSet rest = y - x;  // Y \ X

    // (a) ordering: every x_i sees delta/2 of {earlier} ∪ (Y \ X).
    std::vector<int> order;
    VertexSet eligible = rest;
    VertexSet pending = x;
    while (!pending.empty()) {
        int chosen = -1;
        pending.for_each([&](int v) {
            if (chosen >= 0) return;
            if (g.degree_into(v, eligible) >= delta / 2) chosen = v;
        });
        if (chosen < 0) {
            res.note = "ordering construction stalled (min-degree certificate falsified)";
            return res;
        }
        order.push_back(chosen);
        pending.erase(chosen);
        eligible.insert(chosen);
    }

    // (b) doubled bipartite matching: two copies per x_i against its eligible
    // neighbors (earlier x's and Y \ X).
    std::vector<int> rank(n, -1);
    for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = int(i);
    std::vector<int> right_ids;   // compacted Y vertices
    std::vector<int> right_of(n, -1);
    y.for_each([&](int v) {
        right_of[v] = int(right_ids.size());
        right_ids.push_back(v);
    });
    int t = int(order.size());
    std::vector<std::vector<int>> adj(2 * t);
    for (int i = 0; i < t; ++i) {
        int v = order[i];
        for (int w : g.neighbors(v)) {
            if (!y.contains(w)) continue;
            bool earlier_x = x.contains(w) && rank[w] >= 0 && rank[w] < i;
            bool outside = rest.contains(w);
            if (earlier_x || outside) {
                adj[2 * i].push_back(right_of[w]);
                adj[2 * i + 1].push_back(right_of[w]);
            }
        }
    }
    auto match = max_bipartite_matching(adj, int(right_ids.size()));
    if (match.size < 2 * t) {
        res.note = "matching does not cover the doubled copies";
        std::set<int> wit;
        for (int l : match.hall_violator) wit.insert(order[l / 2]);
        res.hall_witness.assign(wit.begin(), wit.end());
        return res;
    }

    // (c) binary trees: each x_i points at its two matched targets.
    std::vector<std::array<int, 2>> kids(n, {-1, -1});
    std::vector<int> up(n, -1);
    for (int i = 0; i < t; ++i) {
        int v = order[i];
        int a = right_ids[match.match_left[2 * i]];
        int b = right_ids[match.match_left[2 * i + 1]];
        kids[v] = {std::min(a, b), std::max(a, b)};
        up[a] = v;
        up[b] = v;
    }

    // (d) peel root-through paths until X is gone. An alive internal vertex
    // always has both children available: a child is consumed only as part of
    // a peel that also contains its parent.
    VertexSet alive_x = x;
    while (!alive_x.empty()) {
        // lowest-index live root (live x with no live parent)
        int root = -1;
        alive_x.for_each([&](int v) {
            if (root >= 0) return;
            int p = up[v];
            bool has_live_parent = p >= 0 && x.contains(p) && alive_x.contains(p);
            if (!has_live_parent) root = v;
        });
        if (root < 0) throw std::logic_error("cover peel: no root in a nonempty forest");
        // two descending chains from the root's children down to Y\X leaves
        std::vector<int> left, right;
        auto walk = [&](int start, std::vector<int>& out) {
            int cur = start;
            while (true) {
                out.push_back(cur);
                if (!x.contains(cur)) break;
                cur = kids[cur][0];
            }
        };
        walk(kids[root][0], left);
        walk(kids[root][1], right);
        std::vector<int> path;
        for (auto it = left.rbegin(); it != left.rend(); ++it) path.push_back(*it);
        path.push_back(root);
        for (int v : right) path.push_back(v);
        for (int v : path)
            if (x.contains(v)) alive_x.erase(v);
        res.forest.paths.push_back(std::move(path));
    }

    // every path: endpoints outside X, inner inside X
    for (auto& p : res.forest.paths) {
        if (p.size() < 3 || x.contains(p.front()) || x.contains(p.back())) {
            res.note = "peeled path violates the endpoint contract";
            return res;
        }
        for (size_t i = 1; i + 1 < p.size(); ++i)
            if (!x.contains(p[i])) {
                res.note = "peeled path has an inner vertex outside X";
                return res;
            }
    }
    res.ok = true;
    return res;
}

ContractedDigraph contract_and_orient(const Graph& g, const VertexSet& y,
                                      const LinearForest& cover, Rng& rng) {
    ContractedDigraph cd;
    cd.seed = rng();
    Rng local(cd.seed);
    int n = g.n();

    VertexSet inner(n), ends(n);
    for (auto& p : cover.paths) {
        ends.insert(p.front());
        ends.insert(p.back());
        for (size_t i = 1; i + 1 < p.size(); ++i) inner.insert(p[i]);
    }
    std::vector<int> plains;
    y.for_each([&](int v) {
        if (!inner.contains(v) && !ends.contains(v)) plains.push_back(v);
    });

    cd.n_z = cover.path_count();
    int na = cd.n_z + int(plains.size());
    cd.h = Digraph(na);
    cd.gvert.assign(na, -1);
    cd.aux_of.assign(n, -1);
    std::uniform_int_distribution<int> coin(0, 1);
    cd.z_path.resize(cd.n_z);
    for (int i = 0; i < cd.n_z; ++i) {
        std::vector<int> p = cover.paths[i];
        if (coin(local)) std::reverse(p.begin(), p.end());
        // front = entry (z-), back = exit (z+)
        cd.z_path[i] = std::move(p);
        cd.aux_of[cd.z_path[i].front()] = i;
        cd.aux_of[cd.z_path[i].back()] = i;
    }
    for (size_t j = 0; j < plains.size(); ++j) {
        int a = cd.n_z + int(j);
        cd.gvert[a] = plains[j];
        cd.aux_of[plains[j]] = a;
    }

    // rule 1: uniform orientation of the plain-plain edges
    for (size_t j = 0; j < plains.size(); ++j) {
        int u = plains[j];
        for (int v : g.neighbors(u)) {
            if (v <= u) continue;
            int av = cd.aux_of[v];
            if (av < cd.n_z || av < 0) continue;  // not plain
            if (!y.contains(v)) continue;
            if (coin(local))
                cd.h.add_arc(cd.aux_of[u], av);
            else
                cd.h.add_arc(av, cd.aux_of[u]);
        }
    }
    // rules 2-3: arcs leave via the exit vertex and enter via the entry vertex
    for (int i = 0; i < cd.n_z; ++i) {
        int exit_v = cd.z_path[i].back(), entry_v = cd.z_path[i].front();
        for (int w : g.neighbors(exit_v)) {
            int aw = cd.aux_of[w];
            if (aw < 0 || !y.contains(w)) continue;
            if (aw >= cd.n_z) {
                cd.h.add_arc(i, aw);
            } else if (aw != i && w == cd.z_path[aw].front()) {
                cd.h.add_arc(i, aw);  // exit of i meets entry of aw
            }
        }
        for (int w : g.neighbors(entry_v)) {
            int aw = cd.aux_of[w];
            if (aw < 0 || !y.contains(w)) continue;
            if (aw >= cd.n_z) cd.h.add_arc(aw, i);
        }
    }
    cd.h.sort_adjacency();
    return cd;
}

RegularResult regular_subdigraph(const Digraph& h, int r, uint64_t seed) {
    RegularResult res;
    int n = h.n;
    res.r = Digraph(n);
    std::vector<std::set<int>> remaining(n);
    for (int u = 0; u < n; ++u) remaining[u] = {h.out[u].begin(), h.out[u].end()};
    for (int round = 0; round < r; ++round) {
        std::vector<std::vector<int>> adj(n);
        for (int u = 0; u < n; ++u) adj[u].assign(remaining[u].begin(), remaining[u].end());
        auto match = max_bipartite_matching(adj, n, seed + round + 1);
        if (match.size < n) {
            res.failed_round = round;
            res.hall_witness = match.hall_violator;
            res.note = "round lacks a perfect matching";
            return res;
        }
        res.factors.push_back(match.match_left);
        for (int u = 0; u < n; ++u) {
            res.r.add_arc(u, match.match_left[u]);
            remaining[u].erase(match.match_left[u]);
        }
    }
    res.r.sort_adjacency();
    res.ok = true;
    return res;
}

namespace {

// Merges paths head-to-tail: arcs (end of one path) -> (start of another).
struct PathMerger {
    std::vector<int> next, prev, head_of;  // head_of: vertex -> path head if it ends a path
    std::vector<int> start_at, end_at;     // vertex -> 1 if path start / end

    explicit PathMerger(int n) : next(n, -1), prev(n, -1) {}

    void add_path(const std::vector<int>& p) {
        for (size_t i = 0; i + 1 < p.size(); ++i) {
            next[p[i]] = p[i + 1];
            prev[p[i + 1]] = p[i];
        }
    }

    bool is_start(int v) const { return prev[v] < 0; }
    bool is_end(int v) const { return next[v] < 0; }

    // returns false when u,v belong to the same path (would close a cycle)
    bool merge(int u, int v) {
        if (!is_end(u) || !is_start(v)) return false;
        // walk from v to its end; if we meet u the merge would be a cycle
        for (int w = v; w >= 0; w = next[w])
            if (w == u) return false;
        next[u] = v;
        prev[v] = u;
        return true;
    }

    std::vector<std::vector<int>> extract(int n) const {
        std::vector<std::vector<int>> out;
        std::vector<char> seen(n, 0);
        for (int v = 0; v < n; ++v) {
            if (seen[v] || !is_start(v)) continue;
            std::vector<int> p;
            for (int w = v; w >= 0; w = next[w]) {
                p.push_back(w);
                seen[w] = 1;
            }
            out.push_back(std::move(p));
        }
        return out;
    }
};

}  // namespace

std::vector<std::vector<int>> few_path_forest(const Digraph& r_regular,
                                              const Params& cfg, uint64_t seed) {
    int n = r_regular.n;
    if (n == 0) return {};
    int r = int(r_regular.out[0].size());
    auto fac = regular_subdigraph(r_regular, r, seed ^ 0xabcdef12345ull);
    if (!fac.ok) {
        // An r-regular digraph always splits into r permutations; if matching
        // failed the input was not regular. Degrade to single arcs per vertex.
        throw std::invalid_argument("few_path_forest: input digraph is not regular");
    }

    // factor 0: cycles -> open one arc each
    PathMerger pm(n);
    const auto& f0 = fac.factors[0];
    std::vector<char> seen(n, 0);
    for (int v = 0; v < n; ++v) {
        if (seen[v]) continue;
        std::vector<int> cyc;
        int w = v;
        while (!seen[w]) {
            seen[w] = 1;
            cyc.push_back(w);
            w = f0[w];
        }
        pm.add_path(cyc);  // drops the closing arc implicitly
    }
    // stitch with the remaining factors until nothing merges
    for (int pass = 0; pass < cfg.stitch_passes; ++pass) {
        bool any = false;
        for (int f = 1; f < r; ++f)
            for (int u = 0; u < n; ++u) {
                int v = fac.factors[f][u];
                if (pm.is_end(u) && pm.is_start(v) && pm.merge(u, v)) any = true;
            }
        if (!any) break;
    }
    return pm.extract(n);
}

ForestResult spanning_forest_good_endpoints(const Graph& g, const VertexSet& x,
                                            const VertexSet& y, double delta,
                                            const Params& cfg, Rng& rng) {
    ForestResult res;
    int n = g.n();
    if (y.empty()) {
        res.ok = true;
        return res;
    }
    auto cover = cover_bad_set(g, x, y, delta);
    if (!cover.ok) {
        res.stage = "cover-bad-set";
        res.note = cover.note;
        return res;
    }
    auto cd = contract_and_orient(g, y, cover.forest, rng);
    int na = cd.h.n;
    if (na == 0) {
        res.ok = true;
        return res;
    }

    // Vertices that cannot sit inside a permutation factor become singleton
    // paths; the regular extraction runs on the rest.
    std::vector<char> active(na, 1);
    bool changed = true;
    std::vector<int> outd(na), ind(na);
    while (changed) {
        changed = false;
        for (int v = 0; v < na; ++v) {
            if (!active[v]) continue;
            outd[v] = 0;
            for (int w : cd.h.out[v]) outd[v] += active[w];
            ind[v] = 0;
            for (int w : cd.h.in[v]) ind[v] += active[w];
        }
        for (int v = 0; v < na; ++v)
            if (active[v] && (outd[v] == 0 || ind[v] == 0)) {
                active[v] = 0;
                changed = true;
                ++res.singleton_fallbacks;
            }
    }
    std::vector<int> live;
    for (int v = 0; v < na; ++v)
        if (active[v]) live.push_back(v);
    std::vector<int> to_live(na, -1);
    for (size_t i = 0; i < live.size(); ++i) to_live[live[i]] = int(i);

    std::vector<std::vector<int>> aux_paths;
    if (!live.empty()) {
        Digraph sub(int(live.size()));
        for (int v : live)
            for (int w : cd.h.out[v])
                if (active[w]) sub.add_arc(to_live[v], to_live[w]);
        sub.sort_adjacency();
        int dmin = 1 << 30;
        for (int v = 0; v < sub.n; ++v)
            dmin = std::min({dmin, int(sub.out[v].size()), int(sub.in[v].size())});
        int r_eff = std::clamp(cfg.regular_r, 1, std::max(1, dmin));
        auto reg = regular_subdigraph(sub, r_eff, rng());
        if (!reg.ok) {
            res.stage = "regular-subdigraph";
            res.note = reg.note;
            return res;
        }
        for (auto& p : few_path_forest(reg.r, cfg, rng())) {
            for (int& v : p) v = live[v];
            aux_paths.push_back(std::move(p));
        }
    }
    for (int v = 0; v < na; ++v)
        if (!active[v]) aux_paths.push_back({v});

    // final merge pass with every arc of H
    {
        PathMerger pm(na);
        for (auto& p : aux_paths) pm.add_path(p);
        for (int pass = 0; pass < cfg.stitch_passes; ++pass) {
            bool any = false;
            for (int u = 0; u < na; ++u) {
                if (!pm.is_end(u)) continue;
                for (int w : cd.h.out[u])
                    if (pm.is_start(w) && pm.merge(u, w)) {
                        any = true;
                        break;
                    }
            }
            if (!any) break;
        }
        aux_paths = pm.extract(na);
    }

    // expand contractions
    for (auto& p : aux_paths) {
        std::vector<int> gp;
        for (int a : p) {
            if (a < cd.n_z)
                gp.insert(gp.end(), cd.z_path[a].begin(), cd.z_path[a].end());
            else
                gp.push_back(cd.gvert[a]);
        }
        res.forest.paths.push_back(std::move(gp));
    }

    std::string why;
    if (!validate_linear_forest(g, res.forest, &why)) {
        res.stage = "expand";
        res.note = why;
        return res;
    }
    if (!(res.forest.cover(n) == y)) {
        res.stage = "expand";
        res.note = "forest does not span Y exactly";
        return res;
    }
    for (auto& p : res.forest.paths)
        if (x.contains(p.front()) || x.contains(p.back())) {
            res.stage = "expand";
            res.note = "a path endpoint landed in X";
            return res;
        }
    res.ok = true;
    return res;
}

}  // namespace ham::forest
