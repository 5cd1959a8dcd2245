#include "ham/connector.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace ham::connector {

AuxDigraph build_aux(const Graph& g, const PairList& m, const VertexSet* scope,
                     Rng& rng) {
    if (!pairs_disjoint(m)) throw std::invalid_argument("build_aux: pairs overlap");
    int n = g.n();
    AuxDigraph aux;
    aux.pairs = m;
    aux.n_pairs = int(m.size());
    aux.seed = rng();
    Rng colorer(aux.seed);

    VertexSet vm = pair_vertices(n, m);
    if (scope) {
        // Scope must contain the pairs.
        if (!vm.subset_of(*scope))
            throw std::invalid_argument("build_aux: scope misses pair vertices");
    }
    aux.red.resize(m.size());
    aux.blue.resize(m.size());
    std::uniform_int_distribution<int> coin(0, 1);
    for (size_t i = 0; i < m.size(); ++i) {
        auto [x, y] = m[i];
        if (x != y && coin(colorer)) std::swap(x, y);
        aux.red[i] = x;  // x = red, y = blue ({x,x} is both)
        aux.blue[i] = y;
    }

    std::vector<int> plains;
    VertexSet sc = scope ? *scope : VertexSet::full(n);
    sc.for_each([&](int v) {
        if (!vm.contains(v)) plains.push_back(v);
    });

    int na = aux.n_pairs + int(plains.size());
    aux.h = Digraph(na);
    aux.gvert.resize(na);
    aux.pair_of.assign(na, -1);
    aux.aux_of.assign(n, -1);
    for (int i = 0; i < aux.n_pairs; ++i) {
        aux.gvert[i] = aux.red[i];
        aux.pair_of[i] = i;
        aux.aux_of[aux.red[i]] = i;
    }
    for (size_t j = 0; j < plains.size(); ++j) {
        int a = aux.n_pairs + int(j);
        aux.gvert[a] = plains[j];
        aux.aux_of[plains[j]] = a;
    }
    // blue vertex -> its pair node (for arc construction).
    std::vector<int> pair_of_blue(n, -1);
    for (int i = 0; i < aux.n_pairs; ++i) pair_of_blue[aux.blue[i]] = i;

    for (int a = 0; a < na; ++a) {
        int u = aux.gvert[a];
        for (int w : g.neighbors(u)) {
            int j = pair_of_blue[w];
            if (j >= 0 && j != aux.pair_of[a]) aux.h.add_arc(a, j);
        }
    }
    aux.h.sort_adjacency();
    return aux;
}

std::vector<int> dfs_long_path(const Digraph& h, int k) {
    (void)k;
    int n = h.n;
    std::vector<char> visited(n, 0);
    std::vector<int> iter(n, 0), stack;
    std::vector<int> best;
    for (int root = 0; root < n; ++root) {
        if (visited[root]) continue;
        stack.clear();
        stack.push_back(root);
        visited[root] = 1;
        while (!stack.empty()) {
            if (stack.size() > best.size()) best = stack;
            int u = stack.back();
            bool advanced = false;
            while (iter[u] < int(h.out[u].size())) {
                int w = h.out[u][iter[u]++];
                if (!visited[w]) {
                    visited[w] = 1;
                    stack.push_back(w);
                    advanced = true;
                    break;
                }
            }
            if (!advanced) stack.pop_back();
        }
    }
    return best;
}

AltPath lift_pair_path(const AuxDigraph& aux, const std::vector<int>& aux_path) {
    AltPath p;
    for (int a : aux_path) {
        int i = aux.pair_of[a];
        if (i < 0) throw std::invalid_argument("lift: non-pair node on path");
        p.pairs_used.push_back(i);
        int y = aux.blue[i], x = aux.red[i];
        p.vertices.push_back(y);
        if (x != y) {
            p.vertices.push_back(x);
            p.virtual_edges.push_back({y, x});
        }
    }
    return p;
}

bool validate_alt_path(const Graph& g, const PairList& m, const AltPath& p,
                       std::string* why) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    std::set<int> seen;
    for (int v : p.vertices)
        if (!seen.insert(v).second) return fail("vertex reused");
    std::set<int> used(p.pairs_used.begin(), p.pairs_used.end());
    if (used.size() != p.pairs_used.size()) return fail("pair used twice");

    // Pair edges must be actual pairs of m; everything else must be a G-edge,
    // and no two consecutive non-pair edges may both avoid the pair structure
    // (alternation: among any two consecutive edges, one belongs to a pair or
    // the shared vertex is a degenerate {x,x} pair).
    std::set<std::pair<int, int>> pair_edges;
    VertexSet degenerate(g.n());
    for (auto [x, y] : m) {
        if (x == y)
            degenerate.insert(x);
        else
            pair_edges.insert({std::min(x, y), std::max(x, y)});
    }
    auto is_pair_edge = [&](int u, int v) {
        return pair_edges.count({std::min(u, v), std::max(u, v)}) > 0;
    };
    std::vector<char> edge_is_pair;
    for (size_t i = 0; i + 1 < p.vertices.size(); ++i) {
        int u = p.vertices[i], v = p.vertices[i + 1];
        if (is_pair_edge(u, v)) {
            edge_is_pair.push_back(1);
        } else if (g.has_edge(u, v)) {
            edge_is_pair.push_back(0);
        } else {
            return fail("segment is neither a G-edge nor a pair edge");
        }
    }
    for (size_t i = 0; i + 1 < edge_is_pair.size(); ++i) {
        if (!edge_is_pair[i] && !edge_is_pair[i + 1] &&
            !degenerate.contains(p.vertices[i + 1]))
            return fail("two consecutive G-edges without a pair between them");
    }
    return true;
}

AltPath alt_path_spanning(const Graph& g, const PairList& m, int k, Rng& rng) {
    auto aux = build_aux(g, m, nullptr, rng);
    // Restrict to the pair nodes: they occupy aux indices [0, n_pairs).
    Digraph hx(aux.n_pairs);
    for (int a = 0; a < aux.n_pairs; ++a)
        for (int b : aux.h.out[a])
            if (b < aux.n_pairs) hx.add_arc(a, b);
    hx.sort_adjacency();
    auto path = dfs_long_path(hx, k);
    return lift_pair_path(aux, path);
}

void GoodEmbedding::init(const Digraph& hh, int s_, int d_) {
    h = &hh;
    s = s_;
    d_cap = d_;
    used.assign(hh.n, 0);
    parent.assign(hh.n, -2);
    deg_f.assign(hh.n, 0);
    children.assign(hh.n, {});
    size = 0;
}

void GoodEmbedding::add_root(int v) {
    if (used[v]) return;
    used[v] = 1;
    parent[v] = -1;
    ++size;
}

namespace {

// Full verification by subset DP over out-neighborhood masks; only viable at
// tiny aux orders.
bool goodness_exhaustive_impl(const GoodEmbedding& emb) {
    const Digraph& h = *emb.h;
    int n = h.n;
    std::vector<uint32_t> outmask(n, 0);
    uint32_t image = 0;
    for (int v = 0; v < n; ++v) {
        for (int w : h.out[v]) outmask[v] |= (1u << w);
        if (emb.used[v]) image |= (1u << v);
    }
    int full = 1 << n;
    std::vector<uint32_t> gamma(full, 0);
    std::vector<int> demand(full, 0);
    for (int mask = 1; mask < full; ++mask) {
        int b = __builtin_ctz(mask);
        int rest = mask & (mask - 1);
        gamma[mask] = gamma[rest] | outmask[b];
        int dem = emb.d_cap - (emb.used[b] ? emb.deg_f[b] : 0);
        demand[mask] = demand[rest] + dem;
    }
    for (int mask = 1; mask < full; ++mask) {
        if (__builtin_popcount(mask) > emb.s) continue;
        int lhs = __builtin_popcount(gamma[mask] & ~image);
        int rhs = demand[mask] + __builtin_popcount(image & mask);
        if (lhs < rhs) return false;
    }
    return true;
}

bool goodness_sampled(const GoodEmbedding& emb, const Params& cfg, Rng& rng) {
    const Digraph& h = *emb.h;
    int n = h.n;
    auto eval = [&](const std::vector<int>& xs) {
        VertexSet gamma(n);
        long long rhs = 0;
        for (int v : xs) {
            for (int w : h.out[v]) gamma.insert(w);
            rhs += emb.d_cap - (emb.used[v] ? emb.deg_f[v] : 0);
            rhs += emb.used[v] ? 1 : 0;
        }
        long long lhs = 0;
        gamma.for_each([&](int w) { lhs += !emb.used[w]; });
        return lhs >= rhs;
    };
    // Singletons over the image and its surroundings are the sharp cases.
    for (int v = 0; v < n; ++v) {
        if (!emb.used[v]) continue;
        if (!eval({v})) return false;
        for (int w : h.out[v])
            if (!eval({v, w})) return false;
    }
    std::uniform_int_distribution<int> nv(0, n - 1);
    std::vector<int> image;
    for (int v = 0; v < n; ++v)
        if (emb.used[v]) image.push_back(v);
    for (int t = 0; t < cfg.good_samples; ++t) {
        int len = 1 + int(rng() % uint64_t(std::max(1, std::min(emb.s, 16))));
        std::set<int> xs;
        while (int(xs.size()) < len) {
            // Bias toward the image: tight sets hug the forest.
            if (!image.empty() && (rng() & 1))
                xs.insert(image[rng() % image.size()]);
            else
                xs.insert(nv(rng));
        }
        if (!eval(std::vector<int>(xs.begin(), xs.end()))) return false;
    }
    return true;
}

}  // namespace

bool goodness_check(const GoodEmbedding& emb, const Params& cfg, Rng& rng,
                    bool force_exhaustive) {
    if (emb.h->n <= cfg.exhaustive_good_limit || force_exhaustive) {
        if (emb.h->n > 24) throw std::invalid_argument("exhaustive check infeasible");
        return goodness_exhaustive_impl(emb);
    }
    return goodness_sampled(emb, cfg, rng);
}

int fp_extend(GoodEmbedding& emb, int parent_aux, const Params& cfg, Rng& rng) {
    if (!emb.used[parent_aux]) throw std::invalid_argument("fp_extend: parent not embedded");
    if (emb.deg_f[parent_aux] >= emb.d_cap) return -1;
    for (int cand : emb.h->out[parent_aux]) {
        if (emb.used[cand]) continue;
        emb.used[cand] = 1;
        emb.parent[cand] = parent_aux;
        emb.deg_f[cand] = 1;
        ++emb.deg_f[parent_aux];
        emb.children[parent_aux].push_back(cand);
        ++emb.size;
        if (goodness_check(emb, cfg, rng)) return cand;
        // revert
        emb.used[cand] = 0;
        emb.parent[cand] = -2;
        emb.deg_f[cand] = 0;
        --emb.deg_f[parent_aux];
        emb.children[parent_aux].pop_back();
        --emb.size;
    }
    return -1;
}

void fp_rollback(GoodEmbedding& emb, int leaf_aux) {
    if (!emb.used[leaf_aux]) throw std::invalid_argument("fp_rollback: not embedded");
    if (!emb.children[leaf_aux].empty())
        throw std::invalid_argument("fp_rollback: vertex has children");
    int par = emb.parent[leaf_aux];
    if (par < 0) throw std::invalid_argument("fp_rollback: vertex is a root");
    emb.used[leaf_aux] = 0;
    emb.parent[leaf_aux] = -2;
    emb.deg_f[leaf_aux] = 0;
    --emb.deg_f[par];
    auto& ch = emb.children[par];
    ch.erase(std::find(ch.begin(), ch.end(), leaf_aux));
    --emb.size;
}

namespace {

struct Tree {
    int root;                  // aux index
    std::vector<int> members;  // aux indices excluding the root
};

// Grow a complete binary out-tree under `root` until `target` members or no
// extension preserves goodness.
bool grow_tree(GoodEmbedding& emb, Tree& t, int target, const Params& cfg, Rng& rng) {
    std::queue<int> open;
    open.push(t.root);
    while (int(t.members.size()) < target && !open.empty()) {
        int at = open.front();
        int kid = fp_extend(emb, at, cfg, rng);
        if (kid < 0) {
            open.pop();
            continue;
        }
        t.members.push_back(kid);
        open.push(kid);
        if (int(emb.children[at].size()) >= 2 ||
            (emb.parent[at] >= 0 && emb.deg_f[at] >= emb.d_cap))
            open.pop();
    }
    return int(t.members.size()) >= std::max(1, target / 2);
}

}  // namespace

ConnectResult connect_pairs(const Graph& g, const PairList& m,
                            const std::vector<std::pair<int, int>>& terminals,
                            const Params& cfg, Rng& rng) {
    ConnectResult res;
    int n = g.n();
    VertexSet vm = pair_vertices(n, m);
    for (auto [a, b] : terminals)
        if (vm.contains(a) || vm.contains(b))
            throw std::invalid_argument("connect_pairs: terminal inside V(M)");

    VertexSet scope = vm;
    for (auto [a, b] : terminals) {
        scope.insert(a);
        scope.insert(b);
    }

    for (int attempt = 0; attempt < cfg.coloring_retries; ++attempt) {
        auto aux = build_aux(g, m, &scope, rng);
        res.coloring_seed = aux.seed;
        int na = aux.n_aux();
        int s_good = std::max(4, int(cfg.good_frac * na));
        GoodEmbedding emb;
        emb.init(aux.h, s_good, cfg.good_degree);
        for (auto [a, b] : terminals) {
            emb.add_root(aux.aux_of[a]);
            emb.add_root(aux.aux_of[b]);
        }
        Rng check_rng(aux.seed ^ 0x9e3779b97f4a7c15ull);
        if (!goodness_check(emb, cfg, check_rng)) {
            res.note = "terminal set not good under this coloring";
            continue;
        }

        int target = std::max(cfg.tree_floor, int(cfg.tree_frac * na));
        bool all_ok = true;
        res.paths.clear();
        res.max_live_forest = emb.size;

        for (size_t pi = 0; pi < terminals.size() && all_ok; ++pi) {
            auto [a, b] = terminals[pi];
            Tree t1{aux.aux_of[a], {}}, t2{aux.aux_of[b], {}};
            // Early-exit crossing detection happens after growth; trees are
            // modest so the scan stays cheap.
            bool g1 = grow_tree(emb, t1, target, cfg, check_rng);
            bool g2 = grow_tree(emb, t2, target, cfg, check_rng);
            res.max_live_forest = std::max(res.max_live_forest, emb.size);
            if (!g1 || !g2) {
                all_ok = false;
                res.failed_pair = int(pi);
                res.note = "tree growth stalled";
                break;
            }
            // Crossing G-edge between red images; a tree root may serve as one
            // side of the edge, but root-root would bypass the pairs entirely.
            VertexSet reds2(n);
            for (int v : t2.members) reds2.insert(aux.gvert[v]);
            int cu = -1, cw = -1;
            for (int v : t1.members) {
                int gu = aux.gvert[v];
                for (int w : g.neighbors(gu)) {
                    int aw = aux.aux_of[w];
                    if (aw < 0) continue;
                    if (reds2.contains(w) || aw == t2.root) {
                        cu = v;
                        cw = aw;
                        break;
                    }
                }
                if (cu >= 0) break;
            }
            if (cu < 0) {
                for (int w : g.neighbors(a)) {
                    if (w != b && reds2.contains(w)) {
                        cu = t1.root;
                        cw = aux.aux_of[w];
                        break;
                    }
                }
            }
            if (cu < 0) {
                all_ok = false;
                res.failed_pair = int(pi);
                res.note = "no crossing edge between trees";
                break;
            }
            // Keep the two root chains, roll everything else back.
            std::vector<char> keep(na, 0);
            for (int v = cu; v >= 0; v = emb.parent[v]) keep[v] = 1;
            for (int v = cw; v >= 0; v = emb.parent[v]) keep[v] = 1;
            bool removed = true;
            while (removed) {
                removed = false;
                for (auto* t : {&t1, &t2}) {
                    for (auto it = t->members.rbegin(); it != t->members.rend(); ++it) {
                        int v = *it;
                        if (!emb.used[v] || keep[v]) continue;
                        if (!emb.children[v].empty()) continue;
                        fp_rollback(emb, v);
                        removed = true;
                    }
                }
            }
            // Lift the two chains through the crossing edge.
            auto chain = [&](int tip, int root) {
                std::vector<int> c;
                for (int v = tip; v != root; v = emb.parent[v]) c.push_back(v);
                std::reverse(c.begin(), c.end());
                return c;  // pair nodes root->tip order, excluding root
            };
            auto c1 = chain(cu, t1.root), c2 = chain(cw, t2.root);
            AltPath path;
            path.vertices.push_back(a);
            for (int v : c1) {
                int i = aux.pair_of[v];
                path.pairs_used.push_back(i);
                path.vertices.push_back(aux.blue[i]);
                if (aux.red[i] != aux.blue[i]) {
                    path.vertices.push_back(aux.red[i]);
                    path.virtual_edges.push_back({aux.blue[i], aux.red[i]});
                }
            }
            for (auto it = c2.rbegin(); it != c2.rend(); ++it) {
                int i = aux.pair_of[*it];
                path.pairs_used.push_back(i);
                path.vertices.push_back(aux.red[i]);
                if (aux.red[i] != aux.blue[i]) {
                    path.vertices.push_back(aux.blue[i]);
                    path.virtual_edges.push_back({aux.red[i], aux.blue[i]});
                }
            }
            path.vertices.push_back(b);
            std::string why;
            if (!validate_alt_path(g, m, path, &why)) {
                all_ok = false;
                res.failed_pair = int(pi);
                res.note = "lift validation failed: " + why;
                break;
            }
            res.paths.push_back(std::move(path));
        }
        if (all_ok) {
            res.ok = true;
            return res;
        }
    }
    return res;
}

}  // namespace ham::connector
