#include "ham/generators.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ham::gen {

namespace {

// Permutation rank/unrank in lexicographic order, for S_m with m <= 8.
std::vector<int> unrank_perm(int m, long long r) {
    std::vector<int> avail(m), out;
    std::iota(avail.begin(), avail.end(), 0);
    long long f = 1;
    for (int i = 2; i < m; ++i) f *= i;  // (m-1)!
    for (int i = m - 1; i >= 0; --i) {
        long long idx = i ? r / f : r;
        out.push_back(avail[idx]);
        avail.erase(avail.begin() + idx);
        if (i) {
            r %= f;
            f /= i;
        }
    }
    return out;
}

long long rank_perm(const std::vector<int>& p) {
    int m = int(p.size());
    long long r = 0, f = 1;
    for (int i = 2; i <= m - 1; ++i) f *= i;
    std::vector<int> avail(m);
    std::iota(avail.begin(), avail.end(), 0);
    for (int i = 0; i < m; ++i) {
        auto it = std::find(avail.begin(), avail.end(), p[i]);
        r += (it - avail.begin()) * f;
        avail.erase(it);
        if (i < m - 1 && m - 1 - i > 0) f /= std::max(1, m - 1 - i);
    }
    return r;
}

}  // namespace

GroupSpec GroupSpec::cyclic(int n) {
    if (n < 1) throw std::invalid_argument("cyclic order must be positive");
    GroupSpec g;
    g.kind_ = Kind::cyclic;
    g.param_ = n;
    g.order_ = n;
    return g;
}

GroupSpec GroupSpec::elementary_abelian_2(int k) {
    if (k < 1 || k > 30) throw std::invalid_argument("z2^k needs 1<=k<=30");
    GroupSpec g;
    g.kind_ = Kind::z2k;
    g.param_ = k;
    g.order_ = 1ll << k;
    return g;
}

GroupSpec GroupSpec::dihedral(int n) {
    if (n < 1) throw std::invalid_argument("dihedral parameter must be positive");
    GroupSpec g;
    g.kind_ = Kind::dihedral;
    g.param_ = n;
    g.order_ = 2ll * n;
    return g;
}

GroupSpec GroupSpec::symmetric(int m) {
    if (m < 1 || m > 8) throw std::invalid_argument("symmetric group limited to m<=8");
    GroupSpec g;
    g.kind_ = Kind::symmetric;
    g.param_ = m;
    g.order_ = 1;
    for (int i = 2; i <= m; ++i) g.order_ *= i;
    return g;
}

GroupSpec GroupSpec::direct_product(std::vector<GroupSpec> parts) {
    if (parts.empty()) throw std::invalid_argument("empty product");
    if (parts.size() == 1) return parts[0];
    GroupSpec g;
    g.kind_ = Kind::product;
    g.order_ = 1;
    for (auto& p : parts) g.order_ *= p.order();
    g.parts_ = std::move(parts);
    return g;
}

GroupSpec GroupSpec::parse(const std::string& text) {
    std::vector<GroupSpec> parts;
    size_t start = 0;
    auto lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    while (start < lower.size()) {
        size_t x = lower.find('x', start);
        std::string tok = lower.substr(start, x == std::string::npos ? x : x - start);
        start = x == std::string::npos ? lower.size() : x + 1;
        if (tok.empty()) throw std::invalid_argument("bad group spec: " + text);
        if (tok[0] == 'z') {
            size_t caret = tok.find('^');
            if (caret != std::string::npos) {
                int base = std::stoi(tok.substr(1, caret - 1));
                int k = std::stoi(tok.substr(caret + 1));
                if (base != 2) throw std::invalid_argument("only z2^k supported");
                parts.push_back(elementary_abelian_2(k));
            } else {
                parts.push_back(cyclic(std::stoi(tok.substr(1))));
            }
        } else if (tok[0] == 'd') {
            parts.push_back(dihedral(std::stoi(tok.substr(1))));
        } else if (tok[0] == 's') {
            parts.push_back(symmetric(std::stoi(tok.substr(1))));
        } else {
            throw std::invalid_argument("bad group token: " + tok);
        }
    }
    return direct_product(std::move(parts));
}

long long GroupSpec::order() const { return order_; }

int GroupSpec::op(int a, int b) const {
    switch (kind_) {
        case Kind::cyclic:
            return int((long long(a) + b) % param_);
        case Kind::z2k:
            return a ^ b;
        case Kind::dihedral: {
            // a = i or n+i: rotation r^i or reflection s r^i.
            int n = param_;
            bool fa = a >= n, fb = b >= n;
            int ia = fa ? a - n : a, ib = fb ? b - n : b;
            // (s^e r^i)(s^f r^j) = s^{e+f} r^{±i+j}
            int i = fb ? ((ib - ia) % n + n) % n : (ia + ib) % n;
            return (fa ^ fb) ? n + i : i;
        }
        case Kind::symmetric: {
            auto pa = unrank_perm(param_, a), pb = unrank_perm(param_, b);
            std::vector<int> pc(param_);
            for (int i = 0; i < param_; ++i) pc[i] = pa[pb[i]];
            return int(rank_perm(pc));
        }
        case Kind::product: {
            long long ra = a, rb = b, mult = 1, out = 0;
            for (auto& part : parts_) {
                long long o = part.order();
                out += mult * part.op(int(ra % o), int(rb % o));
                ra /= o;
                rb /= o;
                mult *= o;
            }
            return int(out);
        }
    }
    return 0;
}

int GroupSpec::inverse(int a) const {
    switch (kind_) {
        case Kind::cyclic:
            return a == 0 ? 0 : param_ - a;
        case Kind::z2k:
            return a;
        case Kind::dihedral: {
            int n = param_;
            if (a >= n) return a;  // reflections are involutions
            return a == 0 ? 0 : n - a;
        }
        case Kind::symmetric: {
            auto p = unrank_perm(param_, a);
            std::vector<int> q(param_);
            for (int i = 0; i < param_; ++i) q[p[i]] = i;
            return int(rank_perm(q));
        }
        case Kind::product: {
            long long ra = a, mult = 1, out = 0;
            for (auto& part : parts_) {
                long long o = part.order();
                out += mult * part.inverse(int(ra % o));
                ra /= o;
                mult *= o;
            }
            return int(out);
        }
    }
    return 0;
}

std::string GroupSpec::describe() const {
    switch (kind_) {
        case Kind::cyclic: return "z" + std::to_string(param_);
        case Kind::z2k: return "z2^" + std::to_string(param_);
        case Kind::dihedral: return "d" + std::to_string(param_);
        case Kind::symmetric: return "s" + std::to_string(param_);
        case Kind::product: {
            std::string s;
            for (size_t i = 0; i < parts_.size(); ++i)
                s += (i ? "x" : "") + parts_[i].describe();
            return s;
        }
    }
    return "?";
}

void GroupSpec::validate(Rng& rng, int samples) const {
    long long n = order_;
    std::uniform_int_distribution<long long> pick(0, n - 1);
    for (long long a = 0; a < std::min<long long>(n, 64); ++a) {
        int ai = int(a);
        if (op(ai, identity()) != ai || op(identity(), ai) != ai)
            throw std::logic_error("identity axiom failed");
        if (op(ai, inverse(ai)) != identity() || op(inverse(ai), ai) != identity())
            throw std::logic_error("inverse axiom failed");
    }
    for (int t = 0; t < samples; ++t) {
        int a = int(pick(rng)), b = int(pick(rng)), c = int(pick(rng));
        if (op(op(a, b), c) != op(a, op(b, c)))
            throw std::logic_error("associativity failed on sample");
    }
}

Graph cayley(const GroupSpec& g, const std::vector<int>& s) {
    long long n = g.order();
    for (int a : s) {
        if (a == g.identity()) throw std::invalid_argument("identity in generator set");
        if (a < 0 || a >= n) throw std::invalid_argument("generator out of range");
    }
    std::set<int> gens;
    for (int a : s) {
        gens.insert(a);
        gens.insert(g.inverse(a));
    }
    std::vector<std::pair<int, int>> edges;
    for (int x = 0; x < n; ++x)
        for (int a : gens) {
            int y = g.op(x, a);
            if (x < y) edges.emplace_back(x, y);
        }
    return Graph(int(n), edges);
}

std::pair<Graph, std::vector<int>> random_cayley(const GroupSpec& g, int d, Rng& rng) {
    long long n = g.order();
    if (d >= n) throw std::invalid_argument("generator count must be below group order");
    std::vector<int> pool(size_t(n - 1));
    std::iota(pool.begin(), pool.end(), 1);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> s(pool.begin(), pool.begin() + d);
    return {cayley(g, s), s};
}

bool is_prime(int q) {
    if (q < 2) return false;
    for (int p = 2; 1ll * p * p <= q; ++p)
        if (q % p == 0) return false;
    return true;
}

namespace {

int pow_mod(long long b, long long e, long long mod) {
    long long r = 1;
    b %= mod;
    while (e) {
        if (e & 1) r = r * b % mod;
        b = b * b % mod;
        e >>= 1;
    }
    return int(r);
}

int smallest_primitive_root(int q) {
    std::vector<int> prime_factors;
    int phi = q - 1, tmp = phi;
    for (int p = 2; 1ll * p * p <= tmp; ++p)
        if (tmp % p == 0) {
            prime_factors.push_back(p);
            while (tmp % p == 0) tmp /= p;
        }
    if (tmp > 1) prime_factors.push_back(tmp);
    for (int g = 2; g < q; ++g) {
        bool ok = true;
        for (int p : prime_factors)
            if (pow_mod(g, phi / p, q) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root found");
}

}  // namespace

std::vector<int> multiplicative_subgroup(int q, int subgroup_size) {
    if (!is_prime(q)) throw std::invalid_argument("q must be prime");
    if (subgroup_size < 1 || (q - 1) % subgroup_size != 0)
        throw std::invalid_argument("subgroup size must divide q-1");
    int g = smallest_primitive_root(q);
    int step = (q - 1) / subgroup_size;
    int h = pow_mod(g, step, q);
    std::vector<int> a;
    long long cur = 1;
    for (int i = 0; i < subgroup_size; ++i) {
        a.push_back(int(cur));
        cur = cur * h % q;
    }
    std::sort(a.begin(), a.end());
    return a;
}

Graph cayley_sum_subgroup(int q, int subgroup_size) {
    auto a = multiplicative_subgroup(q, subgroup_size);
    std::vector<char> in_a(q, 0);
    for (int x : a) in_a[x] = 1;
    std::vector<std::pair<int, int>> edges;
    for (int x = 0; x < q; ++x)
        for (int y = x + 1; y < q; ++y)
            if (in_a[(x + y) % q]) edges.emplace_back(x, y);
    return Graph(q, edges);
}

Graph paley(int q) {
    if (!is_prime(q) || q % 4 != 1)
        throw std::invalid_argument("paley needs a prime q ≡ 1 (mod 4)");
    std::vector<char> qr(q, 0);
    for (long long x = 1; x < q; ++x) qr[x * x % q] = 1;
    std::vector<std::pair<int, int>> edges;
    for (int x = 0; x < q; ++x)
        for (int y = x + 1; y < q; ++y)
            if (qr[(y - x) % q]) edges.emplace_back(x, y);
    return Graph(q, edges);
}

Factorization one_factorization(int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even");
    Factorization f;
    f.n = n;
    // Circle method: fix n-1, rotate the rest.
    for (int r = 0; r < n - 1; ++r) {
        std::vector<std::pair<int, int>> m;
        m.emplace_back(n - 1, r);
        for (int j = 1; j <= n / 2 - 1; ++j) {
            int u = (r + j) % (n - 1);
            int v = ((r - j) % (n - 1) + (n - 1)) % (n - 1);
            m.emplace_back(std::min(u, v), std::max(u, v));
        }
        f.matchings.push_back(std::move(m));
    }
    return f;
}

FactorUnion sample_factor_union(const std::vector<std::vector<std::pair<int, int>>>& factors,
                                int k, Rng& rng, const std::vector<double>* weights) {
    if (factors.empty()) throw std::invalid_argument("no factors");
    int n = 0;
    for (auto& f : factors)
        for (auto [u, v] : f) n = std::max({n, u + 1, v + 1});
    FactorUnion out;
    out.factors = &factors;
    std::vector<std::pair<int, int>> edges;
    if (weights && weights->size() != factors.size())
        throw std::invalid_argument("weights size mismatch");
    std::discrete_distribution<int> weighted;
    if (weights) weighted = std::discrete_distribution<int>(weights->begin(), weights->end());
    std::uniform_int_distribution<int> uni(0, int(factors.size()) - 1);
    for (int i = 0; i < k; ++i) {
        int idx = weights ? weighted(rng) : uni(rng);
        out.picks.push_back(idx);
        edges.insert(edges.end(), factors[idx].begin(), factors[idx].end());
    }
    std::set<int> distinct(out.picks.begin(), out.picks.end());
    out.distinct_factors = int(distinct.size());
    out.graph = Graph(n, edges);
    return out;
}

Graph random_regular(int n, int d, Rng& rng) {
    if (d < 0 || d >= n || (1ll * n * d) % 2 != 0)
        throw std::invalid_argument("infeasible regular parameters");
    if (d == 0) return Graph(n, {});
    // Pairing model on nd stubs. Strict whole-graph rejection is hopeless for
    // d beyond ~8, so collisions are repaired by random edge swaps, which
    // keeps degrees exact.
    std::vector<int> stubs(size_t(n) * d);
    for (int v = 0; v < n; ++v)
        std::fill(stubs.begin() + size_t(v) * d, stubs.begin() + size_t(v + 1) * d, v);
    auto key = [n](int u, int v) { return 1ll * std::min(u, v) * n + std::max(u, v); };
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::vector<std::pair<int, int>> edges;
        edges.reserve(stubs.size() / 2);
        for (size_t i = 0; i < stubs.size(); i += 2)
            edges.emplace_back(stubs[i], stubs[i + 1]);
        std::map<long long, int> cnt;
        for (auto [u, v] : edges) ++cnt[key(u, v)];
        auto is_bad = [&](size_t i) {
            auto [u, v] = edges[i];
            return u == v || cnt[key(u, v)] >= 2;
        };
        std::vector<size_t> bad;
        for (size_t i = 0; i < edges.size(); ++i)
            if (is_bad(i)) bad.push_back(i);
        std::uniform_int_distribution<size_t> pick(0, edges.size() - 1);
        long long budget = 400ll * (bad.size() + 10);
        while (!bad.empty() && budget-- > 0) {
            size_t bi = bad.back();
            if (!is_bad(bi)) {
                bad.pop_back();
                continue;
            }
            auto [a, b] = edges[bi];
            size_t oi = pick(rng);
            if (oi == bi) continue;
            auto [c, e] = edges[oi];
            if (a == c || b == e || a == e || b == c) continue;
            if (cnt.count(key(a, c)) || cnt.count(key(b, e))) continue;
            auto drop = [&](int u, int v) {
                auto it = cnt.find(key(u, v));
                if (it != cnt.end() && --it->second == 0) cnt.erase(it);
            };
            drop(a, b);
            drop(c, e);
            ++cnt[key(a, c)];
            ++cnt[key(b, e)];
            edges[bi] = {a, c};
            edges[oi] = {b, e};
        }
        bool ok = true;
        for (size_t i = 0; i < edges.size() && ok; ++i) ok = !is_bad(i);
        if (ok) return Graph(n, edges);
    }
    throw std::runtime_error("random_regular failed to produce a simple graph");
}

Graph gnp(int n, double p, Rng& rng) {
    if (p < 0 || p > 1) throw std::invalid_argument("p out of range");
    std::vector<std::pair<int, int>> edges;
    if (p >= 1.0) {
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
        return Graph(n, edges);
    }
    if (p > 0) {
        // Geometric skipping over the upper-triangle order.
        std::geometric_distribution<long long> skip(p);
        long long total = 1ll * n * (n - 1) / 2;
        long long idx = skip(rng);
        while (idx < total) {
            // invert idx -> (u,v)
            long long rem = idx;
            int u = 0;
            long long row = n - 1;
            while (rem >= row) {
                rem -= row;
                ++u;
                --row;
            }
            int v = u + 1 + int(rem);
            edges.emplace_back(u, v);
            idx += 1 + skip(rng);
        }
    }
    return Graph(n, edges);
}

}  // namespace ham::gen
