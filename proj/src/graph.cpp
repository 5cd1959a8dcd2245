#include "ham/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ham {

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
    std::vector<std::vector<int>> tmp(n);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loop rejected");
        tmp[u].push_back(v);
        tmp[v].push_back(u);
    }
    offsets_.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) {
        auto& l = tmp[v];
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
        offsets_[v + 1] = offsets_[v] + l.size();
    }
    adj_.reserve(offsets_[n]);
    for (int v = 0; v < n; ++v)
        adj_.insert(adj_.end(), tmp[v].begin(), tmp[v].end());
    m_ = long long(adj_.size()) / 2;

    if (n > 0) {
        int d = degree(0);
        bool reg = true;
        for (int v = 1; v < n && reg; ++v) reg = (degree(v) == d);
        if (reg) regular_degree_ = d;
    }
}

bool Graph::has_edge(int u, int v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<int, int>> Graph::edge_list() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(size_t(m_));
    for (int u = 0; u < n_; ++u)
        for (int v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

int Graph::degree_into(int v, const VertexSet& s) const {
    int c = 0;
    for (int w : neighbors(v)) c += s.contains(w);
    return c;
}

VertexSet Graph::neighborhood(const VertexSet& s) const {
    VertexSet out(n_);
    s.for_each([&](int v) {
        for (int w : neighbors(v)) out.insert(w);
    });
    return out;
}

VertexSet Graph::external_neighborhood(const VertexSet& s) const {
    VertexSet out = neighborhood(s);
    out -= s;
    return out;
}

bool Graph::connected() const {
    if (n_ == 0) return true;
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : neighbors(v))
            if (!seen[w]) {
                seen[w] = 1;
                ++cnt;
                q.push(w);
            }
    }
    return cnt == n_;
}

Graph Graph::induced(const VertexSet& s, std::vector<int>* map_out) const {
    std::vector<int> verts = s.to_vector();
    std::vector<int> inv(n_, -1);
    for (size_t i = 0; i < verts.size(); ++i) inv[verts[i]] = int(i);
    std::vector<std::pair<int, int>> edges;
    for (int u : verts)
        for (int v : neighbors(u))
            if (u < v && inv[v] >= 0) edges.emplace_back(inv[u], inv[v]);
    if (map_out) *map_out = verts;
    return Graph(int(verts.size()), edges);
}

long long Graph::edges_between(const VertexSet& a, const VertexSet& b,
                               bool single_count) const {
    long long ordered = 0;
    a.for_each([&](int u) {
        for (int w : neighbors(u)) ordered += b.contains(w);
    });
    if (!single_count) return ordered;
    // Subtract the second orientation of edges with both ends in A∩B.
    long long both = 0;
    VertexSet ab = a & b;
    ab.for_each([&](int u) {
        for (int w : neighbors(u))
            if (w > u && ab.contains(w)) ++both;
    });
    return ordered - both;
}

long long Graph::edges_inside(const VertexSet& a) const {
    return edges_between(a, a) / 2;
}

Graph Graph::read_edge_list(std::istream& in) {
    int n;
    long long m;
    if (!(in >> n >> m)) throw std::runtime_error("bad edge-list header");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(size_t(m));
    for (long long i = 0; i < m; ++i) {
        int u, v;
        if (!(in >> u >> v)) throw std::runtime_error("truncated edge list");
        edges.emplace_back(u, v);
    }
    return Graph(n, edges);
}

void Graph::write_edge_list(std::ostream& out) const {
    out << n_ << " " << m_ << "\n";
    for (auto [u, v] : edge_list()) out << u << " " << v << "\n";
}

std::string Graph::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["m"] = m_;
    auto& arr = j["edges"] = nlohmann::json::array();
    for (auto [u, v] : edge_list()) arr.push_back({u, v});
    return j.dump();
}

Graph Graph::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (auto& e : j.at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return Graph(n, edges);
}

Graph Graph::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        std::stringstream ss;
        ss << in.rdbuf();
        return from_json(ss.str());
    }
    return read_edge_list(in);
}

void Graph::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        out << to_json() << "\n";
    else
        write_edge_list(out);
}

}  // namespace ham
