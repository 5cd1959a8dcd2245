#include "ham/path.hpp"

#include <algorithm>
#include <stdexcept>

namespace ham {

PathState::PathState(int host_n, std::vector<int> order)
    : order_(std::move(order)), pos_(host_n, -1) {
    for (size_t i = 0; i < order_.size(); ++i) {
        int v = order_[i];
        if (v < 0 || v >= host_n) throw std::invalid_argument("vertex out of range");
        if (pos_[v] >= 0) throw std::invalid_argument("duplicate vertex on path");
        pos_[v] = int(i);
    }
    if (!order_.empty()) segs_.push_back({0, int(order_.size()) - 1, false, 0});
}

void PathState::recompute_cum() {
    int c = 0;
    for (auto& s : segs_) {
        s.cum = c;
        c += s.hi - s.lo + 1;
    }
}

int PathState::seg_containing_path_index(int i) const {
    // segs_ is ordered by cum; linear scan is fine (few segments).
    for (int k = int(segs_.size()) - 1; k >= 0; --k)
        if (segs_[k].cum <= i) return k;
    return -1;
}

int PathState::vertex_at(int i) const {
    if (i < 0 || i >= length()) throw std::out_of_range("path index");
    int k = seg_containing_path_index(i);
    const Seg& s = segs_[k];
    int off = i - s.cum;
    return order_[s.rev ? s.hi - off : s.lo + off];
}

int PathState::index_of(int v) const {
    if (v < 0 || v >= host_n() || pos_[v] < 0) return -1;
    int p = pos_[v];
    for (const Seg& s : segs_)
        if (s.lo <= p && p <= s.hi)
            return s.cum + (s.rev ? s.hi - p : p - s.lo);
    return -1;
}

std::pair<int, int> PathState::path_neighbors(int v) const {
    int i = index_of(v);
    if (i < 0) return {-1, -1};
    int a = i > 0 ? vertex_at(i - 1) : -1;
    int b = i + 1 < length() ? vertex_at(i + 1) : -1;
    return {a, b};
}

void PathState::rotate_prefix_fixed(int pivot_index) {
    if (pivot_index <= 0 || pivot_index >= length() - 1)
        throw std::invalid_argument("pivot index out of range");
    // Split so the pivot ends a segment.
    int k = seg_containing_path_index(pivot_index);
    Seg s = segs_[k];
    int off = pivot_index - s.cum;
    std::vector<Seg> out(segs_.begin(), segs_.begin() + k);
    if (s.rev) {
        out.push_back({s.hi - off, s.hi, true, 0});
    } else {
        out.push_back({s.lo, s.lo + off, false, 0});
    }
    // Remaining pieces, reversed in order and direction.
    std::vector<Seg> tail;
    if (s.rev) {
        if (s.hi - off - 1 >= s.lo) tail.push_back({s.lo, s.hi - off - 1, true, 0});
    } else {
        if (s.lo + off + 1 <= s.hi) tail.push_back({s.lo + off + 1, s.hi, false, 0});
    }
    for (size_t j = k + 1; j < segs_.size(); ++j) tail.push_back(segs_[j]);
    for (auto it = tail.rbegin(); it != tail.rend(); ++it)
        out.push_back({it->lo, it->hi, !it->rev, 0});
    segs_ = std::move(out);
    recompute_cum();
}

void PathState::reverse() {
    std::reverse(segs_.begin(), segs_.end());
    for (auto& s : segs_) s.rev = !s.rev;
    recompute_cum();
}

void PathState::normalize() {
    order_ = to_vector();
    for (size_t i = 0; i < order_.size(); ++i) pos_[order_[i]] = int(i);
    segs_.clear();
    if (!order_.empty()) segs_.push_back({0, int(order_.size()) - 1, false, 0});
}

std::vector<int> PathState::to_vector() const {
    std::vector<int> out;
    out.reserve(order_.size());
    for (const Seg& s : segs_) {
        if (s.rev)
            for (int p = s.hi; p >= s.lo; --p) out.push_back(order_[p]);
        else
            for (int p = s.lo; p <= s.hi; ++p) out.push_back(order_[p]);
    }
    return out;
}

void PathState::push_back(int v) {
    if (v < 0 || v >= host_n()) throw std::invalid_argument("vertex out of range");
    if (pos_[v] >= 0) throw std::invalid_argument("vertex already on path");
    normalize();
    pos_[v] = int(order_.size());
    order_.push_back(v);
    segs_.clear();
    segs_.push_back({0, int(order_.size()) - 1, false, 0});
}

void PathState::push_front(int v) {
    reverse();
    push_back(v);
    reverse();
}

void PathState::pop_back() {
    normalize();
    if (order_.empty()) throw std::logic_error("pop on empty path");
    pos_[order_.back()] = -1;
    order_.pop_back();
    segs_.clear();
    if (!order_.empty()) segs_.push_back({0, int(order_.size()) - 1, false, 0});
}

void PathState::pop_front() {
    reverse();
    pop_back();
    reverse();
}

VertexSet PathState::vertex_set() const {
    VertexSet s(host_n());
    for (int v : order_) s.insert(v);
    return s;
}

VertexSet dif(const PathState& p, const PathState& q) {
    if (p.host_n() != q.host_n() || p.length() != q.length())
        throw std::invalid_argument("dif: paths on different vertex sets");
    auto pv = p.to_vector();
    for (int v : pv)
        if (!q.contains(v))
            throw std::invalid_argument("dif: paths on different vertex sets");
    VertexSet out(p.host_n());
    auto key = [](std::pair<int, int> nb) {
        if (nb.first > nb.second) std::swap(nb.first, nb.second);
        return nb;
    };
    for (int v : pv)
        if (key(p.path_neighbors(v)) != key(q.path_neighbors(v))) out.insert(v);
    return out;
}

VertexSet interior(const PathState& p, const VertexSet& x) {
    VertexSet out(p.host_n());
    int l = p.length();
    auto ord = p.to_vector();
    for (int i = 1; i + 1 < l; ++i) {
        int v = ord[i];
        if (x.contains(v) && x.contains(ord[i - 1]) && x.contains(ord[i + 1]))
            out.insert(v);
    }
    return out;
}

int components_on(const PathState& p, const VertexSet& a) {
    int c = 0;
    bool in = false;
    for (int v : p.to_vector()) {
        bool now = a.contains(v);
        if (now && !in) ++c;
        in = now;
    }
    return c;
}

bool is_valid_path(const Graph& g, const PathState& p, const VirtualEdges* virt) {
    auto ord = p.to_vector();
    VertexSet seen(g.n());
    for (int v : ord) {
        if (v < 0 || v >= g.n() || seen.contains(v)) return false;
        seen.insert(v);
    }
    for (size_t i = 0; i + 1 < ord.size(); ++i) {
        if (g.has_edge(ord[i], ord[i + 1])) continue;
        if (virt && virt->has(ord[i], ord[i + 1])) continue;
        return false;
    }
    return true;
}

CycleVerdict check_hamilton_cycle(const Graph& g, const Cycle& c) {
    if (c.order.empty()) return CycleVerdict::empty;
    VertexSet seen(g.n());
    for (int v : c.order) {
        if (v < 0 || v >= g.n() || seen.contains(v))
            return CycleVerdict::duplicate_vertex;
        seen.insert(v);
    }
    if (int(c.order.size()) != g.n()) return CycleVerdict::not_spanning;
    for (size_t i = 0; i < c.order.size(); ++i) {
        int u = c.order[i];
        int v = c.order[(i + 1) % c.order.size()];
        if (!g.has_edge(u, v)) return CycleVerdict::non_edge;
    }
    return CycleVerdict::ok;
}

std::string to_string(CycleVerdict v) {
    switch (v) {
        case CycleVerdict::ok: return "ok";
        case CycleVerdict::empty: return "empty";
        case CycleVerdict::duplicate_vertex: return "duplicate-vertex";
        case CycleVerdict::not_spanning: return "not-spanning";
        case CycleVerdict::non_edge: return "non-edge";
    }
    return "?";
}

}  // namespace ham
