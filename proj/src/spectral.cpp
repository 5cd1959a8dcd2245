#include "ham/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace ham::spectral {

std::string SpectralCertificate::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["d"] = d;
    j["lambda"] = lambda;
    j["tolerance"] = tolerance;
    j["method"] = method;
    j["converged"] = converged;
    return j.dump();
}

SpectralCertificate SpectralCertificate::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    SpectralCertificate c;
    c.n = j.at("n").get<int>();
    c.d = j.at("d").get<int>();
    c.lambda = j.at("lambda").get<double>();
    c.tolerance = j.at("tolerance").get<double>();
    c.method = j.at("method").get<std::string>();
    c.converged = j.value("converged", true);
    return c;
}

namespace {

double exact_lambda(const Graph& g) {
    int n = g.n();
    if (n <= 1) return 0.0;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u)
        for (int v : g.neighbors(u)) a(u, v) = 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();  // ascending
    return std::max(std::abs(ev(0)), std::abs(ev(n - 2)));
}

// Lanczos with full reorthogonalization on span{1}^⊥. Returns the largest
// |mu| over that subspace and whether the residual target was met.
std::pair<double, bool> lanczos_lambda(const Graph& g, double tol, const Params& cfg,
                                       uint64_t seed) {
    int n = g.n();
    if (n <= 1) return {0.0, true};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    int m = std::min(n - 1, cfg.lanczos_max_window);
    double best = 0.0;
    bool ok = false;

    auto matvec = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        for (int u = 0; u < n; ++u) {
            double s = 0;
            for (int v : g.neighbors(u)) s += x(v);
            y(u) = s;
        }
        return y;
    };

    int done_ok = 0;
    for (int restart = 0; restart < cfg.lanczos_max_restarts && done_ok < 2; ++restart) {
        std::vector<Eigen::VectorXd> basis;
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = gauss(rng);
        v.array() -= v.mean();  // deflate the all-ones direction
        if (v.norm() < 1e-12) continue;
        v.normalize();
        std::vector<double> alpha, beta;
        basis.push_back(v);
        Eigen::VectorXd w;
        int built = 0;
        for (int j = 0; j < m; ++j) {
            w = matvec(basis[j]);
            double a = basis[j].dot(w);
            alpha.push_back(a);
            w -= a * basis[j];
            if (j > 0) w -= beta[j - 1] * basis[j - 1];
            w.array() -= w.mean();
            for (const auto& q : basis) w -= q.dot(w) * q;  // full reorth
            for (const auto& q : basis) w -= q.dot(w) * q;
            double b = w.norm();
            built = j + 1;
            if (b < 1e-13) break;  // invariant subspace
            beta.push_back(b);
            basis.push_back(w / b);
        }
        int k = built;
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const auto& theta = es.eigenvalues();
        const auto& s = es.eigenvectors();
        double lo = theta(0), hi = theta(k - 1);
        double beta_last = (int(beta.size()) >= k) ? beta[k - 1] : 0.0;
        double res_lo = std::abs(beta_last * s(k - 1, 0));
        double res_hi = std::abs(beta_last * s(k - 1, k - 1));
        double cand = std::max(std::abs(lo), std::abs(hi));
        double res = std::max(res_lo, res_hi);
        bool exact = int(beta.size()) < k || k >= n - 1;  // spanned the subspace
        best = std::max(best, cand);
        if (exact || res < tol) {
            ok = true;
            ++done_ok;  // require two agreeing runs before stopping early
        }
    }
    return {best, ok};
}

}  // namespace

SpectralCertificate estimate_lambda(const Graph& g, double tol, const Params& cfg,
                                    const std::string& force_method) {
    auto reg = g.regular_degree();
    if (!reg) throw std::invalid_argument("estimate_lambda: graph is not regular");
    SpectralCertificate cert;
    cert.n = g.n();
    cert.d = *reg;
    cert.tolerance = tol;
    bool dense = force_method.empty() ? g.n() <= cfg.exact_threshold
                                      : force_method == "exact-dense";
    if (dense) {
        cert.method = "exact-dense";
        cert.lambda = exact_lambda(g);
    } else {
        cert.method = "iterative-deflated";
        auto [lam, ok] = lanczos_lambda(g, tol, cfg, 0x5eed1234abcd0001ull);
        cert.lambda = lam;
        cert.converged = ok;
    }
    return cert;
}

MixingReport mixing_audit(const Graph& g, const SpectralCertificate& cert,
                          int trials, uint64_t seed, double extra_tol) {
    MixingReport rep;
    rep.trials = trials;
    int n = g.n();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double lam = cert.lambda, d = cert.d;
    double tol = cert.tolerance + extra_tol;
    auto sample_set = [&](double frac) {
        VertexSet s(n);
        for (int v = 0; v < n; ++v)
            if (uni(rng) < frac) s.insert(v);
        return s;
    };
    auto note = [&](int part, const std::string& msg) {
        ++rep.violations[part];
        if (rep.notes.size() < 16)
            rep.notes.push_back("part" + std::to_string(part + 1) + ": " + msg);
    };
    for (int t = 0; t < trials; ++t) {
        double fa = uni(rng), fb = uni(rng);
        // Bias toward small sets now and then; part 3 is vacuous otherwise.
        if (t % 4 == 0) fa = std::min(fa, lam / std::max(1.0, d));
        VertexSet a = sample_set(fa), b = sample_set(fb);
        if (a.empty() || b.empty()) continue;

        long long eab = g.edges_between(a, b);
        double dev = std::abs(double(eab) - d * double(a.size()) * b.size() / n);
        ++rep.checked[0];
        if (dev > lam * std::sqrt(double(a.size()) * b.size()) + tol)
            note(0, "dev=" + std::to_string(dev) + " |A|=" + std::to_string(a.size()) +
                        " |B|=" + std::to_string(b.size()));

        long long ea = g.edges_inside(a);
        ++rep.checked[1];
        if (std::abs(double(ea) - d * double(a.size()) * a.size() / (2.0 * n)) >
            lam * a.size() / 2.0 + tol)
            note(1, "e(A)=" + std::to_string(ea) + " |A|=" + std::to_string(a.size()));

        if (a.size() <= lam * n / std::max(1.0, d)) {
            ++rep.checked[2];
            if (double(ea) > lam * a.size() + tol)
                note(2, "e(A)=" + std::to_string(ea) + " |A|=" + std::to_string(a.size()));
        }

        double thr = cert.lam_n_over_d();
        if (double(a.size()) * b.size() > thr * thr) {
            ++rep.checked[3];
            if (eab == 0)
                note(3, "no A-B edge, |A|=" + std::to_string(a.size()) +
                            " |B|=" + std::to_string(b.size()));
        }
    }
    return rep;
}

std::string MixingReport::to_json() const {
    nlohmann::json j;
    j["trials"] = trials;
    for (int i = 0; i < 4; ++i) {
        j["checked"].push_back(checked[i]);
        j["violations"].push_back(violations[i]);
    }
    j["notes"] = notes;
    j["pass"] = pass();
    return j.dump();
}

CleanResult clean_subset(const Graph& g, const VertexSet& s,
                         const SpectralCertificate& cert, const Params& cfg) {
    CleanResult res;
    res.kept = s;
    int n = g.n();
    double threshold = double(cert.d) * s.size() / (4.0 * n);
    double demand = 5.0 * cert.lam_n_over_d();
    if (double(s.size()) < demand)
        res.note = "small input: |S| < 5*lambda*n/d, result may degenerate";
    double allowed = cfg.cleaning_slack * cert.lam_n_over_d() + 1;

    std::vector<int> deg(n, 0);
    s.for_each([&](int v) { deg[v] = g.degree_into(v, s); });
    bool changed = true;
    while (changed) {
        changed = false;
        int victim = -1;
        res.kept.for_each([&](int v) {
            if (victim < 0 && deg[v] < threshold) victim = v;
        });
        if (victim >= 0) {
            res.kept.erase(victim);
            for (int w : g.neighbors(victim))
                if (res.kept.contains(w)) --deg[w];
            ++res.deletions;
            changed = true;
        }
    }
    if (res.kept.empty()) {
        res.ok = false;
        res.note = "process exhausted S";
    } else if (res.deletions > allowed) {
        res.ok = false;
        res.note = "deletion count exceeded slack bound (certificate falsified?)";
    }
    return res;
}

PairCleanResult pair_clean(const Graph& g, const PairList& pairs,
                           const SpectralCertificate& cert, const Params& cfg) {
    if (!pairs_disjoint(pairs))
        throw std::invalid_argument("pair_clean: pairs overlap");
    PairCleanResult res;
    int n = g.n();
    VertexSet current = pair_vertices(n, pairs);
    double threshold = double(cert.d) * current.size() / (4.0 * n);
    double allowed = cfg.cleaning_slack * cert.lam_n_over_d() + 1;

    std::vector<char> alive(pairs.size(), 1);
    std::vector<int> deg(n, 0);
    current.for_each([&](int v) { deg[v] = g.degree_into(v, current); });
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < pairs.size(); ++i) {
            if (!alive[i]) continue;
            auto [x, y] = pairs[i];
            if (deg[x] < threshold || deg[y] < threshold) {
                alive[i] = 0;
                ++res.removed;
                for (int v : {x, y}) {
                    if (!current.contains(v)) continue;
                    current.erase(v);
                    for (int w : g.neighbors(v))
                        if (current.contains(w)) --deg[w];
                }
                changed = true;
                break;
            }
        }
    }
    for (size_t i = 0; i < pairs.size(); ++i)
        if (alive[i]) res.kept.push_back(pairs[i]);
    if (res.kept.empty()) {
        res.ok = false;
        res.note = "process exhausted the collection";
    } else if (res.removed > allowed) {
        res.ok = false;
        res.note = "pair removals exceeded slack bound";
    }
    return res;
}

ExpansionCheck expansion_check(const Graph& g, const VertexSet& a,
                               const VertexSet& b, double delta,
                               const SpectralCertificate& cert) {
    ExpansionCheck chk;
    double lam = std::max(cert.lambda, 1e-9);
    if (delta < 10 * cert.lambda) {
        chk.precond_ok = false;
        chk.precond_msg = "delta < 10*lambda";
    }
    if (double(a.size()) > delta * g.n() / (100.0 * cert.d)) {
        chk.precond_ok = false;
        chk.precond_msg = "|A| > delta*n/100d";
    }
    bool deg_ok = true;
    a.for_each([&](int v) {
        if (g.degree_into(v, b) < delta) deg_ok = false;
    });
    if (!deg_ok) {
        chk.precond_ok = false;
        chk.precond_msg = "a vertex of A has fewer than delta neighbors in B";
    }
    VertexSet na = g.external_neighborhood(a);
    na &= b;
    chk.observed = na.size();
    chk.required = std::min(delta * delta * a.size() / (8.0 * lam * lam),
                            delta * g.n() / (10.0 * cert.d));
    chk.pass = double(chk.observed) >= chk.required;
    return chk;
}

}  // namespace ham::spectral
