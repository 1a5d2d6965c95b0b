#include "lapdict/graph.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace lapdict {

void validate_graph(const WeightedGraph& g) {
    if (g.node_count < 0) throw std::invalid_argument("graph: negative node count");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : g.edges) {
        if (e.u >= e.v) throw std::invalid_argument("graph: edge endpoints must satisfy u < v");
        if (e.u < 0 || e.v >= g.node_count) throw std::invalid_argument("graph: endpoint out of range");
        if (e.weight < 0.0) throw std::invalid_argument("graph: negative edge weight");
        if (!seen.insert({e.u, e.v}).second) throw std::invalid_argument("graph: duplicate edge");
    }
}

WeightedGraph gen_sbm(int n, int modules, double p_intra, double p_inter, Rng& rng) {
    if (n <= 0 || modules <= 0) throw std::invalid_argument("gen_sbm: n and modules must be positive");
    if (modules > n) throw std::invalid_argument("gen_sbm: more modules than nodes");
    if (p_inter < 0.0 || p_inter > p_intra || p_intra > 1.0)
        throw std::invalid_argument("gen_sbm: need 0 <= p_inter <= p_intra <= 1");

    // Contiguous near-equal blocks; the first n % modules blocks get one extra node.
    std::vector<int> block_of(n);
    const int base = n / modules;
    const int extra = n % modules;
    int node = 0;
    for (int b = 0; b < modules; ++b) {
        const int size = base + (b < extra ? 1 : 0);
        for (int i = 0; i < size; ++i) block_of[node++] = b;
    }

    WeightedGraph g;
    g.node_count = n;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const double p = (block_of[u] == block_of[v]) ? p_intra : p_inter;
            if (rng.bernoulli(p)) g.edges.push_back({u, v, 1.0});
        }
    }
    return g;
}

WeightedGraph gen_watts_strogatz(int n, int k, double beta, Rng& rng) {
    if (n <= 0) throw std::invalid_argument("gen_watts_strogatz: n must be positive");
    if (k % 2 != 0) throw std::invalid_argument("gen_watts_strogatz: mean degree k must be even");
    if (k < 0 || k >= n) throw std::invalid_argument("gen_watts_strogatz: need 0 <= k < n");
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("gen_watts_strogatz: beta not a probability");

    std::set<std::pair<int, int>> edge_set;
    auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };

    // Ring lattice: node u linked to its k/2 clockwise neighbours.
    for (int u = 0; u < n; ++u) {
        for (int j = 1; j <= k / 2; ++j) {
            edge_set.insert(key(u, (u + j) % n));
        }
    }

    // Rewire each lattice edge (u, u+j) with probability beta, redirecting the
    // far endpoint to a uniform node that creates neither a loop nor a duplicate.
    for (int u = 0; u < n; ++u) {
        for (int j = 1; j <= k / 2; ++j) {
            const int v = (u + j) % n;
            if (!rng.bernoulli(beta)) continue;
            if (!edge_set.count(key(u, v))) continue;  // already rewired away by an earlier step
            std::vector<int> candidates;
            candidates.reserve(n);
            for (int w = 0; w < n; ++w) {
                if (w != u && !edge_set.count(key(u, w))) candidates.push_back(w);
            }
            if (candidates.empty()) continue;  // u already linked to everyone
            const int w = candidates[rng.index(candidates.size())];
            edge_set.erase(key(u, v));
            edge_set.insert(key(u, w));
        }
    }

    WeightedGraph g;
    g.node_count = n;
    g.edges.reserve(edge_set.size());
    for (const auto& [u, v] : edge_set) g.edges.push_back({u, v, 1.0});
    return g;
}

WeightedGraph implant_anomaly(const WeightedGraph& host, const WeightedGraph& anomaly, Rng& rng,
                              std::vector<int>* placement_out) {
    if (anomaly.node_count > host.node_count)
        throw std::invalid_argument("implant_anomaly: anomaly larger than host");

    // Random injection of anomaly nodes into the host: node i of the anomaly
    // lands on target[i]; S is the image set.
    const auto target = rng.sample_indices(static_cast<std::size_t>(host.node_count),
                                           static_cast<std::size_t>(anomaly.node_count));
    if (placement_out) {
        placement_out->clear();
        for (const auto t : target) placement_out->push_back(static_cast<int>(t));
    }
    std::vector<char> in_s(host.node_count, 0);
    for (const auto t : target) in_s[t] = 1;

    WeightedGraph out;
    out.node_count = host.node_count;
    for (const auto& e : host.edges) {
        if (in_s[e.u] && in_s[e.v]) continue;  // interior of S is replaced wholesale
        out.edges.push_back(e);
    }
    for (const auto& e : anomaly.edges) {
        int u = static_cast<int>(target[e.u]);
        int v = static_cast<int>(target[e.v]);
        if (u > v) std::swap(u, v);
        out.edges.push_back({u, v, e.weight});
    }
    std::sort(out.edges.begin(), out.edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return std::make_pair(a.u, a.v) < std::make_pair(b.u, b.v);
    });
    return out;
}

WeightedGraph assign_weights(const WeightedGraph& g, Rng& rng) {
    WeightedGraph out = g;
    for (auto& e : out.edges) {
        double w;
        do {
            w = rng.normal(50.0, 50.0 / 3.0);
        } while (w < 0.0 || w > 100.0);
        e.weight = w;
    }
    return out;
}

LaplacianMatrix laplacian(const WeightedGraph& g) {
    LaplacianMatrix L = Eigen::MatrixXd::Zero(g.node_count, g.node_count);
    for (const auto& e : g.edges) {
        L(e.u, e.v) -= e.weight;
        L(e.v, e.u) -= e.weight;
        L(e.u, e.u) += e.weight;
        L(e.v, e.v) += e.weight;
    }
    return L;
}

Eigen::VectorXd vec_rows(const LaplacianMatrix& L) {
    const Eigen::Index m = L.rows();
    Eigen::VectorXd v(m * m);
    for (Eigen::Index i = 0; i < m; ++i) v.segment(i * m, m) = L.row(i).transpose();
    return v;
}

LaplacianMatrix unvec_rows(const Eigen::VectorXd& v) {
    const auto m = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (m * m != v.size()) throw std::invalid_argument("unvec_rows: length is not a perfect square");
    LaplacianMatrix L(m, m);
    for (Eigen::Index i = 0; i < m; ++i) L.row(i) = v.segment(i * m, m).transpose();
    return L;
}

bool laplacian_invariants_ok(const Eigen::MatrixXd& M, double tol) {
    if (M.rows() != M.cols()) return false;
    const Eigen::Index m = M.rows();
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > tol) return false;
    if ((M.rowwise().sum()).cwiseAbs().maxCoeff() > 1e-10 * static_cast<double>(m)) return false;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (M(i, i) < -tol) return false;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (i != j && M(i, j) > tol) return false;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-9 * std::max(1.0, M.cwiseAbs().maxCoeff());
}

}  // namespace lapdict
