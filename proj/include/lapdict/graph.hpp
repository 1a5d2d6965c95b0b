#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lapdict/rng.hpp"

namespace lapdict {

struct WeightedEdge {
    int u = 0;
    int v = 0;  // u < v always
    double weight = 1.0;
};

// Undirected weighted graph: no self-loops, no duplicate pairs, weights >= 0.
struct WeightedGraph {
    int node_count = 0;
    std::vector<WeightedEdge> edges;
};

// Dense graph Laplacian; symmetric, zero row sums, nonpositive off-diagonal, PSD.
using LaplacianMatrix = Eigen::MatrixXd;

// Throws std::invalid_argument when the edge list violates the graph invariants.
void validate_graph(const WeightedGraph& g);

// Stochastic block model: nodes split into `modules` near-equal contiguous
// blocks, intra-block pairs wired with p_intra, inter-block with p_inter.
// Edge weights start at 1; call assign_weights afterwards.
WeightedGraph gen_sbm(int n, int modules, double p_intra, double p_inter, Rng& rng);

// Watts-Strogatz ring lattice (k/2 neighbours each side) with rewiring
// probability beta. Always returns exactly n*k/2 edges.
WeightedGraph gen_watts_strogatz(int n, int k, double beta, Rng& rng);

// Implants `anomaly` onto a uniformly random node subset S of `host`:
// host edges inside S are dropped, anomaly edges are relabelled onto S,
// edges crossing the boundary of S survive. `placement_out` receives the
// host node that anomaly node i landed on.
WeightedGraph implant_anomaly(const WeightedGraph& host, const WeightedGraph& anomaly, Rng& rng,
                              std::vector<int>* placement_out = nullptr);

// Redraws every edge weight i.i.d. from a Gaussian with mean 50 and
// sigma 50/3, resampled until it lands in [0, 100].
WeightedGraph assign_weights(const WeightedGraph& g, Rng& rng);

// L = Deg - W for the weighted adjacency W.
LaplacianMatrix laplacian(const WeightedGraph& g);

// Row-stacking vectorization: block l (length m) of the output is row l of L.
Eigen::VectorXd vec_rows(const LaplacianMatrix& L);

// Inverse of vec_rows; throws std::invalid_argument unless the length is a
// perfect square.
LaplacianMatrix unvec_rows(const Eigen::VectorXd& v);

// True when M satisfies all Laplacian invariants (symmetry, zero row sums,
// sign pattern, positive semidefiniteness) within tolerance.
bool laplacian_invariants_ok(const Eigen::MatrixXd& M, double tol = 1e-9);

}  // namespace lapdict
