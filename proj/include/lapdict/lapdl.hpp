#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "lapdict/rng.hpp"
#include "lapdict/sparse.hpp"

namespace lapdict {

// Dictionary of vectorized Laplacian atoms: column i is vec_rows of an m x m
// candidate Laplacian. Feasibility means every length-m row block lies in the
// simplex-type set of its row index; the trace of each atom is pulled toward
// m by the quadratic penalty rather than constrained exactly.
struct LapAtomDictionary {
    int m = 0;                // node count
    Eigen::MatrixXd atoms;    // m*m x n

    int atom_count() const { return static_cast<int>(atoms.cols()); }
    double atom_trace(int i) const;
    bool feasible(double tol = 0.0) const;
};

struct LapDLConfig {
    int n_atoms = 64;
    int sparsity = 30;
    double rho = 100.0;
    int am_iters = 10;
    int bcgd_iters = 0;      // 0 -> n_atoms * m * 5 per AM round
    double grad_tol = 0.0;   // 0 -> run the full iteration budget
    double er_init_p = 0.3;  // edge probability of the random init atoms
};

// Penalized objective 0.5*||Y - D X||_F^2 + (rho/2) * sum_i (tr(L_i) - m)^2.
// The half on the data term makes the stated gradient and Lipschitz
// expressions exact; classification is invariant to the scaling.
double f_rho(const LapAtomDictionary& D, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
             double rho);

// Block ell (one Laplacian row) of the gradient of f_rho on atom i.
Eigen::VectorXd grad_atom_block(const LapAtomDictionary& D, const Eigen::MatrixXd& X,
                                const Eigen::MatrixXd& Y, double rho, int i, int ell);

// Per-atom block Lipschitz bound ||X^i||^2 + rho, floored at 1e-12.
double lipschitz_atom(const Eigen::MatrixXd& X, int i, double rho);

// Observer invoked after every BCGD step with (atom, block) just updated.
using BcgdObserver = std::function<void(const LapAtomDictionary&, int atom, int block)>;

// Randomized block coordinate gradient descent on the dictionary with X
// fixed: each step updates one row block of one atom by a projected
// 1/L_i gradient step. Gram products X X^T and Y X^T are cached up front.
void bcgd_dict_update(LapAtomDictionary& D, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                      const LapDLConfig& cfg, Rng& rng, const BcgdObserver& observer = nullptr);

// Feasible random initialization: atoms are Laplacians of Erdos-Renyi
// graphs rescaled to trace m.
LapAtomDictionary init_lap_atoms(int m, int n, Rng& rng, double edge_p = 0.3);

struct LapDLModel {
    LapAtomDictionary dict;
    Eigen::MatrixXd codes;                  // n x N, final representations
    std::vector<double> objective_trace;    // f_rho after each half-step
};

// Alternating minimization: OMP representation step (on a column-normalized
// copy of the dictionary, coefficients rescaled back) alternating with BCGD
// dictionary steps. Y columns are vectorized m x m Laplacians.
LapDLModel am_train(const Eigen::MatrixXd& Y, const LapDLConfig& cfg, Rng& rng);

}  // namespace lapdict
