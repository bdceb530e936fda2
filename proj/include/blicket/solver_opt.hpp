#pragma once

#include <cstdint>
#include <vector>

#include "blicket/problem.hpp"

namespace blicket::opt {

struct OptConfig {
    int hidden = 8;
    double lambda1 = 0.01;   // L1 on first-layer weights
    double init_scale = 0.1; // uniform init range
    double lr = 1.0;         // initial proximal step; backtracking adapts
    int inner_steps = 300;
    int max_outer = 100;
    double h_tol = 1e-8;
    double rho_init = 1.0;
    double rho_max = 1e16;
    double tau_lo = 0.35;
    double tau_hi = 0.65;
    double prune_threshold = 0.3; // diagnostics only
};

// Row-major rows x cols over {0,1}; one row per trial, objects in id order,
// machine state in the last column.
struct DataMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> x;

    double at(int r, int c) const { return x[static_cast<std::size_t>(r) * cols + c]; }
};

DataMatrix build_data_matrix(const std::vector<ContextTrial>& context, int n_objects);

struct SquareMatrix {
    int n = 0;
    std::vector<double> a;

    explicit SquareMatrix(int size = 0) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}
    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * n + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * n + c]; }
};

SquareMatrix matrix_exp(const SquareMatrix& m);

struct AcyclicityResult {
    double h = 0.0;
    SquareMatrix grad; // dh/dW
};

// h(W) = tr(exp(W o W)) - n, zero exactly on DAGs; gradient (exp(W o W))^T o 2W.
AcyclicityResult acyclicity(const SquareMatrix& w);

// One feedforward function per node: a single hidden layer of the given width
// with sigmoid activations throughout; the node's own input is structurally
// masked so the weighted adjacency has an exactly zero diagonal.
class GeneralizedSem {
public:
    GeneralizedSem(int n_nodes, int hidden, double init_scale, std::uint64_t seed);

    int nodes() const { return n_; }
    int hidden() const { return hidden_; }

    double forward(int node, const double* x) const;

    // W[k][j] = L2 norm of g_j's first-layer weights fed by input k.
    SquareMatrix weighted_adjacency() const;

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    // Parameter layout helpers (node-major blocks: W1, b1, w2, b2).
    int per_node() const;
    int w1_index(int node, int row, int col) const;

private:
    int n_ = 0;
    int hidden_ = 0;
    std::vector<double> params_;
};

double reconstruction_loss(const GeneralizedSem& sem, const DataMatrix& data);

// Loss gradient plus, when penalty_weight != 0 or lambda1 != 0, the acyclicity
// and sparsity terms; returns the penalized objective value.
double objective_and_gradient(const GeneralizedSem& sem, const DataMatrix& data, double alpha,
                              double rho, double lambda1, std::vector<double>& grad);

struct FitResult {
    GeneralizedSem sem;
    double final_h = 0.0;
    double final_loss = 0.0;
    int outer_iterations = 0;
    bool h_converged = false;
};

FitResult fit_sem(const DataMatrix& data, const OptConfig& cfg, std::uint64_t seed);

// Bound-constrained 1-D inference of the machine column: minimize the mean
// node reconstruction objective over x_machine in [0,1]. The production entry
// point runs projected gradient from three starts and falls back to the dense
// grid whenever the grid finds a strictly better objective.
double infer_query_pg(const GeneralizedSem& sem, const std::vector<int>& config);
double infer_query_grid(const GeneralizedSem& sem, const std::vector<int>& config);
double infer_query(const GeneralizedSem& sem, const std::vector<int>& config);

// The objective those minimize: mean node reconstruction loss of the
// completed vector with the machine column hypothesized at xm.
double query_objective(const GeneralizedSem& sem, const std::vector<int>& config, double xm);

Label label_from_prob(double p, double tau_lo, double tau_hi);

struct FitDiagnostics {
    double h = 0.0;
    double loss = 0.0;
    int outer_iterations = 0;
    bool h_converged = false;
    SquareMatrix w;
};

std::vector<Label> solve(const SolverTask& task, const OptConfig& cfg,
                         FitDiagnostics* diagnostics = nullptr);

} // namespace blicket::opt
