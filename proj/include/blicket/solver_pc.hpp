#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "blicket/problem.hpp"

namespace blicket::pc {

struct PcConfig {
    // Thresholded conditional mutual information stands in for a significance
    // test: a handful of binary rows gives classical tests no power, and a
    // deterministic verdict keeps the method's failure modes reproducible.
    double eps_ci = 0.01; // nats
    double delta = 0.1;   // dead zone around 0.5 in the CPT readout
};

// Presence/state matrix: one row per trial, objects in id order, machine last.
struct BinarySample {
    int n_cols = 0;
    std::vector<std::vector<std::uint8_t>> rows;

    int machine_col() const { return n_cols - 1; }
};

BinarySample build_sample(const std::vector<ContextTrial>& context, int n_objects);

// CMI(i; j | S) in nats under empirical stratum frequencies; strata with no
// rows contribute nothing.
double conditional_mutual_information(const BinarySample& data, int i, int j,
                                      const std::vector<int>& cond);

bool ci_test_dependent(const BinarySample& data, int i, int j, const std::vector<int>& cond,
                       double eps_ci);

// Skeleton search restricted to machine-incident edges: object o is a parent
// iff its dependence on the machine survives every conditioning set of up to
// two other objects. Orientation is fixed objects -> machine.
std::vector<int> learn_parents(const BinarySample& data, double eps_ci);

struct Cpt {
    std::vector<int> parents; // ascending object ids
    // Parent-configuration bits (bit k = value of parents[k]) -> P(machine on).
    // Missing keys are configurations never observed.
    std::map<std::uint32_t, double> table;
};

Cpt estimate_cpt(const BinarySample& data, const std::vector<int>& parents);

Label predict_pc(const Cpt& cpt, const std::vector<int>& config, double delta);

std::vector<Label> solve(const SolverTask& task, const PcConfig& cfg);

} // namespace blicket::pc
