#pragma once

#include "wfdual/model_config.hpp"

namespace wfdual::testcfg {

// Lambda = delta_0: pure Kingman diffusion, no mutation or selection.
inline ModelConfig neutral_kingman() {
    ModelConfig cfg;
    cfg.lambda = JumpMeasure::atom_at(MeasureDomain::unit_interval, 0.0, 1.0);
    return cfg;
}

// Kingman plus bidirectional mutation; C = theta_a + theta_A.
inline ModelConfig kingman_mutation(double ta = 0.5, double tA = 0.5) {
    ModelConfig cfg = neutral_kingman();
    cfg.theta_a = ta;
    cfg.theta_A = tA;
    return cfg;
}

// Kingman plus genic selection sigma == s (kappa = 2, p_1 = 1).
inline ModelConfig kingman_selection(double s = 0.5) {
    ModelConfig cfg = neutral_kingman();
    cfg.selection.kappa = 2;
    cfg.selection.beta = {s};
    cfg.selection.p = {{0.0, 1.0, 1.0}};
    return cfg;
}

// Everything switched on: diffusion, jump reproduction, both environment
// measures, mutation, balancing selection.  C stays positive.
inline ModelConfig full_mix() {
    ModelConfig cfg;
    cfg.lambda = JumpMeasure::atom_at(MeasureDomain::unit_interval, 0.0, 0.5);
    cfg.lambda.atoms.emplace_back(0.4, 0.2);
    cfg.lambda.beta = BetaComponent{0.2, 1.5, 2.0};
    cfg.mu.atoms = {{0.15, 0.1}, {-0.2, 0.1}};
    cfg.nu.atoms = {{0.25, 0.3}, {-0.3, 0.3}};
    cfg.theta_a = 0.3;
    cfg.theta_A = 0.2;
    cfg.selection.kappa = 3;
    cfg.selection.beta = {0.0, 0.1};
    cfg.selection.p = {{0.0, 0.5, 1.0}, {0.0, 1.0, 0.0, 1.0}};
    return cfg;
}

// No-mutation coexistence regime: balancing selection strong enough against a
// single reproduction atom; C0 = C1 = 3*beta3 - mass * 4 log(10/7) / ... > 0.
inline ModelConfig coexistence() {
    ModelConfig cfg;
    cfg.lambda = JumpMeasure::atom_at(MeasureDomain::unit_interval, 0.3, 0.05);
    cfg.selection.kappa = 3;
    cfg.selection.beta = {0.0, 0.5};
    cfg.selection.p = {{0.0, 0.5, 1.0}, {0.0, 1.0, 0.0, 1.0}};
    return cfg;
}

// Coalescence-dominant no-mutation config for the two-dual comparison: the
// line count contracts quickly from large starting values.
inline ModelConfig relduals() {
    ModelConfig cfg;
    cfg.lambda = JumpMeasure::atom_at(MeasureDomain::unit_interval, 0.3, 2.0);
    cfg.selection.kappa = 3;
    cfg.selection.beta = {0.0, 0.25};
    cfg.selection.p = {{0.0, 0.5, 1.0}, {0.0, 1.0, 0.0, 1.0}};
    return cfg;
}

// The optimality counterexample: jump-only reproduction above m, environment
// mutations outside [-m, m]; (1-m, m) is never revisited after the first
// transition.  m = 0.7.
inline ModelConfig counterexample() {
    ModelConfig cfg;
    cfg.lambda = JumpMeasure::atom_at(MeasureDomain::unit_interval, 0.8, 0.5);
    cfg.nu.atoms = {{0.75, 0.3}, {-0.8, 0.3}};
    return cfg;
}

// mutation-only pure-death chain
inline ModelConfig mutation_only(double ta = 1.0, double tA = 1.0) {
    ModelConfig cfg;
    cfg.theta_a = ta;
    cfg.theta_A = tA;
    return cfg;
}

}  // namespace wfdual::testcfg
