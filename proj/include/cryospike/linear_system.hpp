#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cryospike/netlist.hpp"

// Per-mode compilation of a switched R/L netlist into an exact linear
// state-space model
//
//     dz/dt = A z + B u,        x_full = S z + T u,
//     v     = Vz z + Vu u,      i_e    = rows over (z, u) per element,
//
// where x_full collects every inductor current and z a maximal independent
// subset of them. Zero-resistance branches (superconducting switches) are
// merged symbolically, and nodes joined only by inductors and sources become
// cut-set constraints C x_full = F u that reduce the state dimension.

namespace cryospike {

/// Affine observable over the reduced state: value = wz . z + wu . u.
struct ObsRow {
    Eigen::RowVectorXd wz;
    Eigen::RowVectorXd wu;

    [[nodiscard]] double eval(const Eigen::VectorXd& z, const Eigen::VectorXd& u) const {
        return wz.dot(z) + wu.dot(u);
    }
};

struct LinearSystem {
    Eigen::MatrixXd A; ///< n x n reduced dynamics
    Eigen::MatrixXd B; ///< n x m input coupling

    /// Inductor id per state index (the independent subset).
    std::vector<std::string> state_inductors;
    /// Index of each state inductor within the full current vector.
    std::vector<int> state_full_index;

    Eigen::MatrixXd S; ///< K x n: full currents from states
    Eigen::MatrixXd T; ///< K x m: full currents from inputs

    Eigen::MatrixXd Vz; ///< N x n: node voltages from states (ground row zero)
    Eigen::MatrixXd Vu; ///< N x m: node voltages from inputs

    /// Branch current of every element as a row over (z, u); orientation is
    /// the element's own (a -> b, source from -> to).
    std::map<std::string, ObsRow> branch;

    Eigen::MatrixXd constraint_C; ///< nJ x K cut-set incidence
    Eigen::MatrixXd constraint_F; ///< nJ x m cut-set source coupling
    Eigen::MatrixXd impulse_map;  ///< K x nJ flux-impulse distribution
    Eigen::MatrixXd jump;         ///< K x m: full-current jump per input step

    std::vector<std::string> source_ids;
    std::vector<std::string> inductor_ids;

    [[nodiscard]] int n() const { return static_cast<int>(A.rows()); }
    [[nodiscard]] int input_count() const { return static_cast<int>(B.cols()); }
    [[nodiscard]] int full_count() const { return static_cast<int>(S.rows()); }
    [[nodiscard]] int node_count() const { return static_cast<int>(Vz.rows()); }

    [[nodiscard]] const ObsRow& branch_row(const std::string& element_id) const;

    /// Pick the independent entries out of a full current vector.
    [[nodiscard]] Eigen::VectorXd reduce(const Eigen::VectorXd& x_full) const;
    [[nodiscard]] Eigen::VectorXd full_currents(const Eigen::VectorXd& z,
                                                const Eigen::VectorXd& u) const;
    /// Smallest flux-impulse correction making x_full satisfy the cut-set
    /// constraints for input u; identity when already consistent.
    [[nodiscard]] Eigen::VectorXd project_full(const Eigen::VectorXd& x_full,
                                               const Eigen::VectorXd& u) const;
};

/// Compile the netlist for one mode. Throws AssemblyError when the mode has
/// no well-posed solution (floating islands, sources into dead nodes).
LinearSystem build_mode_system(const Netlist& netlist, const Mode& mode);

/// Steady state x_inf solving A x + B u = 0; throws SingularError when the
/// mode has no unique equilibrium.
Eigen::VectorXd equilibrium(const LinearSystem& sys, const Eigen::VectorXd& u);

/// All node voltages (index = node id) for a state/input pair.
Eigen::VectorXd node_voltages(const LinearSystem& sys, const Eigen::VectorXd& z,
                              const Eigen::VectorXd& u);

/// Largest absolute KCL violation over the original (unmerged) nodes, in
/// amperes, using the compiled branch-current rows.
double kcl_residual(const Netlist& netlist, const LinearSystem& sys,
                    const Eigen::VectorXd& z, const Eigen::VectorXd& u);
double kcl_residual(const Netlist& netlist, const Mode& mode,
                    const Eigen::VectorXd& z, const Eigen::VectorXd& u);

/// Inductor currents in the limit of sources ramped on infinitely slowly:
/// currents divide along purely inductive paths (weight 1/L) with every
/// finite-resistance branch carrying nothing. Returned in netlist inductor
/// order. Throws AssemblyError when a source injects into a node with no
/// inductive path.
Eigen::VectorXd ramp_limit_currents(const Netlist& netlist, const Mode& mode,
                                    const Eigen::VectorXd& u);

} // namespace cryospike
