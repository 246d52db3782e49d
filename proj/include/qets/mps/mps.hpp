// Copyright 2026 The qets Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qets/qsim/circuit.hpp"
#include "qets/qsim/statevector.hpp"

namespace qets::mps {

using Complex = std::complex<double>;

/// Rank-3 site tensor A[left][physical][right], stored row-major.
struct SiteTensor {
    std::size_t left = 1;
    std::size_t right = 1;
    std::vector<Complex> data;

    [[nodiscard]] Complex &at(std::size_t l, std::size_t s, std::size_t r) {
        return data[(l * 2 + s) * right + r];
    }
    [[nodiscard]] const Complex &at(std::size_t l, std::size_t s, std::size_t r) const {
        return data[(l * 2 + s) * right + r];
    }
};

/// Matrix product state kept in mixed-canonical form around an orthogonality
/// centre, so that two-site SVD truncation is locally optimal.
///
/// Two-qubit gates on non-neighbouring sites are routed with adjacent swaps
/// (moved in, applied, moved back). Swaps are counted separately from logical
/// gates because they cost an SVD each but are not part of the circuit.
class MPSState {
  public:
    /// |0...0> as a product state; every bond has dimension 1.
    static MPSState zero(std::size_t qubit_count, std::size_t chi_max);

    void apply(const qsim::Gate &gate);

    [[nodiscard]] std::size_t qubit_count() const noexcept { return sites_.size(); }
    [[nodiscard]] std::size_t chi_max() const noexcept { return chi_max_; }
    [[nodiscard]] const std::vector<SiteTensor> &sites() const noexcept { return sites_; }
    /// Dimension of the bond between site i and i + 1.
    [[nodiscard]] std::size_t bond_dimension(std::size_t i) const;
    [[nodiscard]] std::size_t max_bond_dimension() const noexcept;
    /// Largest bond dimension reached at any point of the evolution.
    [[nodiscard]] std::size_t peak_bond_dimension() const noexcept { return peak_bond_; }
    [[nodiscard]] double norm_squared() const;

    /// Two-site SVD updates performed, including routing swaps.
    [[nodiscard]] std::size_t two_site_updates() const noexcept { return two_site_updates_; }
    [[nodiscard]] std::size_t swap_count() const noexcept { return swaps_; }
    [[nodiscard]] std::size_t logical_gate_count() const noexcept { return logical_gates_; }
    /// Sum over all truncations of the discarded squared singular values.
    [[nodiscard]] double discarded_weight() const noexcept { return discarded_weight_; }

    /// Dense contraction; throws CapacityError above `max_qubits`.
    [[nodiscard]] qsim::StateVector
    to_statevector(std::size_t max_qubits = qsim::default_max_qubits) const;

    [[nodiscard]] double expectation_z(std::size_t qubit) const;

  private:
    MPSState(std::vector<SiteTensor> sites, std::size_t chi_max)
        : sites_(std::move(sites)), chi_max_(chi_max) {}

    void move_center(std::size_t site);
    void apply_single(std::size_t site, const Complex (&u)[2][2]);
    /// Applies a 4x4 unitary to sites (i, i + 1), basis index s_i * 2 + s_{i+1}.
    void apply_two_site(std::size_t i, const Complex (&u)[4][4]);
    void swap_sites(std::size_t i);

    std::vector<SiteTensor> sites_;
    std::size_t chi_max_;
    std::size_t center_ = 0;
    std::size_t peak_bond_ = 1;
    std::size_t two_site_updates_ = 0;
    std::size_t swaps_ = 0;
    std::size_t logical_gates_ = 0;
    double discarded_weight_ = 0.0;
};

[[nodiscard]] inline MPSState mps_from_zero(std::size_t qubit_count, std::size_t chi_max) {
    return MPSState::zero(qubit_count, chi_max);
}

[[nodiscard]] inline MPSState apply_gate_mps(MPSState state, const qsim::Gate &gate) {
    state.apply(gate);
    return state;
}

/// Runs every gate of `circuit` from |0...0>.
[[nodiscard]] MPSState simulate_mps(const qsim::Circuit &circuit, std::size_t chi_max);

/// |<reference|mps>|^2, clamped to [0, 1].
[[nodiscard]] double mps_fidelity(const MPSState &state, const qsim::StateVector &reference);

/// Flop estimate for a fixed-bond-dimension simulation.
struct MPSCostReport {
    std::size_t qubit_count = 0;
    std::size_t chi = 0;
    std::size_t gate_count = 0;
    double estimated_flops = 0.0;
    std::string scaling_class;
};

/// Two-site contraction factor used by `mps_cost`; an order-of-magnitude
/// constant, not a measured value.
inline constexpr double default_flop_constant = 8.0;

/// estimated_flops = constant * gate_count * chi^3.
[[nodiscard]] MPSCostReport mps_cost(std::size_t qubit_count, std::size_t chi,
                                     std::size_t gate_count,
                                     double constant = default_flop_constant);

/// Cost of an evolution that has already run: routing swaps count as gates,
/// chi is the peak bond dimension.
[[nodiscard]] MPSCostReport mps_cost(const MPSState &state,
                                     double constant = default_flop_constant);

} // namespace qets::mps
