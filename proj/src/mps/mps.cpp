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
#include "qets/mps/mps.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "qets/core/error.hpp"

namespace qets::mps {

using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace {

// Singular values below this fraction of the largest are numerical zeros and
// never widen a bond.
constexpr double rank_cutoff = 1e-14;

void check_site_shape(const SiteTensor &t) {
    if (t.data.size() != t.left * 2 * t.right) {
        throw ValidationError(fmt::format("malformed site tensor: {} entries for shape "
                                          "({}, 2, {})",
                                          t.data.size(), t.left, t.right));
    }
}

} // namespace

MPSState MPSState::zero(std::size_t qubit_count, std::size_t chi_max) {
    if (qubit_count == 0) {
        throw ValidationError("MPS needs at least one qubit");
    }
    if (chi_max == 0) {
        throw ValidationError("chi_max must be positive");
    }
    std::vector<SiteTensor> sites(qubit_count);
    for (auto &t : sites) {
        t.left = 1;
        t.right = 1;
        t.data = {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
    }
    return {std::move(sites), chi_max};
}

std::size_t MPSState::bond_dimension(std::size_t i) const {
    if (i + 1 >= sites_.size()) {
        throw ValidationError(fmt::format("no bond to the right of site {}", i));
    }
    return sites_[i].right;
}

std::size_t MPSState::max_bond_dimension() const noexcept {
    std::size_t chi = 1;
    for (const auto &t : sites_) {
        chi = std::max(chi, t.right);
    }
    return chi;
}

void MPSState::apply(const qsim::Gate &gate) {
    if (gate.max_index() >= sites_.size()) {
        throw ValidationError(fmt::format("gate index {} out of range for {} sites",
                                          gate.max_index(), sites_.size()));
    }
    ++logical_gates_;
    if (!gate.is_two_qubit()) {
        const double c = std::cos(gate.angle() / 2.0);
        const double s = std::sin(gate.angle() / 2.0);
        const Complex u[2][2] = {{c, -s}, {s, c}};
        apply_single(gate.target(), u);
        return;
    }

    // Route the control next to the target, apply, route back.
    std::size_t control = gate.control();
    const std::size_t target = gate.target();
    std::vector<std::size_t> route;
    while (control + 1 < target) {
        swap_sites(control);
        route.push_back(control);
        ++control;
    }
    while (control > target + 1) {
        swap_sites(control - 1);
        route.push_back(control - 1);
        --control;
    }

    Complex u[4][4] = {};
    if (control < target) {
        // |c t> -> |c, t xor c>
        u[0][0] = u[1][1] = u[2][3] = u[3][2] = 1.0;
        apply_two_site(control, u);
    } else {
        // Sites (t, c): |t c> -> |t xor c, c>
        u[0][0] = u[2][2] = u[1][3] = u[3][1] = 1.0;
        apply_two_site(target, u);
    }

    for (auto it = route.rbegin(); it != route.rend(); ++it) {
        swap_sites(*it);
    }
}

void MPSState::apply_single(std::size_t site, const Complex (&u)[2][2]) {
    auto &t = sites_[site];
    check_site_shape(t);
    for (std::size_t l = 0; l < t.left; ++l) {
        for (std::size_t r = 0; r < t.right; ++r) {
            const Complex a0 = t.at(l, 0, r);
            const Complex a1 = t.at(l, 1, r);
            t.at(l, 0, r) = u[0][0] * a0 + u[0][1] * a1;
            t.at(l, 1, r) = u[1][0] * a0 + u[1][1] * a1;
        }
    }
}

void MPSState::swap_sites(std::size_t i) {
    Complex u[4][4] = {};
    u[0][0] = u[1][2] = u[2][1] = u[3][3] = 1.0;
    apply_two_site(i, u);
    ++swaps_;
}

void MPSState::move_center(std::size_t site) {
    while (center_ < site) {
        auto &a = sites_[center_];
        auto &b = sites_[center_ + 1];
        check_site_shape(a);
        check_site_shape(b);
        const Eigen::Index rows = static_cast<Eigen::Index>(a.left * 2);
        const Eigen::Index cols = static_cast<Eigen::Index>(a.right);
        const Matrix m = Eigen::Map<const Matrix>(a.data.data(), rows, cols);
        Eigen::HouseholderQR<Matrix> qr(m);
        const Eigen::Index k = std::min(rows, cols);
        const Matrix q = qr.householderQ() * Matrix::Identity(rows, k);
        const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

        a.right = static_cast<std::size_t>(k);
        a.data.assign(q.data(), q.data() + q.size());

        const Matrix bm = Eigen::Map<const Matrix>(
            b.data.data(), static_cast<Eigen::Index>(b.left),
            static_cast<Eigen::Index>(2 * b.right));
        const Matrix nb = r * bm;
        b.left = static_cast<std::size_t>(k);
        b.data.assign(nb.data(), nb.data() + nb.size());
        ++center_;
    }
    while (center_ > site) {
        auto &a = sites_[center_ - 1];
        auto &b = sites_[center_];
        check_site_shape(a);
        check_site_shape(b);
        const Eigen::Index rows = static_cast<Eigen::Index>(b.left);
        const Eigen::Index cols = static_cast<Eigen::Index>(2 * b.right);
        const Matrix m = Eigen::Map<const Matrix>(b.data.data(), rows, cols);
        // m = R^dagger Q^dagger from the QR of m^dagger.
        const Matrix md = m.adjoint();
        Eigen::HouseholderQR<Matrix> qr(md);
        const Eigen::Index k = std::min(rows, cols);
        const Matrix q = qr.householderQ() * Matrix::Identity(cols, k);
        const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

        const Matrix nb = q.adjoint();
        b.left = static_cast<std::size_t>(k);
        b.data.assign(nb.data(), nb.data() + nb.size());

        const Matrix am = Eigen::Map<const Matrix>(
            a.data.data(), static_cast<Eigen::Index>(a.left * 2),
            static_cast<Eigen::Index>(a.right));
        const Matrix na = am * r.adjoint();
        a.right = static_cast<std::size_t>(k);
        a.data.assign(na.data(), na.data() + na.size());
        --center_;
    }
}

void MPSState::apply_two_site(std::size_t i, const Complex (&u)[4][4]) {
    move_center(i);
    auto &a = sites_[i];
    auto &b = sites_[i + 1];
    check_site_shape(a);
    check_site_shape(b);
    const std::size_t dl = a.left;
    const std::size_t dm = a.right;
    const std::size_t dr = b.right;
    if (b.left != dm) {
        throw ValidationError(fmt::format("bond mismatch between sites {} and {}", i, i + 1));
    }

    // theta[l, s1, s2, r] = sum_m A[l, s1, m] B[m, s2, r]
    std::vector<Complex> theta(dl * 4 * dr, Complex{0.0, 0.0});
    auto th = [&](std::size_t l, std::size_t s, std::size_t r) -> Complex & {
        return theta[(l * 4 + s) * dr + r];
    };
    for (std::size_t l = 0; l < dl; ++l) {
        for (std::size_t s1 = 0; s1 < 2; ++s1) {
            for (std::size_t m = 0; m < dm; ++m) {
                const Complex am = a.at(l, s1, m);
                if (am == Complex{0.0, 0.0}) {
                    continue;
                }
                for (std::size_t s2 = 0; s2 < 2; ++s2) {
                    for (std::size_t r = 0; r < dr; ++r) {
                        th(l, s1 * 2 + s2, r) += am * b.at(m, s2, r);
                    }
                }
            }
        }
    }

    // Gate on the physical pair, then reshape to (l, s1) x (s2, r).
    Matrix m(static_cast<Eigen::Index>(dl * 2), static_cast<Eigen::Index>(2 * dr));
    for (std::size_t l = 0; l < dl; ++l) {
        for (std::size_t r = 0; r < dr; ++r) {
            Complex in[4];
            for (std::size_t s = 0; s < 4; ++s) {
                in[s] = th(l, s, r);
            }
            for (std::size_t so = 0; so < 4; ++so) {
                Complex acc{0.0, 0.0};
                for (std::size_t si = 0; si < 4; ++si) {
                    acc += u[so][si] * in[si];
                }
                m(static_cast<Eigen::Index>(l * 2 + so / 2),
                  static_cast<Eigen::Index>((so % 2) * dr + r)) = acc;
            }
        }
    }

    // Two-site matrices are often exactly rank-deficient; Eigen 3.4's BDCSVD
    // returns wrong factors for some of them, JacobiSVD does not.
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    const auto full = static_cast<std::size_t>(sv.size());
    std::size_t keep = 0;
    double total = 0.0;
    for (std::size_t j = 0; j < full; ++j) {
        total += sv[static_cast<Eigen::Index>(j)] * sv[static_cast<Eigen::Index>(j)];
        if (j < chi_max_ && sv[static_cast<Eigen::Index>(j)] > rank_cutoff * sv[0]) {
            keep = j + 1;
        }
    }
    keep = std::max<std::size_t>(keep, 1);
    double kept = 0.0;
    for (std::size_t j = 0; j < keep; ++j) {
        kept += sv[static_cast<Eigen::Index>(j)] * sv[static_cast<Eigen::Index>(j)];
    }
    if (!(kept > 0.0)) {
        throw DataQualityError("two-site update produced a zero state");
    }
    discarded_weight_ += (total - kept) / total;
    const double scale = 1.0 / std::sqrt(kept);

    const auto k = static_cast<Eigen::Index>(keep);
    const Matrix left = svd.matrixU().leftCols(k);
    const Matrix right = (sv.head(k).cast<Complex>() * scale).asDiagonal() *
                         svd.matrixV().leftCols(k).adjoint();

    a.right = keep;
    a.data.assign(left.data(), left.data() + left.size());
    b.left = keep;
    b.data.assign(right.data(), right.data() + right.size());
    center_ = i + 1;

    ++two_site_updates_;
    peak_bond_ = std::max(peak_bond_, keep);
}

double MPSState::norm_squared() const {
    // env[l * dim + l'] = sum over the left part of conj(A) A
    std::vector<Complex> env{Complex{1.0, 0.0}};
    std::size_t dim = 1;
    for (const auto &t : sites_) {
        check_site_shape(t);
        std::vector<Complex> next(t.right * t.right, Complex{0.0, 0.0});
        for (std::size_t l = 0; l < dim; ++l) {
            for (std::size_t lp = 0; lp < dim; ++lp) {
                const Complex e = env[l * dim + lp];
                if (e == Complex{0.0, 0.0}) {
                    continue;
                }
                for (std::size_t s = 0; s < 2; ++s) {
                    for (std::size_t r = 0; r < t.right; ++r) {
                        const Complex ca = std::conj(t.at(l, s, r)) * e;
                        for (std::size_t rp = 0; rp < t.right; ++rp) {
                            next[r * t.right + rp] += ca * t.at(lp, s, rp);
                        }
                    }
                }
            }
        }
        env = std::move(next);
        dim = t.right;
    }
    return env[0].real();
}

qsim::StateVector MPSState::to_statevector(std::size_t max_qubits) const {
    if (sites_.size() > max_qubits) {
        throw CapacityError(fmt::format("{} qubits exceeds the statevector limit of {}",
                                        sites_.size(), max_qubits));
    }
    // partial[prefix * dim + bond]
    std::vector<Complex> partial{Complex{1.0, 0.0}};
    std::size_t dim = 1;
    std::size_t prefixes = 1;
    for (const auto &t : sites_) {
        check_site_shape(t);
        std::vector<Complex> next(prefixes * 2 * t.right, Complex{0.0, 0.0});
        for (std::size_t p = 0; p < prefixes; ++p) {
            for (std::size_t l = 0; l < dim; ++l) {
                const Complex v = partial[p * dim + l];
                if (v == Complex{0.0, 0.0}) {
                    continue;
                }
                for (std::size_t s = 0; s < 2; ++s) {
                    for (std::size_t r = 0; r < t.right; ++r) {
                        next[(p * 2 + s) * t.right + r] += v * t.at(l, s, r);
                    }
                }
            }
        }
        partial = std::move(next);
        prefixes *= 2;
        dim = t.right;
    }
    return qsim::StateVector::from_amplitudes(std::move(partial));
}

double MPSState::expectation_z(std::size_t qubit) const {
    if (qubit >= sites_.size()) {
        throw ValidationError(fmt::format("qubit {} out of range", qubit));
    }
    MPSState copy = *this;
    copy.move_center(qubit);
    const auto &t = copy.sites_[qubit];
    double p0 = 0.0;
    double p1 = 0.0;
    for (std::size_t l = 0; l < t.left; ++l) {
        for (std::size_t r = 0; r < t.right; ++r) {
            p0 += std::norm(t.at(l, 0, r));
            p1 += std::norm(t.at(l, 1, r));
        }
    }
    return std::clamp((p0 - p1) / (p0 + p1), -1.0, 1.0);
}

MPSState simulate_mps(const qsim::Circuit &circuit, std::size_t chi_max) {
    auto state = MPSState::zero(circuit.qubit_count(), chi_max);
    for (const auto &g : circuit.gates()) {
        state.apply(g);
    }
    return state;
}

double mps_fidelity(const MPSState &state, const qsim::StateVector &reference) {
    if (state.qubit_count() != reference.qubit_count()) {
        throw ValidationError(fmt::format("MPS has {} qubits, reference has {}",
                                          state.qubit_count(), reference.qubit_count()));
    }
    const auto dense = state.to_statevector(reference.qubit_count());
    return std::clamp(qsim::fidelity(reference, dense), 0.0, 1.0);
}

MPSCostReport mps_cost(std::size_t qubit_count, std::size_t chi, std::size_t gate_count,
                       double constant) {
    if (qubit_count == 0 || chi == 0 || gate_count == 0 || !(constant > 0.0)) {
        throw ValidationError("mps_cost needs positive qubit count, chi, gate count and "
                              "constant");
    }
    const double c = static_cast<double>(chi);
    return {qubit_count, chi, gate_count,
            constant * static_cast<double>(gate_count) * c * c * c, "Q·chi^3"};
}

MPSCostReport mps_cost(const MPSState &state, double constant) {
    return mps_cost(state.qubit_count(), state.peak_bond_dimension(),
                    std::max<std::size_t>(state.logical_gate_count() + state.swap_count(), 1),
                    constant);
}

} // namespace qets::mps
