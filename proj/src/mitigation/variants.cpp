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
#include "qets/mitigation/variants.hpp"

#include <numeric>
#include <set>

#include <fmt/format.h>

#include "qets/core/error.hpp"
#include "qets/core/random.hpp"

namespace qets::mitigation {
namespace {

/// min(n!, cap) without overflow.
std::uint64_t bounded_factorial(std::size_t n, std::uint64_t cap) {
    std::uint64_t f = 1;
    for (std::size_t k = 2; k <= n; ++k) {
        if (f > cap / k) {
            return cap;
        }
        f *= k;
    }
    return f;
}

} // namespace

VariantSet generate_variants(const qsim::Circuit &circuit, std::size_t variants,
                             std::uint64_t seed) {
    const std::size_t q = circuit.qubit_count();
    if (variants == 0) {
        throw ValidationError("variant count must be >= 1");
    }
    if (bounded_factorial(q, variants) < variants) {
        throw ValidationError(fmt::format(
            "{} distinct qubit assignments requested but only {}! exist", variants, q));
    }

    Permutation identity(q);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    std::set<Permutation> seen{identity};
    VariantSet out{circuit, {identity}, {circuit}};

    Rng rng(seed);
    while (out.permutations.size() < variants) {
        Permutation perm = identity;
        for (std::size_t i = q; i > 1; --i) {
            std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
        }
        if (seen.insert(perm).second) {
            out.circuits.push_back(circuit.relabeled(perm));
            out.permutations.push_back(std::move(perm));
        }
    }
    return out;
}

Permutation inverse(std::span<const std::size_t> perm) {
    Permutation inv(perm.size(), perm.size());
    for (std::size_t q = 0; q < perm.size(); ++q) {
        if (perm[q] >= perm.size() || inv[perm[q]] != perm.size()) {
            throw ValidationError("qubit assignment is not a bijection");
        }
        inv[perm[q]] = q;
    }
    return inv;
}

qsim::Histogram remap_histogram(const qsim::Histogram &hist,
                                std::span<const std::size_t> perm) {
    const std::size_t q = hist.qubit_count();
    if (perm.size() != q) {
        throw ValidationError(fmt::format("assignment has {} entries for {}-qubit histogram",
                                          perm.size(), q));
    }
    (void)inverse(perm);
    qsim::Histogram out(q);
    std::string logical(q, '0');
    for (const auto &[physical, n] : hist.counts()) {
        for (std::size_t k = 0; k < q; ++k) {
            logical[k] = physical[perm[k]];
        }
        out.add(logical, n);
    }
    return out;
}

} // namespace qets::mitigation
