// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "embdim/types.hpp"

namespace embdim {

enum class SyntheticKind { gaussian, hypercube };

struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::gaussian;
    std::size_t n = 0;
    std::size_t dim = 0;  // ambient dimension D
    std::size_t m = 0;    // intrinsic dimension (hypercube only)
    std::uint64_t seed = 42;
};

/// n i.i.d. standard-normal d-vectors; bit-identical per seed (see Rng).
EmbeddingMatrix gaussian_cloud(std::size_t n, std::size_t d, std::uint64_t seed);

/// ambient x m map with orthonormal columns: QR of a Gaussian matrix with
/// the R diagonal forced positive (Haar-distributed). Row-major.
std::vector<double> random_orthonormal(std::size_t ambient, std::size_t m, std::uint64_t seed);

/// n points uniform on [0,1]^m embedded isometrically into `ambient` dims.
/// Generative intrinsic dimension is m by construction.
EmbeddingMatrix embedded_hypercube(std::size_t n, std::size_t m, std::size_t ambient,
                                   std::uint64_t seed);

EmbeddingMatrix generate(const SyntheticSpec& spec);

std::string kind_name(SyntheticKind kind);
SyntheticKind kind_from_name(const std::string& name);

}  // namespace embdim
