// SPDX-License-Identifier: Apache-2.0
#include "embdim/synthetic.hpp"

#define EIGEN_DONT_PARALLELIZE
#include <Eigen/Dense>

#include "embdim/rng.hpp"

namespace embdim {

namespace {
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
}

EmbeddingMatrix gaussian_cloud(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n == 0 || d == 0) throw PreconditionError("n and d must be >= 1");
    EmbeddingMatrix m;
    m.rows = n;
    m.dim = d;
    m.data.resize(n * d);
    m.source = "gaussian(n=" + std::to_string(n) + ",d=" + std::to_string(d) +
               ",seed=" + std::to_string(seed) + ")";
    Rng rng(seed);
    for (double& v : m.data) v = rng.normal();
    return m;
}

std::vector<double> random_orthonormal(std::size_t ambient, std::size_t m, std::uint64_t seed) {
    if (m == 0 || ambient == 0) throw PreconditionError("dimensions must be >= 1");
    if (m > ambient)
        throw PreconditionError("intrinsic dimension m=" + std::to_string(m) +
                                " exceeds ambient dimension D=" + std::to_string(ambient));

    RowMajorMatrix g(ambient, m);
    Rng rng(seed);
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();

    Eigen::HouseholderQR<RowMajorMatrix> qr(g);
    RowMajorMatrix q = qr.householderQ() * RowMajorMatrix::Identity(static_cast<Eigen::Index>(ambient),
                                                                    static_cast<Eigen::Index>(m));
    const RowMajorMatrix r = qr.matrixQR().topRows(static_cast<Eigen::Index>(m));
    for (Eigen::Index j = 0; j < q.cols(); ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);

    return {q.data(), q.data() + ambient * m};
}

EmbeddingMatrix embedded_hypercube(std::size_t n, std::size_t m, std::size_t ambient,
                                   std::uint64_t seed) {
    if (n == 0) throw PreconditionError("n must be >= 1");
    const std::vector<double> map = random_orthonormal(ambient, m, seed);

    // Points drawn with an independent stream so the cube sample for a given
    // seed does not change with the ambient dimension.
    RowMajorMatrix points(n, m);
    Rng rng(seed ^ 0x9E3779B97F4A7C15ULL);
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        for (Eigen::Index j = 0; j < points.cols(); ++j) points(i, j) = rng.uniform();

    Eigen::Map<const RowMajorMatrix> q(map.data(), static_cast<Eigen::Index>(ambient),
                                       static_cast<Eigen::Index>(m));

    EmbeddingMatrix out;
    out.rows = n;
    out.dim = ambient;
    out.data.resize(n * ambient);
    out.source = "hypercube(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ",D=" +
                 std::to_string(ambient) + ",seed=" + std::to_string(seed) + ")";
    Eigen::Map<RowMajorMatrix> y(out.data.data(), static_cast<Eigen::Index>(n),
                                 static_cast<Eigen::Index>(ambient));
    y.noalias() = points * q.transpose();
    return out;
}

EmbeddingMatrix generate(const SyntheticSpec& spec) {
    switch (spec.kind) {
        case SyntheticKind::gaussian: return gaussian_cloud(spec.n, spec.dim, spec.seed);
        case SyntheticKind::hypercube: return embedded_hypercube(spec.n, spec.m, spec.dim, spec.seed);
    }
    throw PreconditionError("unknown synthetic kind");
}

std::string kind_name(SyntheticKind kind) {
    return kind == SyntheticKind::gaussian ? "gaussian" : "hypercube";
}

SyntheticKind kind_from_name(const std::string& name) {
    if (name == "gaussian") return SyntheticKind::gaussian;
    if (name == "hypercube") return SyntheticKind::hypercube;
    throw PreconditionError("unknown synthetic kind '" + name + "' (expected gaussian|hypercube)");
}

}  // namespace embdim
