#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "boksim/error.hpp"

namespace boksim::linalg {

// Uniform doubles in [-1, 1) from the top 53 bits of mt19937_64, so the
// stream is identical on every platform (std distributions are not).
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    double next() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-52 - 1.0;
    }
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t next_raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

struct TruncatedSvd {
    Eigen::MatrixXd u;         // m x r, orthonormal columns
    Eigen::VectorXd singular;  // r values, non-increasing
    Eigen::MatrixXd v;         // n x r, orthonormal columns
    int power_iterations = 0;  // iterations actually run
};

struct RandomizedSvdOptions {
    int oversampling = 10;
    int power_iterations = 2;  // minimum; more run until the residual settles
    int max_power_iterations = 200;
    double tolerance = 1e-12;  // on ||(I - QQ^T) A V_r|| / sigma_1
    std::uint64_t seed = 42;
};

namespace detail {

inline Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

}  // namespace detail

// Rank-`rank` SVD by randomized range finding with subspace (power)
// iteration. The sketch width is rank + oversampling, capped at min(m, n);
// at the cap the range is captured exactly.
template <typename Matrix>
TruncatedSvd randomized_svd(const Matrix& a, int rank, const RandomizedSvdOptions& opts = {}) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    const Eigen::Index min_dim = std::min(m, n);
    if (rank < 1 || rank > min_dim) {
        throw ValidationError("SVD rank " + std::to_string(rank) + " outside [1, " +
                              std::to_string(min_dim) + "]");
    }
    const Eigen::Index width = std::min<Eigen::Index>(rank + opts.oversampling, min_dim);

    UniformSource rng(opts.seed);
    Eigen::MatrixXd omega(n, width);
    for (Eigen::Index j = 0; j < width; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            omega(i, j) = rng.next();
        }
    }
    Eigen::MatrixXd q = detail::orthonormal_basis(a * omega);

    TruncatedSvd out;
    for (int iter = 0;; ++iter) {
        Eigen::MatrixXd b = q.transpose() * a;  // width x n
        Eigen::JacobiSVD<Eigen::MatrixXd> small(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.u = q * small.matrixU().leftCols(rank);
        out.singular = small.singularValues().head(rank);
        out.v = small.matrixV().leftCols(rank);
        out.power_iterations = iter;

        if (width == min_dim || iter >= opts.max_power_iterations) {
            break;
        }
        if (iter >= opts.power_iterations) {
            const double top = out.singular.size() > 0 ? out.singular(0) : 0.0;
            Eigen::MatrixXd av = a * out.v;
            Eigen::MatrixXd residual = av - q * (q.transpose() * av);
            if (top == 0.0 || residual.norm() <= opts.tolerance * top) {
                break;
            }
        }
        Eigen::MatrixXd z = detail::orthonormal_basis(a.transpose() * q);
        q = detail::orthonormal_basis(a * z);
    }
    return out;
}

}  // namespace boksim::linalg
