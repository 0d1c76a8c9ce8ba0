#pragma once

// Dense complex tensor-algebra primitives: Kronecker products, partial
// transposes/traces, permutation operators and small structural checks.
// Basis convention on V (x) V with dim V = d: |i> (x) |j>  ->  index d(i-1)+j
// (1-based), i.e. the plain Kronecker-product ordering.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace bqism {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Partial transpose on V (x) V over the given factor (1 or 2).
inline Matrix partial_transpose(const Matrix& m, int space, Eigen::Index d) {
    if (m.rows() != d * d || m.cols() != d * d)
        throw std::invalid_argument("partial_transpose: matrix is not d^2 x d^2");
    if (space != 1 && space != 2)
        throw std::invalid_argument("partial_transpose: space must be 1 or 2");
    Matrix out(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index k = 0; k < d; ++k)
                for (Eigen::Index l = 0; l < d; ++l) {
                    if (space == 1)
                        out(i * d + j, k * d + l) = m(k * d + j, i * d + l);
                    else
                        out(i * d + j, k * d + l) = m(i * d + l, k * d + j);
                }
    return out;
}

/// P(v (x) w) = w (x) v on C^d (x) C^d.
inline Matrix permutation_operator(Eigen::Index d) {
    if (d < 1) throw std::invalid_argument("permutation_operator: d must be >= 1");
    Matrix p = Matrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) p(j * d + i, i * d + j) = 1.0;
    return p;
}

/// I^(i-1) (x) M (x) I^(N-i-1) for a two-site operator M on sites (i, i+1)
/// of an N-site chain with local dimension d.
inline Matrix embed_pair(const Matrix& m, int site, int n_sites, Eigen::Index d = 3) {
    if (site < 1 || site > n_sites - 1)
        throw std::out_of_range("embed_pair: site out of range");
    if (m.rows() != d * d || m.cols() != d * d)
        throw std::invalid_argument("embed_pair: operator is not two-site");
    Eigen::Index left = 1, right = 1;
    for (int k = 0; k < site - 1; ++k) left *= d;
    for (int k = 0; k < n_sites - site - 1; ++k) right *= d;
    return kron(kron(identity(left), m), identity(right));
}

/// Trace over the first (auxiliary) factor of V_a (x) W, dim V_a = aux_dim.
inline Matrix trace_over_aux(const Matrix& m, Eigen::Index aux_dim = 3) {
    if (m.rows() != m.cols() || m.rows() % aux_dim != 0)
        throw std::invalid_argument("trace_over_aux: dimension mismatch");
    const Eigen::Index w = m.rows() / aux_dim;
    Matrix out = Matrix::Zero(w, w);
    for (Eigen::Index s = 0; s < aux_dim; ++s)
        out += m.block(s * w, s * w, w, w);
    return out;
}

/// Trace over the second factor of W (x) V, dim V = d2.
inline Matrix trace_over_second(const Matrix& m, Eigen::Index d2 = 3) {
    if (m.rows() != m.cols() || m.rows() % d2 != 0)
        throw std::invalid_argument("trace_over_second: dimension mismatch");
    const Eigen::Index w = m.rows() / d2;
    Matrix out = Matrix::Zero(w, w);
    for (Eigen::Index i = 0; i < w; ++i)
        for (Eigen::Index k = 0; k < w; ++k) {
            cd acc = 0.0;
            for (Eigen::Index s = 0; s < d2; ++s) acc += m(i * d2 + s, k * d2 + s);
            out(i, k) = acc;
        }
    return out;
}

struct ScalarTest {
    bool is_scalar = false;
    cd scalar{};  // mean of the diagonal when is_scalar
};

/// Is M a scalar multiple of the identity, relative to tol?
inline ScalarTest is_scalar_multiple(const Matrix& m, double tol = 1e-10) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("is_scalar_multiple: matrix not square");
    const cd s = m.trace() / static_cast<double>(m.rows());
    const double dev = (m - s * identity(m.rows())).norm();
    if (dev <= tol * std::max(1.0, m.norm())) return {true, s};
    return {false, {}};
}

inline double commutator_norm(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("commutator_norm: dimension mismatch");
    return (a * b - b * a).norm();
}

// --- JSON encoding: {"dim": n, "entries": [[re, im], ...]} row-major ---

inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            entries.push_back({m(i, j).real(), m(i, j).imag()});
    return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    const Eigen::Index n = j.at("dim").get<Eigen::Index>();
    const auto& e = j.at("entries");
    if (n < 1 || static_cast<Eigen::Index>(e.size()) != n * n)
        throw std::invalid_argument("matrix_from_json: bad dim/entries");
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto& p = e[i * n + k];
            m(i, k) = cd(p.at(0).get<double>(), p.at(1).get<double>());
        }
    return m;
}

}  // namespace bqism
