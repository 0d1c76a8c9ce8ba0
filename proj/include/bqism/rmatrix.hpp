#pragma once

// The explicit 9x9 D(D3) R-matrix family R(z), its derivative, the dual
// operator curly-R(z), and residual checkers for the identities they satisfy
// (regularity, unitarity, Yang-Baxter, duality, crossing-unitarity search).

#include <cmath>
#include <random>
#include <vector>

#include "bqism/tensor.hpp"

namespace bqism {

inline constexpr double kPoleEps = 1e-6;

/// Spectral parameter with pole-proximity guards for R(z) and curly-R(z).
struct SpectralPoint {
    cd z;

    static SpectralPoint for_r(cd z, double eps = kPoleEps) {
        if (std::abs(z * z - z + 1.0) <= eps)
            throw std::domain_error("SpectralPoint: z too close to a pole of R");
        return {z};
    }
    static SpectralPoint for_curly_r(cd z, double eps = kPoleEps) {
        if (std::abs(z * z - z + 1.0) <= eps || std::abs(z - 1.0) <= eps ||
            std::abs(z * z * z - 1.0) <= eps)
            throw std::domain_error("SpectralPoint: z too close to a pole of curly R");
        return {z};
    }
};

/// R(z): entry functions a = z(z-1)/(z^2-z+1), b = z/(z^2-z+1),
/// c = (1-z)/(z^2-z+1), placed in the fixed 9x9 pattern.
inline Matrix r_matrix(const SpectralPoint& p) {
    const cd z = p.z;
    const cd den = z * z - z + 1.0;
    const cd a = z * (z - 1.0) / den;
    const cd b = z / den;
    const cd c = (1.0 - z) / den;
    Matrix m = Matrix::Zero(9, 9);
    m(0, 0) = m(4, 4) = m(8, 8) = 1.0;
    m(1, 2) = a; m(1, 3) = b; m(1, 7) = c;
    m(2, 1) = a; m(2, 5) = c; m(2, 6) = b;
    m(3, 1) = b; m(3, 5) = a; m(3, 6) = c;
    m(5, 2) = c; m(5, 3) = a; m(5, 7) = b;
    m(6, 2) = b; m(6, 3) = c; m(6, 7) = a;
    m(7, 1) = c; m(7, 5) = b; m(7, 6) = a;
    return m;
}

inline Matrix r_matrix(cd z) { return r_matrix(SpectralPoint::for_r(z)); }

/// R21(z) = P R(z) P.
inline Matrix r_matrix_21(cd z) {
    static const Matrix p = permutation_operator(3);
    return p * r_matrix(z) * p;
}

/// Entrywise closed-form derivative of R(z):
///   a' = (2z-1)/(z^2-z+1)^2,  b' = (1-z^2)/(z^2-z+1)^2,  c' = (z^2-2z)/(z^2-z+1)^2.
inline Matrix r_matrix_deriv(cd z) {
    (void)SpectralPoint::for_r(z);
    const cd den = z * z - z + 1.0;
    const cd d2 = den * den;
    const cd da = (2.0 * z - 1.0) / d2;
    const cd db = (1.0 - z * z) / d2;
    const cd dc = (z * z - 2.0 * z) / d2;
    Matrix m = Matrix::Zero(9, 9);
    m(1, 2) = da; m(1, 3) = db; m(1, 7) = dc;
    m(2, 1) = da; m(2, 5) = dc; m(2, 6) = db;
    m(3, 1) = db; m(3, 5) = da; m(3, 6) = dc;
    m(5, 2) = dc; m(5, 3) = da; m(5, 7) = db;
    m(6, 2) = db; m(6, 3) = dc; m(6, 7) = da;
    m(7, 1) = dc; m(7, 5) = db; m(7, 6) = da;
    return m;
}

enum class CurlyMode { closed_form, from_definition };

/// Dual operator curly-R12(z) = [(R21^{t1}(z))^{-1}]^{t1}, available as the
/// explicit closed form (primary) or via the defining inverse (cross-check).
inline Matrix curly_r(cd z, CurlyMode mode = CurlyMode::closed_form) {
    (void)SpectralPoint::for_curly_r(z);
    if (mode == CurlyMode::from_definition) {
        const Matrix rt = partial_transpose(r_matrix_21(z), 1, 3);
        Eigen::PartialPivLU<Matrix> lu(rt);
        if (std::abs(lu.determinant()) < 1e-300)
            throw std::domain_error("curly_r: singular partial transpose");
        return partial_transpose(lu.inverse(), 1, 3);
    }
    const cd pref = (z * z - z + 1.0) / ((z - 1.0) * (z * z * z - 1.0));
    const cd s = z * z;
    Matrix m(9, 9);
    m << s + 1.0, 0, 0, 0, z, 0, 0, 0, z,
         0, 0, 1, -z, 0, 0, 0, s, 0,
         0, 1, 0, 0, 0, s, -z, 0, 0,
         0, -z, 0, 0, 0, 1, s, 0, 0,
         z, 0, 0, 0, s + 1.0, 0, 0, 0, z,
         0, 0, s, 1, 0, 0, 0, -z, 0,
         0, 0, -z, s, 0, 0, 0, 1, 0,
         0, s, 0, 0, 0, -z, 1, 0, 0,
         z, 0, 0, 0, z, 0, 0, 0, s + 1.0;
    return pref * m;
}

inline Matrix curly_r_21(cd z, CurlyMode mode = CurlyMode::closed_form) {
    static const Matrix p = permutation_operator(3);
    return p * curly_r(z, mode) * p;
}

/// f(z) of the unitarity property R12(z) R21(1/z) = f(z) I.
/// Throws if the product is not a scalar multiple of the identity.
inline cd unitarity_scalar(cd z, double tol = 1e-10) {
    const Matrix q = r_matrix(z) * r_matrix_21(1.0 / z);
    const auto st = is_scalar_multiple(q, tol);
    if (!st.is_scalar)
        throw std::runtime_error("unitarity_scalar: product is not scalar");
    return st.scalar;
}

/// || R12(x/y) R13(x) R23(y) - R23(y) R13(x) R12(x/y) ||_F on C^27.
inline double ybe_residual(cd x, cd y) {
    static const Matrix i3 = identity(3);
    static const Matrix s23 = kron(i3, permutation_operator(3));
    const Matrix r12 = kron(r_matrix(x / y), i3);
    const Matrix r13 = s23 * kron(r_matrix(x), i3) * s23;
    const Matrix r23 = kron(i3, r_matrix(y));
    return (r12 * r13 * r23 - r23 * r13 * r12).norm();
}

/// Relative deviation of R12^{t1}(lam z) M1 R21^{t1}(1/z) M1^{-1} from the
/// nearest scalar multiple of the identity.
inline double crossing_unitarity_residual(const Matrix& m, cd lambda, cd z) {
    if (m.rows() != 3 || m.cols() != 3)
        throw std::invalid_argument("crossing_unitarity_residual: M must be 3x3");
    Eigen::PartialPivLU<Matrix> lu(m);
    if (std::abs(lu.determinant()) < 1e-12)
        throw std::invalid_argument("crossing_unitarity_residual: singular M");
    static const Matrix i3 = identity(3);
    const Matrix m1 = kron(m, i3);
    const Matrix m1inv = kron(Matrix(lu.inverse()), i3);
    const Matrix q = partial_transpose(r_matrix(lambda * z), 1, 3) * m1 *
                     partial_transpose(r_matrix_21(1.0 / z), 1, 3) * m1inv;
    const cd s = q.trace() / 9.0;  // least-squares scalar
    return (q - s * identity(9)).norm() / q.norm();
}

/// R-check(z) = P R(z).
inline Matrix r_check(cd z) {
    static const Matrix p = permutation_operator(3);
    return p * r_matrix(z);
}

// --- Seeded sampling of admissible spectral parameters ---
//
// |z| log-uniform in [0.2, 5], phase uniform, rejecting points within 0.05 of
// {1, e^{i pi/3}, e^{-i pi/3}, e^{2 pi i/3}, e^{4 pi i/3}} so that every
// denominator appearing in R, 1/z and curly-R stays well conditioned.
inline cd sample_spectral(std::mt19937_64& rng) {
    static const double pi = std::acos(-1.0);
    static const std::vector<cd> bad = {
        {1.0, 0.0}, std::polar(1.0, pi / 3), std::polar(1.0, -pi / 3),
        std::polar(1.0, 2 * pi / 3), std::polar(1.0, 4 * pi / 3)};
    std::uniform_real_distribution<double> ulog(std::log(0.2), std::log(5.0));
    std::uniform_real_distribution<double> uphase(0.0, 2 * pi);
    for (;;) {
        const cd z = std::polar(std::exp(ulog(rng)), uphase(rng));
        bool ok = true;
        for (const cd& p : bad)
            if (std::abs(z - p) <= 0.05) { ok = false; break; }
        if (ok) return z;
    }
}

}  // namespace bqism
