#pragma once

// Reflection-matrix families K-(z), K+(z) for the D(D3) R-matrix, residual
// checkers for both reflection equations and the z0-special equation, and the
// structural classifier for matrices evaluated at the special point.

#include <variant>

#include "bqism/rmatrix.hpp"

namespace bqism {

inline const cd kOmega = std::polar(1.0, 2.0 * std::acos(-1.0) / 3.0);  // e^{2 pi i/3}

enum class WRoot { primary, conjugate };  // e^{2 pi i/3} or e^{4 pi i/3}

inline cd w_value(WRoot w) { return w == WRoot::primary ? kOmega : kOmega * kOmega; }

/// A cube root of unity, stored as a power of the chosen primitive root.
struct CubeRoot {
    int power = 0;  // value = w^power, power in {0,1,2}

    cd value(WRoot w) const {
        cd v = 1.0;
        for (int k = 0; k < ((power % 3) + 3) % 3; ++k) v *= w_value(w);
        return v;
    }
};

struct KMinusParams {
    cd a{};          // boundary coupling
    CubeRoot alpha;  // off-diagonal dressing
    WRoot w = WRoot::primary;
};

struct KPlusParams {
    cd b{};         // boundary coupling; must differ from w^j - 1
    CubeRoot beta;  // off-diagonal dressing
    int j = 1;      // in {1, 2}
    WRoot w = WRoot::primary;

    KPlusParams() = default;
    KPlusParams(cd b_, CubeRoot beta_, int j_, WRoot w_) : b(b_), beta(beta_), j(j_), w(w_) {
        if (j != 1 && j != 2) throw std::invalid_argument("KPlusParams: j must be 1 or 2");
        const cd ww = w_value(w);
        const cd wj = j == 1 ? ww : ww * ww;
        if (std::abs(b - (wj - 1.0)) < 1e-12)
            throw std::invalid_argument("KPlusParams: b = w^j - 1, trace of K+(1) vanishes");
    }
};

struct IdentityBoundary {};
using BoundaryChoice = std::variant<IdentityBoundary, KMinusParams, KPlusParams>;

/// K-(z): unit diagonal, off-diagonal entries alpha-dressed multiples of
/// g(z) = (1-z^2)/(w^2 + a z - z^2).  K-(1) = I exactly.
inline Matrix k_minus(cd z, const KMinusParams& p) {
    const cd w = w_value(p.w);
    const cd al = p.alpha.value(p.w);
    const cd den = w * w + p.a * z - z * z;
    if (std::abs(den) <= kPoleEps)
        throw std::domain_error("k_minus: denominator w^2 + a z - z^2 vanishes");
    const cd g = (1.0 - z * z) / den;
    Matrix m(3, 3);
    m << 1.0, al * g, al * al * g,
         al * al * w * w * g, 1.0, al * w * g,
         al * w * w * g, al * al * w * g, 1.0;
    return m;
}

/// Exact z -> infinity limit of the K- family: off-diagonal prefactor
/// g(z) = (1-z^2)/(w^2 + a z - z^2) -> 1.  Numeric proxy: k_minus at |z| = 1e6.
inline Matrix k_minus_at_infinity(const KMinusParams& p) {
    const cd w = w_value(p.w);
    const cd al = p.alpha.value(p.w);
    Matrix m(3, 3);
    m << 1.0, al, al * al,
         al * al * w * w, 1.0, al * w,
         al * w * w, al * al * w, 1.0;
    return m;
}

/// K+(z): diagonal 1 + b z - w^j z^2, off-diagonal beta-dressed multiples of
/// 1 - w^{2j} z^2.  Polynomial in z, no poles.  K+(0) != I in general.
inline Matrix k_plus(cd z, const KPlusParams& p) {
    const cd w = w_value(p.w);
    const cd be = p.beta.value(p.w);
    const cd wj = p.j == 1 ? w : w * w;
    const cd w2j = wj * wj;
    const cd diag = 1.0 + p.b * z - wj * z * z;
    const cd off = 1.0 - w2j * z * z;
    Matrix m(3, 3);
    m << diag, be * off, be * be * off,
         w2j * be * be * off, diag, wj * be * off,
         w2j * be * off, wj * be * be * off, diag;
    return m;
}

inline Matrix boundary_matrix(cd z, const BoundaryChoice& c) {
    return std::visit(
        [&](const auto& p) -> Matrix {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, IdentityBoundary>) return identity(3);
            else if constexpr (std::is_same_v<T, KMinusParams>) return k_minus(z, p);
            else return k_plus(z, p);
        },
        c);
}

namespace detail {
inline Matrix k1(const Matrix& k) { return kron(k, identity(3)); }
inline Matrix k2(const Matrix& k) { return kron(identity(3), k); }
}  // namespace detail

/// Residual of (REMinus) for an arbitrary z -> 3x3 family.
template <typename KFun>
double re_minus_residual_fn(KFun&& k, cd x, cd y) {
    using detail::k1;
    using detail::k2;
    const Matrix lhs = r_matrix(x / y) * k1(k(x)) * r_matrix_21(x * y) * k2(k(y));
    const Matrix rhs = k2(k(y)) * r_matrix(x * y) * k1(k(x)) * r_matrix_21(x / y);
    return (lhs - rhs).norm();
}

inline double re_minus_residual(const KMinusParams& p, cd x, cd y) {
    return re_minus_residual_fn([&](cd z) { return k_minus(z, p); }, x, y);
}

/// Residual of (REPlus); the dual operator curly-R enters at argument xy.
template <typename KFun>
double re_plus_residual_fn(KFun&& k, cd x, cd y) {
    using detail::k1;
    using detail::k2;
    const Matrix lhs = r_matrix(y / x) * k1(k(x)) * curly_r_21(x * y) * k2(k(y));
    const Matrix rhs = k2(k(y)) * curly_r(x * y) * k1(k(x)) * r_matrix_21(y / x);
    return (lhs - rhs).norm();
}

inline double re_plus_residual(const KPlusParams& p, cd x, cd y) {
    return re_plus_residual_fn([&](cd z) { return k_plus(z, p); }, x, y);
}

/// Residual of the special equation
///   K2(y) Rc(0) K2(z0) Rc(0) = Rc(0) K2(z0) Rc(0) K2(y),  Rc(0) = P R(0).
inline double special_re_residual(const Matrix& k_at_y, const Matrix& k_at_z0) {
    static const Matrix rc0 = r_check(0.0);
    const Matrix a = detail::k2(k_at_y);
    const Matrix b = detail::k2(k_at_z0);
    return (a * rc0 * b * rc0 - rc0 * b * rc0 * a).norm();
}

/// Max violation of the componentwise law equivalent to the special equation:
///   h_{i,j}(z0) h_{k,l}(y) = h_{i,j+k+2l}(z0) h_{2i+2k,2i+2l}(y),
/// indices taken modulo 3 in {1,2,3}.
inline double index_law_residual(const Matrix& k_at_z0, const Matrix& k_at_y) {
    auto at = [](const Matrix& m, int i, int j) {
        return m(((i - 1) % 3 + 3) % 3, ((j - 1) % 3 + 3) % 3);
    };
    double worst = 0.0;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k)
                for (int l = 1; l <= 3; ++l) {
                    const cd lhs = at(k_at_z0, i, j) * at(k_at_y, k, l);
                    const cd rhs = at(k_at_z0, i, j + k + 2 * l) *
                                   at(k_at_y, 2 * i + 2 * k, 2 * i + 2 * l);
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
    return worst;
}

enum class KClass {
    ScalarIdentity,
    Diagonal,
    ThreeDiagonalNonzero,
    OneDiagonalNonzero,
    Inconsistent,
};

/// Classify a candidate K(z0) by the structure theorems for the special
/// equation: 3 nonzero diagonal entries must fit the equal-diagonal form with
/// unimodular cube-root dressings (alpha^3 = beta^3 = gamma^3 = alpha beta
/// gamma = 1); exactly one must fit the single-live-row form; two nonzero
/// diagonal entries are impossible.
inline KClass classify_k_at_z0(const Matrix& k0_in, double tol = 1e-8) {
    if (k0_in.rows() != 3 || k0_in.cols() != 3)
        throw std::invalid_argument("classify_k_at_z0: K must be 3x3");
    const double mx = k0_in.cwiseAbs().maxCoeff();
    if (mx == 0.0) throw std::invalid_argument("classify_k_at_z0: zero matrix");
    const Matrix k0 = k0_in / mx;

    int live = 0;
    bool diag_live[3] = {false, false, false};
    for (int i = 0; i < 3; ++i)
        if (std::abs(k0(i, i)) > tol) { diag_live[i] = true; ++live; }

    double offmax = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) offmax = std::max(offmax, std::abs(k0(i, j)));

    auto is_cube_root = [&](cd v) {
        return std::abs(std::abs(v) - 1.0) <= tol && std::abs(v * v * v - 1.0) <= 10 * tol;
    };

    if (live == 3) {
        const cd d = k0(0, 0);
        if (std::abs(k0(1, 1) - d) > tol || std::abs(k0(2, 2) - d) > tol)
            return offmax <= tol ? KClass::Diagonal : KClass::Inconsistent;
        if (offmax <= tol) return KClass::ScalarIdentity;
        // equal diagonal A, off-diagonals B-dressed: rows (A, aB, a^2 B),
        // (b^2 B, A, bB), (gB, g^2 B, A) with a^3 = b^3 = g^3 = abg = 1
        // All six off-diagonals must then be nonzero with a common modulus |B|.
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j && std::abs(k0(i, j)) <= tol) return KClass::Inconsistent;
        // h12 = aB, h13 = a^2 B  =>  B = h12^2 / h13; then read off the
        // dressings a = h12/B, b = h23/B, g = h31/B.
        const cd b_ampl = k0(0, 1) * k0(0, 1) / k0(0, 2);
        const cd alpha = k0(0, 1) / b_ampl;
        const cd beta = k0(1, 2) / b_ampl;
        const cd gamma = k0(2, 0) / b_ampl;
        if (!is_cube_root(alpha) || !is_cube_root(beta) || !is_cube_root(gamma))
            return KClass::Inconsistent;
        if (std::abs(alpha * beta * gamma - 1.0) > 10 * tol) return KClass::Inconsistent;
        if (std::abs(k0(1, 0) - beta * beta * b_ampl) > 10 * tol ||
            std::abs(k0(2, 1) - gamma * gamma * b_ampl) > 10 * tol)
            return KClass::Inconsistent;
        return KClass::ThreeDiagonalNonzero;
    }
    if (live == 2) return KClass::Inconsistent;  // forbidden by the structure theorems
    if (live == 1) {
        int a = diag_live[0] ? 0 : diag_live[1] ? 1 : 2;
        // all rows other than a must vanish at z0
        for (int i = 0; i < 3; ++i) {
            if (i == a) continue;
            for (int j = 0; j < 3; ++j)
                if (std::abs(k0(i, j)) > tol) return KClass::Inconsistent;
        }
        const cd d = k0(a, a);
        const cd alpha = k0(a, (a + 1) % 3) / d;
        const cd alpha2 = k0(a, (a + 2) % 3) / d;
        if (!is_cube_root(alpha) || std::abs(alpha2 - alpha * alpha) > 10 * tol)
            return KClass::Inconsistent;
        return KClass::OneDiagonalNonzero;
    }
    return KClass::Inconsistent;  // nonzero matrix with all-zero diagonal
}

// --- Parameter JSON schema ---
// {"kind":"minus"|"plus"|"identity", "a":[re,im], "b":[re,im],
//  "alpha":0|1|2, "beta":0|1|2, "j":1|2, "w":"primary"|"conjugate"}

inline WRoot w_from_json(const nlohmann::json& j) {
    const std::string s = j.value("w", "primary");
    if (s == "primary") return WRoot::primary;
    if (s == "conjugate") return WRoot::conjugate;
    throw std::invalid_argument("boundary params: w must be primary|conjugate");
}

inline cd complex_from_json(const nlohmann::json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline BoundaryChoice boundary_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return IdentityBoundary{};
    if (kind == "minus") {
        KMinusParams p;
        p.a = complex_from_json(j.at("a"));
        p.alpha = CubeRoot{j.value("alpha", 0)};
        p.w = w_from_json(j);
        return p;
    }
    if (kind == "plus") {
        return KPlusParams(complex_from_json(j.at("b")), CubeRoot{j.value("beta", 0)},
                           j.value("j", 1), w_from_json(j));
    }
    throw std::invalid_argument("boundary params: kind must be minus|plus|identity");
}

inline nlohmann::json boundary_to_json(const BoundaryChoice& c) {
    return std::visit(
        [](const auto& p) -> nlohmann::json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, IdentityBoundary>)
                return {{"kind", "identity"}};
            else if constexpr (std::is_same_v<T, KMinusParams>)
                return {{"kind", "minus"},
                        {"a", {p.a.real(), p.a.imag()}},
                        {"alpha", p.alpha.power},
                        {"w", p.w == WRoot::primary ? "primary" : "conjugate"}};
            else
                return {{"kind", "plus"},
                        {"b", {p.b.real(), p.b.imag()}},
                        {"beta", p.beta.power},
                        {"j", p.j},
                        {"w", p.w == WRoot::primary ? "primary" : "conjugate"}};
        },
        c);
}

}  // namespace bqism
