#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "bqism/chain.hpp"

using namespace bqism;

static std::mt19937_64 rng(23);

namespace {

ChainSpec hermitian_spec(int n, double x = 1.0, double y = 1.0, int j = 1,
                         WRoot w = WRoot::primary, int alpha = 0, int beta = 0) {
    const auto [a, b] = hermitian_params(x, y, j, w);
    ChainSpec spec;
    spec.n_sites = n;
    spec.left = KMinusParams{a, CubeRoot{alpha}, w};
    spec.right = KPlusParams(b, CubeRoot{beta}, j, w);
    return spec;
}

ChainSpec identity_spec(int n) {
    ChainSpec spec;
    spec.n_sites = n;
    return spec;
}

Matrix permutation_matrix3(const int (&g)[3]) {
    Matrix s = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) s(g[i] - 1, i) = 1.0;
    return s;
}

}  // namespace

TEST_CASE("double monodromy trivial cases") {
    // N=1, identity boundaries, z=1: everything cancels
    CHECK((double_monodromy(1.0, identity_spec(1)) - identity(9)).norm() < 1e-14);
    // N=2 likewise
    CHECK((double_monodromy(1.0, identity_spec(2)) - identity(27)).norm() < 1e-13);
}

TEST_CASE("monodromy exchange relation") {
    // R12(x/y) T13(x) R21(xy) T23(y) = T23(y) R12(xy) T13(x) R21(x/y)
    for (int n = 1; n <= 2; ++n) {
        ChainSpec spec = hermitian_spec(n);
        const Eigen::Index cdim = pow3(n);
        const Matrix i_chain = identity(cdim);
        const Matrix i3 = identity(3);
        const Matrix pswap = kron(permutation_operator(3), i_chain);
        for (int t = 0; t < 3; ++t) {
            const cd x = sample_spectral(rng), y = sample_spectral(rng);
            const Matrix t23x = kron(i3, double_monodromy(x, spec));
            const Matrix t23y = kron(i3, double_monodromy(y, spec));
            const Matrix t13x = pswap * t23x * pswap;
            auto r12 = [&](cd z) { return kron(r_matrix(z), i_chain); };
            auto r21 = [&](cd z) { return kron(r_matrix_21(z), i_chain); };
            const Matrix lhs = r12(x / y) * t13x * r21(x * y) * t23y;
            const Matrix rhs = t23y * r12(x * y) * t13x * r21(x / y);
            CHECK((lhs - rhs).norm() / lhs.norm() < 1e-9);
        }
    }
}

TEST_CASE("transfer matrix values and commutativity") {
    // N=1, K+- = I: t(1) = tr(K+(1)) I = 3 I
    CHECK((transfer_matrix(1.0, identity_spec(1)) - 3.0 * identity(3)).norm() < 1e-13);

    for (int n = 1; n <= 2; ++n) {
        ChainSpec spec = hermitian_spec(n, 1.0, -2.0, 2, WRoot::conjugate, 1, 2);
        for (int t = 0; t < (n == 1 ? 10 : 5); ++t) {
            const cd x = sample_spectral(rng), y = sample_spectral(rng);
            const Matrix tx = transfer_matrix(x, spec);
            const Matrix ty = transfer_matrix(y, spec);
            CHECK(commutator_norm(tx, ty) / (tx.norm() * ty.norm()) < 1e-9);
        }
    }
}

TEST_CASE("local Hamiltonian: both routes agree, hermitian, S3 invariant") {
    const Matrix hd = local_hamiltonian(LocalHamMode::derivative);
    const Matrix hs = local_hamiltonian(LocalHamMode::explicit_s3);
    CHECK((hd - hs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((hs - hs.adjoint()).norm() < 1e-14);

    const int perms[6][3] = {{1, 2, 3}, {1, 3, 2}, {2, 1, 3}, {2, 3, 1}, {3, 1, 2}, {3, 2, 1}};
    for (const auto& g : perms) {
        const Matrix s = permutation_matrix3(g);
        const Matrix ss = kron(s, s);
        CHECK((ss * hs * ss.adjoint() - hs).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("hermitian parameterization formulas") {
    const cd w = w_value(WRoot::primary);
    const cd i_unit(0.0, 1.0);
    // X = 1: a = -(i w + w^{-1} - 1), the sign-corrected form; A = w^{-1} X
    const auto [a, b] = hermitian_params(1.0, 1.0, 1, WRoot::primary);
    CHECK(std::abs(a - (1.0 - w * w - i_unit * w)) < 1e-15);
    CHECK(std::abs(b - (w - 1.0 - i_unit / w)) < 1e-15);

    // A = i (1 - w^2 - a)^{-1} = w^{-1} X for X = 2
    const auto [a2, b2] = hermitian_params(2.0, 1.0, 1, WRoot::primary);
    CHECK(std::abs(i_unit / (1.0 - w * w - a2) - 2.0 / w) < 1e-14);
    // B = -i (1 - w^j + b)^{-1} = w^j Y for Y = 3, j = 2
    const auto [a3, b3] = hermitian_params(1.0, 3.0, 2, WRoot::primary);
    CHECK(std::abs(-i_unit / (1.0 - w * w + b3) - 3.0 * w * w) < 1e-13);

    CHECK_THROWS_AS(hermitian_params(0.0, 1.0, 1, WRoot::primary), std::invalid_argument);
}

TEST_CASE("boundary terms: two routes agree") {
    for (int t = 0; t < 10; ++t) {
        std::normal_distribution<double> n(0.0, 1.0);
        KMinusParams km;
        km.a = cd(n(rng), n(rng));
        km.alpha = CubeRoot{static_cast<int>(rng() % 3)};
        km.w = (rng() & 1) ? WRoot::primary : WRoot::conjugate;
        const Matrix closed = boundary_left_term(km);
        CHECK(closed.diagonal().norm() == 0.0);
        CHECK((closed - boundary_left_term_fd(km)).norm() < 1e-9);
        // entry (1,2) = A alpha
        const cd w = w_value(km.w);
        const cd a_coef = cd(0.0, 1.0) / (1.0 - w * w - km.a);
        CHECK(std::abs(closed(0, 1) - a_coef * km.alpha.value(km.w)) < 1e-14);
    }
    for (int t = 0; t < 10; ++t) {
        std::normal_distribution<double> n(0.0, 1.0);
        cd b(n(rng), n(rng));
        const int j = 1 + static_cast<int>(rng() % 2);
        const WRoot w = (rng() & 1) ? WRoot::primary : WRoot::conjugate;
        const cd wj = j == 1 ? w_value(w) : w_value(w) * w_value(w);
        if (std::abs(b - (wj - 1.0)) < 1e-2) continue;
        const KPlusParams kp(b, CubeRoot{static_cast<int>(rng() % 3)}, j, w);
        const Matrix closed = boundary_right_term(kp);
        const Matrix traced = boundary_right_term_trace(k_plus(1.0, kp));
        CHECK(closed.diagonal().norm() == 0.0);
        CHECK((closed - traced).norm() < 1e-9);
        // entry (2,1) = B beta^2 w^j in the transpose-dressed pattern
        const cd b_coef = -cd(0.0, 1.0) / (1.0 - wj + kp.b);
        const cd be = kp.beta.value(w);
        CHECK(std::abs(closed(1, 0) - b_coef * be * wj) < 1e-13);
    }
}

TEST_CASE("global Hamiltonian") {
    // hermitian family
    const ChainSpec h3 = hermitian_spec(3);
    const Matrix h = global_hamiltonian(h3);
    CHECK((h - h.adjoint()).norm() < 1e-10);

    // generic complex couplings: non-hermitian
    ChainSpec generic;
    generic.n_sites = 2;
    generic.left = KMinusParams{cd(0.7, 0.4), CubeRoot{0}, WRoot::primary};
    generic.right = KPlusParams(cd(-0.2, 0.9), CubeRoot{0}, 1, WRoot::primary);
    const Matrix hg = global_hamiltonian(generic);
    CHECK((hg - hg.adjoint()).norm() > 1e-3);

    CHECK_THROWS_AS(global_hamiltonian(ChainSpec{.n_sites = 9}), std::invalid_argument);
}

TEST_CASE("Hamiltonian commutes with the transfer matrix") {
    const ChainSpec id2 = identity_spec(2);
    CHECK(hamiltonian_transfer_commutation_residual(id2, 2.0) < 1e-9);

    const ChainSpec h3 = hermitian_spec(3);
    for (int t = 0; t < 5; ++t)
        CHECK(hamiltonian_transfer_commutation_residual(h3, sample_spectral(rng)) < 1e-8);

    // mismatched boundaries: H from one parameter set, t(z) from another
    const Matrix h = global_hamiltonian(hermitian_spec(2, 1.0, 1.0));
    const Matrix t = transfer_matrix(2.0, hermitian_spec(2, -2.0, 0.5, 2));
    CHECK(commutator_norm(h, t) / (h.norm() * t.norm()) > 1e-3);
}

TEST_CASE("derivative of t(z) at z=1 reproduces H at N=2") {
    const ChainSpec spec = hermitian_spec(2);
    const auto* kp = std::get_if<KPlusParams>(&spec.right);
    REQUIRE(kp != nullptr);
    const double h = 1e-5;
    auto tz = [&](double z) { return transfer_matrix(cd(z, 0.0), spec); };
    const Matrix d1 = (tz(1 + h) - tz(1 - h)) / (2 * h);
    const Matrix d2 = (tz(1 + h / 2) - tz(1 - h / 2)) / h;
    const Matrix tprime = (4.0 * d2 - d1) / 3.0;  // Richardson
    const Matrix dkp = (k_plus(1.0 + h, *kp) - k_plus(1.0 - h, *kp)) / (2.0 * h);
    const cd tr_kp1 = k_plus(1.0, *kp).trace();
    const Matrix line1 =
        spec.c / (2.0 * tr_kp1) * (tprime - dkp.trace() * identity(9));
    CHECK((line1 - global_hamiltonian(spec)).norm() < 1e-7);
}

TEST_CASE("spectrum") {
    // boundary-only N=1 hermitian chain: 3 real eigenvalues
    const auto res1 = spectrum(hermitian_spec(1));
    CHECK(res1.eigenvalues.size() == 3);
    for (cd e : res1.eigenvalues) CHECK(std::abs(e.imag()) < 1e-9);

    // N=2 identity boundaries: golden spectrum file
    const auto res2 = spectrum(identity_spec(2));
    std::ifstream f(std::string(TEST_DATA_DIR) + "/golden.json");
    REQUIRE(f.good());
    const auto golden = nlohmann::json::parse(f);
    const auto& ev = golden["spectrum_n2_identity"];
    REQUIRE(res2.eigenvalues.size() == ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i)
        CHECK(std::abs(res2.eigenvalues[i] - cd(ev[i].get<double>(), 0.0)) < 1e-10);

    // hermitian N=3: all eigenvalues real, sorted
    const auto res3 = spectrum(hermitian_spec(3));
    CHECK(res3.hermiticity_defect < 1e-10);
    for (std::size_t i = 1; i < res3.eigenvalues.size(); ++i)
        CHECK(res3.eigenvalues[i - 1].real() <= res3.eigenvalues[i].real());
}

TEST_CASE("ChainSpec JSON") {
    const nlohmann::json j = {
        {"N", 3},
        {"left", {{"kind", "minus"}, {"a", {0.0, 0.0}}, {"alpha", 0}, {"w", "primary"}}},
        {"right", {{"kind", "plus"}, {"b", {1.0, 1.0}}, {"beta", 0}, {"j", 1}, {"w", "primary"}}},
        {"c", {0.0, 1.0}},
        {"X", 1.0},
        {"Y", 1.0}};
    const ChainSpec spec = chain_spec_from_json(j);
    spec.validate();
    const Matrix h = global_hamiltonian(spec);
    CHECK((h - h.adjoint()).norm() < 1e-10);  // X/Y generated hermitian couplings

    const auto round = chain_spec_to_json(spec);
    const ChainSpec back = chain_spec_from_json(round);
    CHECK((global_hamiltonian(back) - h).norm() < 1e-14);

    CHECK_THROWS_AS(chain_spec_from_json({{"N", 0}}).validate(), std::invalid_argument);
}
