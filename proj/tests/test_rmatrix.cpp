#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "bqism/rmatrix.hpp"

using namespace bqism;

static std::mt19937_64 rng(7);

TEST_CASE("regularity: R(1) = P") {
    CHECK((r_matrix(1.0) - permutation_operator(3)).norm() < 1e-14);
}

TEST_CASE("explicit entries") {
    // z = 0: a, b -> 0 and c -> 1
    const Matrix r0 = r_matrix(0.0);
    CHECK(std::abs(r0(1, 2)) == 0.0);
    CHECK(std::abs(r0(1, 3)) == 0.0);
    CHECK(std::abs(r0(1, 7) - 1.0) < 1e-15);
    // z = 2: entry (2,3) of the display = z(z-1)/(z^2-z+1) = 2/3
    CHECK(std::abs(r_matrix(2.0)(1, 2) - cd(2.0 / 3.0)) < 1e-15);
}

TEST_CASE("pole guard") {
    // z^2 - z + 1 = 0 at z = e^{+-i pi/3}
    const cd pole = std::polar(1.0, std::acos(-1.0) / 3.0);
    CHECK_THROWS_AS(r_matrix(pole), std::domain_error);
    CHECK_NOTHROW(r_matrix(pole + 0.1));
}

TEST_CASE("unitarity scalar f(z)") {
    CHECK(std::abs(unitarity_scalar(1.0) - 1.0) < 1e-14);
    CHECK(std::abs(unitarity_scalar(2.0) - unitarity_scalar(0.5)) < 1e-12);

    // golden value f(2) = 1
    std::ifstream f(std::string(TEST_DATA_DIR) + "/golden.json");
    REQUIRE(f.good());
    const auto golden = nlohmann::json::parse(f);
    const cd f2(golden["f_at_2"][0].get<double>(), golden["f_at_2"][1].get<double>());
    CHECK(std::abs(unitarity_scalar(2.0) - f2) < 1e-12);
}

TEST_CASE("unitarity over 100 sampled z") {
    for (int i = 0; i < 100; ++i) {
        const cd z = sample_spectral(rng);
        const Matrix q = r_matrix(z) * r_matrix_21(1.0 / z);
        const auto st = is_scalar_multiple(q, 1e-10);
        CHECK(st.is_scalar);
        CHECK(std::abs(unitarity_scalar(z) - unitarity_scalar(1.0 / z)) < 1e-10);
    }
}

TEST_CASE("Yang-Baxter equation") {
    CHECK(ybe_residual(1.0, 1.0) < 1e-14);
    CHECK(ybe_residual(2.0, cd(3.0, 1.0)) < 1e-10);
    CHECK(ybe_residual(0.5, std::polar(1.0, std::acos(-1.0) / 5.0)) < 1e-10);
    for (int i = 0; i < 100; ++i)
        CHECK(ybe_residual(sample_spectral(rng), sample_spectral(rng)) < 1e-10);
}

TEST_CASE("derivative of R") {
    // constant entries differentiate to zero
    const Matrix d = r_matrix_deriv(2.0);
    CHECK(std::abs(d(0, 0)) == 0.0);
    CHECK(std::abs(d(4, 4)) == 0.0);
    CHECK(std::abs(d(8, 8)) == 0.0);

    // central finite differences converge at O(h^2)
    auto fd = [](cd z, double h) {
        return Matrix((r_matrix(z + h) - r_matrix(z - h)) / (2.0 * h));
    };
    const double e3 = (r_matrix_deriv(2.0) - fd(2.0, 1e-3)).norm();
    const double e4 = (r_matrix_deriv(2.0) - fd(2.0, 1e-4)).norm();
    CHECK(e3 < 1e-5);
    CHECK(e4 < 1e-7);
    CHECK(e4 < e3);
}

TEST_CASE("curly R: closed form vs definition, Eq.-style unitarity") {
    for (int i = 0; i < 50; ++i) {
        const cd z = sample_spectral(rng);
        CHECK((curly_r(z, CurlyMode::closed_form) - curly_r(z, CurlyMode::from_definition))
                  .norm() < 1e-9);
    }
    // curly^{t1}_12(z) R21^{t1}(z) = I at z = 2
    CHECK((partial_transpose(curly_r(2.0), 1, 3) * partial_transpose(r_matrix_21(2.0), 1, 3) -
           identity(9)).norm() < 1e-10);
    // entry (1,1) at z = 2: prefactor 3/7 times z^2 + 1 = 15/7
    CHECK(std::abs(curly_r(2.0)(0, 0) - cd(15.0 / 7.0)) < 1e-14);
    // curly21(0) = R12(0); approached via small z (z = 0 is a pole of the prefactor
    // but the limit is finite)
    const cd eps(1e-7, 0.0);
    const Matrix p = permutation_operator(3);
    CHECK((p * curly_r(1e-3) * p - r_matrix(0.0)).norm() < 5e-3);
    (void)eps;
}

TEST_CASE("crossing unitarity residual") {
    // M = I, lambda = 1, z near 1: product far from scalar
    CHECK(crossing_unitarity_residual(identity(3), 1.0, 1.0) > 0.01);
    CHECK_THROWS_AS(crossing_unitarity_residual(Matrix::Zero(3, 3), 1.0, 2.0),
                    std::invalid_argument);

    // small sampled sweep: residual stays bounded away from zero
    double best = 1e9;
    std::uniform_real_distribution<double> umod(0.2, 3.0), uph(0.0, 6.28);
    for (int t = 0; t < 25; ++t) {
        Matrix m = Matrix::Zero(3, 3);
        m(0, 0) = 1.0;
        m(1, 1) = std::polar(umod(rng), uph(rng));
        m(2, 2) = std::polar(umod(rng), uph(rng));
        for (int k = 0; k < 8; ++k) {
            const cd lam = std::polar(1.0, 6.2831853 * k / 8);
            best = std::min(best, crossing_unitarity_residual(m, lam, 2.0));
        }
    }
    CHECK(best > 1e-2);
}

TEST_CASE("R-check") {
    CHECK((r_check(1.0) - identity(9)).norm() < 1e-14);
    CHECK((r_check(0.0) - permutation_operator(3) * r_matrix(0.0)).norm() == 0.0);
    // Rcheck(0)^2 entries via direct multiplication
    const Matrix rc0 = r_check(0.0);
    const Matrix sq = rc0 * rc0;
    CHECK(std::abs(sq(0, 0) - 1.0) < 1e-15);
}

TEST_CASE("sampler avoids pole disks") {
    for (int i = 0; i < 200; ++i) {
        const cd z = sample_spectral(rng);
        CHECK(std::abs(z * z - z + 1.0) > 0.01);
        CHECK(std::abs(z - 1.0) > 0.04);
        CHECK(std::abs(z) >= 0.2);
        CHECK(std::abs(z) <= 5.0);
    }
}
