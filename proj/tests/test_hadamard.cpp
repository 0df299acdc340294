#include <doctest.h>

#include <cmath>

#include "kronsketch/hadamard.hpp"
#include "kronsketch/leverage.hpp"
#include "kronsketch/rng.hpp"
#include "oracle_helpers.hpp"

using namespace kronsketch;

TEST_CASE("fwht: first column of the 2-point transform") {
    Eigen::VectorXd x(2);
    x << 1, 0;
    const Eigen::VectorXd y = fwht(x);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(y[0] == doctest::Approx(s).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(s).epsilon(1e-15));
}

TEST_CASE("fwht: first column of the 4-point transform is flat") {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
    x[0] = 1.0;
    const Eigen::VectorXd y = fwht(x);
    for (Index i = 0; i < 4; ++i)
        CHECK(y[i] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("fwht matches the Sylvester-recursion matrix") {
    auto rng = make_rng(101);
    const Eigen::MatrixXd h = oracle::hadamard_matrix(8);
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::VectorXd x = oracle::random_vector(rng, 8);
        CHECK(oracle::rel_err(fwht(x), Eigen::VectorXd(h * x)) < 1e-13);
    }
}

TEST_CASE("fwht rejects non-power-of-two lengths and names the padding") {
    Eigen::VectorXd x = Eigen::VectorXd::Ones(28);
    CHECK_THROWS_WITH_AS(fwht(x), doctest::Contains("32"),
                         std::invalid_argument);
}

TEST_CASE("fwht preserves norms") {
    auto rng = make_rng(102);
    for (Index n : {2, 16, 128, 1024}) {
        const Eigen::VectorXd x = oracle::random_vector(rng, n);
        CHECK(oracle::rel_err(fwht(x).norm(), x.norm()) < 1e-12);
    }
}

TEST_CASE("fwht preserves inner products") {
    auto rng = make_rng(103);
    for (Index n : {2, 8, 64, 256, 1024}) {
        for (int rep = 0; rep < 5; ++rep) {
            const Eigen::VectorXd x = oracle::random_vector(rng, n);
            const Eigen::VectorXd y = oracle::random_vector(rng, n);
            CHECK(oracle::rel_err(fwht(x).dot(fwht(y)), x.dot(y)) < 1e-10);
        }
    }
}

TEST_CASE("fwht applied twice restores the input") {
    auto rng = make_rng(104);
    for (Index n : {4, 32, 512}) {
        const Eigen::VectorXd x = oracle::random_vector(rng, n);
        CHECK(oracle::rel_err(fwht(fwht(x)), x) < 1e-10);
    }
}

TEST_CASE("randomized transform with identity signs equals fwht") {
    RademacherDiagonal d;
    d.signs = Eigen::VectorXd::Ones(16);
    RandomizedHadamard t(std::move(d));
    auto rng = make_rng(105);
    const Eigen::VectorXd x = oracle::random_vector(rng, 16);
    CHECK(fwht(x) == t.apply(x));
}

TEST_CASE("randomized transform maps zero to zero") {
    RandomizedHadamard t(32, 7);
    CHECK(t.apply(Eigen::VectorXd::Zero(32)).norm() == 0.0);
}

TEST_CASE("randomized transform matches the dense H * diag oracle") {
    auto rng = make_rng(106);
    for (int rep = 0; rep < 10; ++rep) {
        RandomizedHadamard t(16, 1000 + rep);
        const Eigen::MatrixXd dense =
            oracle::hadamard_matrix(16) *
            Eigen::MatrixXd(t.diagonal().signs.asDiagonal());
        const Eigen::VectorXd x = oracle::random_vector(rng, 16);
        CHECK(oracle::rel_err(t.apply(x), Eigen::VectorXd(dense * x)) < 1e-13);
        CHECK(oracle::rel_err(t.apply(x).norm(), x.norm()) < 1e-12);
    }
}

TEST_CASE("rademacher signs are reproducible and in {-1, +1}") {
    const RademacherDiagonal a = make_rademacher(64, 42);
    const RademacherDiagonal b = make_rademacher(64, 42);
    CHECK(a.signs == b.signs);
    for (Index i = 0; i < 64; ++i)
        CHECK(std::abs(a.signs[i]) == 1.0);
    CHECK(make_rademacher(64, 43).signs != a.signs);
}

TEST_CASE("pad_pow2: 28 pads to 32 with zero tail") {
    const Eigen::VectorXd x = Eigen::VectorXd::Ones(28);
    const Eigen::VectorXd y = pad_pow2(x);
    REQUIRE(y.size() == 32);
    CHECK(y.head(28) == x);
    CHECK(y.tail(4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pad_pow2: power-of-two input is unchanged") {
    const Eigen::VectorXd x = Eigen::VectorXd::Random(16);
    CHECK(pad_pow2(x) == x);
}

TEST_CASE("pad_pow2: length five") {
    Eigen::VectorXd x(5);
    x << 1, 2, 3, 4, 5;
    const Eigen::VectorXd y = pad_pow2(x);
    Eigen::VectorXd expected(8);
    expected << 1, 2, 3, 4, 5, 0, 0, 0;
    CHECK(y == expected);
}

// Statistical surrogate for the coherence-flattening property: with maximal
// input coherence, the transformed coherence should stay below
// 2 R ln(2 I R / eta) / I for most sign draws.
TEST_CASE("random sign mixing flattens a maximally coherent basis") {
    const Index n = 256;
    const Index r = 4;
    const double eta = 0.1;
    Eigen::MatrixXd spiked = Eigen::MatrixXd::Zero(n, r);
    for (Index c = 0; c < r; ++c) spiked(c, c) = 1.0;  // coherence 1
    REQUIRE(leverage_scores(spiked).coherence == doctest::Approx(1.0));

    const double bound = 2.0 * static_cast<double>(r) *
                         std::log(2.0 * n * r / eta) / static_cast<double>(n);
    int exceeded = 0;
    for (int seed = 0; seed < 200; ++seed) {
        RandomizedHadamard t(n, 900 + seed);
        Eigen::MatrixXd mixed(n, r);
        for (Index c = 0; c < r; ++c) mixed.col(c) = t.apply(spiked.col(c));
        if (leverage_scores(mixed).coherence > bound) ++exceeded;
    }
    CHECK(static_cast<double>(exceeded) / 200.0 <= 0.15);
}
