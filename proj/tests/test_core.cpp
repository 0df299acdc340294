#include <doctest.h>

#include <random>

#include "kronsketch/core.hpp"
#include "kronsketch/rng.hpp"
#include "oracle_helpers.hpp"

using namespace kronsketch;

namespace {

KronVector random_kron(std::mt19937_64& rng, const std::vector<Index>& shape) {
    std::vector<Eigen::VectorXd> factors;
    for (Index n : shape) factors.push_back(oracle::random_vector(rng, n));
    return KronVector(std::move(factors));
}

}  // namespace

TEST_CASE("materialize: basis factors produce a basis vector") {
    KronVector v({(Eigen::VectorXd(2) << 1, 0).finished(),
                  (Eigen::VectorXd(2) << 0, 1).finished()});
    const Eigen::VectorXd m = materialize(v);
    Eigen::VectorXd expected(4);
    expected << 0, 1, 0, 0;
    CHECK(m == expected);
}

TEST_CASE("materialize: scalar factors multiply") {
    KronVector v({Eigen::VectorXd::Constant(1, 2.0),
                  Eigen::VectorXd::Constant(1, 3.0),
                  Eigen::VectorXd::Constant(1, 5.0)});
    const Eigen::VectorXd m = materialize(v);
    REQUIRE(m.size() == 1);
    CHECK(m[0] == 30.0);
}

TEST_CASE("materialize matches the double-loop Kronecker oracle") {
    auto rng = make_rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Eigen::VectorXd> factors{oracle::random_vector(rng, 3),
                                             oracle::random_vector(rng, 4)};
        const Eigen::VectorXd expected = oracle::kron_vectors(factors);
        const Eigen::VectorXd got = materialize(KronVector(factors));
        CHECK(oracle::rel_err(got, expected) < 1e-15);
    }
}

TEST_CASE("materialize: cap produces an explicit error") {
    KronVector v({Eigen::VectorXd::Ones(4), Eigen::VectorXd::Ones(4)});
    CHECK_THROWS_WITH_AS(materialize(v, 8),
                         doctest::Contains("too large to materialize"),
                         std::length_error);
}

TEST_CASE("KronVector rejects ambient-dimension overflow") {
    std::vector<Eigen::VectorXd> factors(4, Eigen::VectorXd::Ones(1 << 16));
    CHECK_THROWS_AS(KronVector(factors), std::overflow_error);
}

TEST_CASE("KrMatrix: identity factors give picked basis columns") {
    KrMatrix m({Eigen::MatrixXd::Identity(2, 2),
                Eigen::MatrixXd::Identity(2, 2)});
    const Eigen::MatrixXd d = materialize(m);
    REQUIRE(d.rows() == 4);
    REQUIRE(d.cols() == 2);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 2);
    expected(0, 0) = 1.0;  // e_1 kron e_1
    expected(3, 1) = 1.0;  // e_2 kron e_2
    CHECK(d == expected);
}

TEST_CASE("KrMatrix: single factor materializes to itself") {
    auto rng = make_rng(5);
    const Eigen::MatrixXd f = oracle::random_matrix(rng, 5, 3);
    KrMatrix m({f});
    CHECK(materialize(m) == f);
}

TEST_CASE("KrMatrix materialization matches the per-column oracle") {
    auto rng = make_rng(7);
    std::vector<Eigen::MatrixXd> factors{oracle::random_matrix(rng, 3, 2),
                                         oracle::random_matrix(rng, 4, 2)};
    const Eigen::MatrixXd got = materialize(KrMatrix(factors));
    const Eigen::MatrixXd expected = oracle::khatri_rao(factors);
    CHECK(oracle::rel_err(got, expected) < 1e-15);
}

TEST_CASE("KrMatrix rejects mismatched column counts") {
    CHECK_THROWS_AS(KrMatrix({Eigen::MatrixXd::Ones(2, 2),
                              Eigen::MatrixXd::Ones(2, 3)}),
                    std::invalid_argument);
}

TEST_CASE("kron_row: digit product") {
    KronVector v({(Eigen::VectorXd(2) << 1, 2).finished(),
                  (Eigen::VectorXd(2) << 3, 4).finished()});
    const MultiIndex i = multi_index_from_digits(v.shape(), {1, 0});
    CHECK(kron_row(v, i) == 6.0);  // 2 * 3
}

TEST_CASE("kron_row: zero factor entry annihilates the row") {
    KronVector v({(Eigen::VectorXd(2) << 0, 2).finished(),
                  (Eigen::VectorXd(2) << 3, 4).finished()});
    CHECK(kron_row(v, multi_index_from_digits(v.shape(), {0, 1})) == 0.0);
}

TEST_CASE("kron_row sweep equals materialize") {
    auto rng = make_rng(13);
    const KronVector v = random_kron(rng, {3, 5, 2});
    const Eigen::VectorXd m = materialize(v);
    for (Index lin = 0; lin < v.dim(); ++lin)
        CHECK(kron_row(v, lin) == doctest::Approx(m[lin]).epsilon(1e-14));
}

TEST_CASE("kron_row rejects out-of-range indices") {
    KronVector v({Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2)});
    CHECK_THROWS_AS(kron_row(v, Index(4)), std::out_of_range);
}

TEST_CASE("norm of the materialization is the product of factor norms") {
    auto rng = make_rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const KronVector v = random_kron(rng, {4, 3, 5});
        const double dense = materialize(v).norm();
        CHECK(oracle::rel_err(v.norm(), dense) < 1e-12);
    }
}

TEST_CASE("multi-index round trip is the identity, exhaustively") {
    const std::vector<std::vector<Index>> shapes = {
        {4096}, {64, 64}, {16, 16, 16}, {8, 4, 16, 8}, {1, 7, 1, 13}};
    for (const auto& shape : shapes) {
        const Index dim = shape_dim(shape);
        REQUIRE(dim <= 4096);
        for (Index lin = 0; lin < dim; ++lin) {
            const MultiIndex mi = multi_index_from_linear(shape, lin);
            CHECK(multi_index_from_digits(shape, mi.digits).linear == lin);
        }
    }
}

TEST_CASE("matrix action is the weighted sum of materialized columns") {
    auto rng = make_rng(19);
    std::vector<Eigen::MatrixXd> factors{oracle::random_matrix(rng, 4, 3),
                                         oracle::random_matrix(rng, 5, 3)};
    KrMatrix m(factors);
    const Eigen::VectorXd z = oracle::random_vector(rng, 3);
    const Eigen::VectorXd lhs = materialize(m) * z;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m.rows());
    for (Index r = 0; r < m.cols(); ++r)
        rhs += z[r] * materialize(m.column(r));
    CHECK(oracle::rel_err(lhs, rhs) < 1e-12);
}

TEST_CASE("kron_dense_dot matches the materialized inner product") {
    auto rng = make_rng(23);
    for (int rep = 0; rep < 10; ++rep) {
        const KronVector v = random_kron(rng, {4, 3, 5});
        const Eigen::VectorXd y = oracle::random_vector(rng, v.dim());
        const double expected = materialize(v).dot(y);
        CHECK(oracle::rel_err(kron_dense_dot(v.factors(), y), expected) <
              1e-12);
    }
}

TEST_CASE("kron_distance matches the materialized distance") {
    auto rng = make_rng(29);
    const KronVector a = random_kron(rng, {4, 4, 4});
    const KronVector b = random_kron(rng, {4, 4, 4});
    const double expected = (materialize(a) - materialize(b)).norm();
    CHECK(oracle::rel_err(kron_distance(a, b), expected) < 1e-10);
    CHECK(kron_distance(a, a) == 0.0);
}

TEST_CASE("DenseTensor addressing is row-major") {
    DenseTensor t({2, 3}, Eigen::VectorXd::LinSpaced(6, 0, 5));
    const Index digits[2] = {1, 2};
    CHECK(t.at(digits) == 5.0);
    const Index first[2] = {1, 0};
    CHECK(t.at(first) == 3.0);
}
