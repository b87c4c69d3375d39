#include <random>
#include <stdexcept>

#include "doctest.h"

#include "switchsim/channel.hpp"

using namespace switchsim;

namespace {

// isometry with orthonormal columns via Householder QR of a random complex matrix
Mat random_isometry(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    return q.leftCols(cols);
}

}  // namespace

TEST_CASE("kraus channel construction validates completeness") {
    CHECK_NOTHROW(pauli_channel(0.5, 0.3, 0.2));

    std::vector<Mat> incomplete{0.5 * identity(2)};
    CHECK_THROWS_AS(KrausChannel(2, 2, std::move(incomplete)), std::invalid_argument);

    std::vector<Mat> wrong_shape{identity(3)};
    CHECK_THROWS_AS(KrausChannel(2, 2, std::move(wrong_shape)), std::invalid_argument);
}

TEST_CASE("channel probability parameters are checked") {
    CHECK_THROWS_AS(pauli_channel(0.5, 0.6, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(pauli_channel(0.5, 0.3, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(bit_flip(1.5), std::invalid_argument);
    CHECK_THROWS_AS(phase_flip(-0.1), std::invalid_argument);
}

TEST_CASE("pauli channel action on the computational basis") {
    const KrausChannel ch = pauli_channel(1.0 / 3, 1.0 / 3, 1.0 / 3);
    const DensityMatrix out = apply(ch, DensityMatrix::pure(PureState(ket0())));

    // sigma_y and sigma_z both leave |0><0| diagonal: 2/3 stays, 1/3 flips
    CHECK(std::abs(out.matrix()(0, 0) - Complex(2.0 / 3, 0)) < 1e-12);
    CHECK(std::abs(out.matrix()(1, 1) - Complex(1.0 / 3, 0)) < 1e-12);
    CHECK(std::abs(out.matrix()(0, 1)) < 1e-15);
}

TEST_CASE("validate_cptp reports the completeness residual") {
    CHECK(validate_cptp(bit_flip(0.25)).ok());
    CHECK(validate_cptp(identity_channel(4)).ok());
    CHECK(validate_cptp(pauli_channel(0.2, 0.5, 0.3)).max_residual < 1e-12);
}

TEST_CASE("apply preserves density matrix structure") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat g(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Mat rho = g * dagger(g);
    rho /= trace(rho);

    const DensityMatrix out = apply(phase_flip(0.3), DensityMatrix(std::move(rho)));
    CHECK(std::abs(trace(out.matrix()) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("composing two bit flips gives another bit flip") {
    const double r = 0.3;
    const KrausChannel twice = compose(bit_flip(r), bit_flip(r));
    const KrausChannel direct = bit_flip(2.0 * r * (1.0 - r));
    CHECK(choi_distance(choi(twice), choi(direct)) < 1e-12);
    CHECK(twice.kraus_count() == 4);
}

TEST_CASE("choi matrix of the identity channel") {
    const ChoiMatrix c = choi(identity_channel());
    Mat expected = Mat::Zero(4, 4);
    expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;
    CHECK(max_abs_diff(c.matrix(), expected) < 1e-14);
}

TEST_CASE("choi matrix of the symmetric pauli channel") {
    const ChoiMatrix c = choi(pauli_channel(1.0 / 3, 1.0 / 3, 1.0 / 3));
    Mat expected(4, 4);
    expected << 2, 0, 0, 0, 0, 1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 2;
    expected /= 3.0;
    CHECK(max_abs_diff(c.matrix(), expected) < 1e-14);
}

TEST_CASE("choi matrix of the balanced phase flip is diagonal") {
    const ChoiMatrix c = choi(phase_flip(0.5));
    Mat expected = Mat::Zero(4, 4);
    expected(0, 0) = expected(3, 3) = 1.0;
    CHECK(max_abs_diff(c.matrix(), expected) < 1e-14);
}

TEST_CASE("choi construction validates trace preservation") {
    // half the identity Choi is not trace preserving
    Mat half = Mat::Zero(4, 4);
    half(0, 0) = half(0, 3) = half(3, 0) = half(3, 3) = 0.5;
    CHECK_THROWS_AS(ChoiMatrix(2, 2, std::move(half)), std::invalid_argument);
}

TEST_CASE("kraus remixing leaves the channel unchanged") {
    std::mt19937_64 rng(5);
    const KrausChannel ch = pauli_channel(0.5, 0.2, 0.3);

    SUBCASE("square unitary remix") {
        const Mat u = random_isometry(3, 3, rng);
        const KrausChannel remixed = remix_kraus(ch, u);
        CHECK(remixed.kraus_count() == 3);
        CHECK(choi_distance(choi(remixed), choi(ch)) < 1e-12);
    }
    SUBCASE("taller isometry adds redundant operators") {
        const Mat v = random_isometry(5, 3, rng);
        const KrausChannel remixed = remix_kraus(ch, v);
        CHECK(remixed.kraus_count() == 5);
        CHECK(choi_distance(choi(remixed), choi(ch)) < 1e-12);
    }
    SUBCASE("non-isometry is rejected") {
        Mat bad = Mat::Ones(3, 3);
        CHECK_THROWS_AS(remix_kraus(ch, bad), std::invalid_argument);
    }
}

TEST_CASE("apply_to_operator extends the channel linearly") {
    const KrausChannel ch = bit_flip(0.25);
    Mat op(2, 2);
    op << 1, Complex(0, 2), 3, -1;
    const Mat direct = apply_to_operator(ch, op);
    Mat sum = Mat::Zero(2, 2);
    for (const Mat& k : ch.kraus()) sum += k * op * dagger(k);
    CHECK(max_abs_diff(direct, sum) < 1e-14);
}

TEST_CASE("channel json round trip") {
    const KrausChannel ch = pauli_channel(0.5, 0.2, 0.3);
    const Json j = to_json(ch);
    const KrausChannel back = channel_from_json(j);
    CHECK(back.label() == ch.label());
    CHECK(back.kraus_count() == ch.kraus_count());
    CHECK(choi_distance(choi(back), choi(ch)) < 1e-14);
    CHECK(to_json(back) == j);
}

TEST_CASE("channel json rejects malformed input") {
    CHECK_THROWS_AS(channel_from_json(Json::array()), std::invalid_argument);
    Json missing{{"label", "x"}, {"dim_in", 2}, {"dim_out", 2}};
    CHECK_THROWS_AS(channel_from_json(missing), std::invalid_argument);
    Json bad_entry = to_json(identity_channel());
    bad_entry["kraus"][0][0] = "oops";
    CHECK_THROWS(channel_from_json(bad_entry));
}
