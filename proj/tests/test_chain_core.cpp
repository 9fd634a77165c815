#include <doctest.h>

#include <functional>
#include <random>
#include <string>

#include "symchain/generator.hpp"
#include "test_support.hpp"

using namespace symchain;

namespace {

bool throws_code(const std::function<void()>& f, const std::string& code) {
    try {
        f();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

}  // namespace

TEST_CASE("validate_generator accepts conservative matrices") {
    Eigen::MatrixXd q(2, 2);
    q << -1, 1, 1, -1;
    const GeneratorMatrix g = validate_generator(q, StateSpace::finite(1));
    CHECK(g.rate(0, 1) == 1.0);
    CHECK(g.rate(1, 1) == -1.0);

    CHECK_NOTHROW(testsupport::example1_chain(1.0, 2.0, 0.5));
}

TEST_CASE("validate_generator rejects each violated relation") {
    Eigen::MatrixXd bad_sum(2, 2);
    bad_sum << -1, 2, 1, -1;
    CHECK(throws_code([&] { validate_generator(bad_sum, StateSpace::finite(1)); }, "RowSumNonzero"));

    Eigen::MatrixXd negative(2, 2);
    negative << 1, -1, 1, -1;
    CHECK(throws_code([&] { validate_generator(negative, StateSpace::finite(1)); }, "NegativeOffDiagonal"));

    Eigen::MatrixXd positive_diag(2, 2);
    positive_diag << 1, 0, 0, 1;
    CHECK(throws_code([&] { validate_generator(positive_diag, StateSpace::finite(1)); }, "PositiveDiagonal"));

    Eigen::MatrixXd ok(2, 2);
    ok << -1, 1, 1, -1;
    CHECK(throws_code([&] { validate_generator(ok, StateSpace::finite(2)); }, "SizeMismatch"));
}

TEST_CASE("truncate_bdjump assembles the documented rows") {
    const BDJumpModel model{1.0, 1.0, 0.5};
    const GeneratorMatrix q = truncate_bdjump(model, StateSpace::lattice_window(-2, 2));
    REQUIRE(q.size() == 5);

    // Interior row at state 1: the jump rate lands on the death neighbor.
    CHECK(q.rate(1, 0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(q.rate(1, 1) == doctest::Approx(-2.5).epsilon(1e-15));
    CHECK(q.rate(1, 2) == doctest::Approx(1.0).epsilon(1e-15));

    // State 0 keeps plain birth-death rates and no jump term.
    CHECK(q.rate(0, -1) == 1.0);
    CHECK(q.rate(0, 0) == -2.0);
    CHECK(q.rate(0, 1) == 1.0);

    // Boundary rows: outward rate dropped, diagonal re-closed.
    CHECK(q.rate(2, 2) == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(q.rate(-2, -2) == doctest::Approx(-1.5).epsilon(1e-15));
}

TEST_CASE("truncate_bdjump row sums vanish for random rates") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.05, 8.0);
    for (int trial = 0; trial < 25; ++trial) {
        const BDJumpModel model{u(rng), u(rng), u(rng)};
        const GeneratorMatrix q = truncate_bdjump(model, StateSpace::lattice_window(-7, 7));
        for (int i = 0; i < q.size(); ++i) {
            CHECK(std::abs(q.rates.row(i).sum()) <= 1e-12);
        }
    }
}

TEST_CASE("truncate_bdjump rejects bad windows") {
    const BDJumpModel model{1.0, 1.0, 0.1};
    CHECK(throws_code([&] { truncate_bdjump(model, StateSpace::lattice_window(1, 5)); }, "InvalidSpace"));
    CHECK(throws_code([&] { truncate_bdjump(model, StateSpace::finite(4)); }, "InvalidSpace"));
    CHECK(throws_code([&] { truncate_bdjump(BDJumpModel{0.0, 1.0, 0.1}, StateSpace::lattice_window(-2, 2)); },
                      "InvalidRate"));
}

TEST_CASE("reflection about the midpoint") {
    const StateSpace finite = StateSpace::finite(4);
    CHECK(finite.reflect_label(1) == 3);
    CHECK(finite.reflect_label(2) == 2);  // fixed point N/2

    const StateSpace window = StateSpace::lattice_window(-3, 3);
    CHECK(window.reflect_label(2) == -2);
    CHECK(window.center_label() == 0.0);

    for (int n = 0; n <= 4; ++n) CHECK(finite.reflect_label(finite.reflect_label(n)) == n);
    for (int n = -3; n <= 3; ++n) CHECK(window.reflect_label(window.reflect_label(n)) == n);

    const StateSpace lopsided = StateSpace::lattice_window(-2, 3);
    CHECK(!lopsided.reflectable());
    CHECK(throws_code([&] { lopsided.reflect_label(1); }, "AsymmetricWindow"));
}

TEST_CASE("state spaces map labels to indices") {
    const StateSpace window = StateSpace::lattice_window(-40, 40);
    CHECK(window.size() == 81);
    CHECK(window.index_of(0) == 40);
    CHECK(window.label_of(0) == -40);
    CHECK(throws_code([&] { window.index_of(41); }, "StateOutOfRange"));
}
