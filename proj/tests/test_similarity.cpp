#include <doctest.h>

#include <cmath>
#include <random>

#include "symchain/similarity.hpp"
#include "symchain/transient.hpp"
#include "test_support.hpp"

using namespace symchain;

namespace {

SimilarityWeights constant_beta(const StateSpace& space, double value = 1.0) {
    return SimilarityWeights{space, std::vector<double>(static_cast<std::size_t>(space.size()), value)};
}

// Every harmonic vector of these chains is a + b * x; pick one at random.
SimilarityWeights harmonic_beta(const testsupport::SymmetricAbsorbingChain& chain, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> a_dist(0.2, 3.0);
    std::uniform_real_distribution<double> b_dist(0.0, 2.0);
    const double a = a_dist(rng);
    const double b = b_dist(rng);
    SimilarityWeights beta;
    beta.space = chain.q.space;
    beta.beta.resize(chain.weights.size());
    for (std::size_t i = 0; i < chain.weights.size(); ++i) beta.beta[i] = a + b * chain.weights[i];
    return beta;
}

}  // namespace

TEST_CASE("a constant beta is the identity transform") {
    const GeneratorMatrix q = testsupport::example1_chain(1.0, 2.0, 0.5);
    const SimilarityResult result = apply_similarity(q, constant_beta(q.space, 1.0));
    CHECK(result.transformed.rates == q.rates);
    CHECK(result.adjusted_rows.empty());

    // Non-unit constants cancel in the ratios just the same.
    const GeneratorMatrix bd = truncate_bdjump(BDJumpModel{1.0, 1.0, 0.2}, StateSpace::lattice_window(-4, 4));
    const SimilarityResult scaled = apply_similarity(bd, constant_beta(bd.space, 1.0 + 0.7));
    CHECK(scaled.transformed.rates == bd.rates);
}

TEST_CASE("non-harmonic beta is rejected, not repaired") {
    const GeneratorMatrix q = testsupport::ehrenfest_chain(4, 1.0);
    SimilarityWeights beta{q.space, {1.0, 2.0, 1.0, 2.0, 1.0}};
    try {
        apply_similarity(q, beta);
        FAIL("expected NonHarmonic");
    } catch (const ValidationError& e) {
        CHECK(e.code() == "NonHarmonic");
    }
}

TEST_CASE("the transformed transition function is the scaled original") {
    std::mt19937_64 rng(53);
    const auto chain = testsupport::random_symmetric_absorbing(5, rng);
    const SimilarityWeights beta = harmonic_beta(chain, rng);
    const SimilarityResult result = apply_similarity(chain.q, beta);

    const TimeGrid grid(2.0, 20);
    const auto p = transition_matrices(chain.q, grid, 1e-12);
    const auto p_tilde = transition_matrices(result.transformed, grid, 1e-12);
    for (int j = 0; j < grid.size(); ++j) {
        for (int k = 0; k < chain.q.size(); ++k) {
            for (int n = 0; n < chain.q.size(); ++n) {
                const double expected = beta.at_index(n) / beta.at_index(k) * p.at(j)(k, n);
                CHECK(std::abs(p_tilde.at(j)(k, n) - expected) <= 1e-8);
            }
        }
    }
}

TEST_CASE("similarity is an involution and keeps the diagonal") {
    std::mt19937_64 rng(59);
    const auto chain = testsupport::random_symmetric_absorbing(6, rng);
    const SimilarityWeights beta = harmonic_beta(chain, rng);
    const SimilarityResult forward = apply_similarity(chain.q, beta);

    CHECK((forward.transformed.rates.diagonal() - chain.q.rates.diagonal()).cwiseAbs().maxCoeff() == 0.0);

    SimilarityWeights inverse = beta;
    for (auto& b : inverse.beta) b = 1.0 / b;
    const SimilarityResult back = apply_similarity(forward.transformed, inverse);
    CHECK((back.transformed.rates - chain.q.rates).cwiseAbs().maxCoeff() <=
          1e-14 * chain.q.rates.cwiseAbs().maxCoeff());
}

TEST_CASE("similar chains keep their central symmetry") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const auto chain = testsupport::random_symmetric_absorbing(4 + trial % 7, rng);
        const auto det = detect_symmetry(chain.q);
        REQUIRE(det.symmetric());
        const SimilarityWeights beta = harmonic_beta(chain, rng);

        const Theorem5Result closure = verify_theorem5(chain.q, *det.certificate, beta, 1e-9);
        CHECK(closure.check.pass);

        // Detection on the transformed chain recovers weights proportional
        // to the predicted ones.
        const auto det_tilde = detect_symmetry(closure.transformed, 1e-8);
        REQUIRE(det_tilde.symmetric());
        for (std::size_t i = 0; i < closure.certificate.weights.size(); ++i) {
            CHECK(det_tilde.certificate->weights[i] ==
                  doctest::Approx(closure.certificate.weights[i]).epsilon(1e-8));
        }
    }
}

TEST_CASE("beta = 1 reproduces the original certificate") {
    const GeneratorMatrix q = testsupport::example1_chain(1.0, 2.0, 0.5);
    const auto det = detect_symmetry(q);
    REQUIRE(det.symmetric());
    const SymmetryCertificate tilde = transformed_certificate(*det.certificate, constant_beta(q.space));
    for (std::size_t i = 0; i < tilde.weights.size(); ++i) {
        CHECK(tilde.weights[i] == doctest::Approx(det.certificate->weights[i]).epsilon(1e-15));
    }
}

TEST_CASE("bilateral family: harmonic form of the similar-chain weights") {
    // The recurrence birth*b_{n+1} + death*b_{n-1} = (birth+death)*b_n is
    // solved by (death/birth)^n; at equal rates the family degenerates to
    // a constant and leaves the rates unchanged.
    const Example2Family family = example2_family(1.0, 1.0, 0.7);
    for (int n = -5; n <= 5; ++n) {
        CHECK(family.beta(n) == 1.7);
        CHECK(family.birth_rate(n) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(family.death_rate(n) == doctest::Approx(1.0).epsilon(1e-15));
    }

    const Example2Family none = example2_family(1.3, 0.6, 0.0);
    for (int n = -4; n <= 4; ++n) CHECK(none.beta(n) == 1.0);

    const double birth = 1.3, death = 0.6, eta = 0.4;
    const Example2Family skew = example2_family(birth, death, eta);
    for (int n = -6; n <= 6; ++n) {
        const double residual =
            birth * skew.beta(n + 1) + death * skew.beta(n - 1) - (birth + death) * skew.beta(n);
        CHECK(std::abs(residual) <= 1e-12);

        // The same recurrence with the ratio flipped fails off equal rates;
        // this is what forces the (death/birth)^n reading.
        const auto flipped = [&](int m) { return 1.0 + eta * std::pow(birth / death, m); };
        const double wrong = birth * flipped(n + 1) + death * flipped(n - 1) - (birth + death) * flipped(n);
        CHECK(std::abs(wrong) > 1e-3);
    }
}

TEST_CASE("bilateral family realizes on a window with exempt edges") {
    const double birth = 1.2, death = 0.9, eta = 0.5;
    const StateSpace window = StateSpace::lattice_window(-6, 6);
    const GeneratorMatrix q = truncate_bdjump(BDJumpModel{birth, death, 0.0}, window);
    const SimilarityWeights beta = example2_family(birth, death, eta).realize(window);

    // Interior rows satisfy the harmonic condition tightly.
    for (int i = 1; i < q.size() - 1; ++i) {
        double residual = 0.0;
        for (int j = 0; j < q.size(); ++j) residual += q.rates(i, j) * beta.at_index(j);
        CHECK(std::abs(residual) <= 1e-12);
    }

    // Strict application trips on the boundary rows; the window policy
    // re-closes and reports exactly those rows.
    CHECK_THROWS_AS(apply_similarity(q, beta, BoundaryPolicy::Strict), ValidationError);
    const SimilarityResult result = apply_similarity(q, beta, BoundaryPolicy::ExemptWindowEdges);
    REQUIRE(result.adjusted_rows.size() == 2);
    CHECK(result.adjusted_rows[0] == -6);
    CHECK(result.adjusted_rows[1] == 6);

    // Interior rates follow the family's rate maps.
    for (int n = -5; n <= 4; ++n) {
        CHECK(result.transformed.rate(n, n + 1) ==
              doctest::Approx(example2_family(birth, death, eta).birth_rate(n)).epsilon(1e-12));
    }
    for (int n = -4; n <= 5; ++n) {
        CHECK(result.transformed.rate(n, n - 1) ==
              doctest::Approx(example2_family(birth, death, eta).death_rate(n)).epsilon(1e-12));
    }
}

TEST_CASE("equal-rate window family keeps its symmetry end to end") {
    const StateSpace window = StateSpace::lattice_window(-5, 5);
    const GeneratorMatrix q = truncate_bdjump(BDJumpModel{1.0, 1.0, 0.0}, window);
    const auto det = detect_symmetry(q);
    REQUIRE(det.symmetric());
    const SimilarityWeights beta = example2_family(1.0, 1.0, 0.9).realize(window);
    const Theorem5Result closure = verify_theorem5(q, *det.certificate, beta, 1e-10);
    CHECK(closure.check.pass);
    const auto rates = closure.transformed.rates;
    CHECK((rates - q.rates).cwiseAbs().maxCoeff() <= 1e-14);  // constant beta, unchanged rates
}
