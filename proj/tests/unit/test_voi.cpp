#include <doctest.h>

#include "generators.hpp"
#include "offswitch/error.hpp"
#include "offswitch/game.hpp"
#include "offswitch/voi.hpp"
#include "oracles.hpp"

using namespace offswitch;

namespace {

DecisionProblem booking(double prefer = 0.9, double good = 45, double bad = -5) {
    return DecisionProblem({"prefer", "disprefer"}, {prefer, 1 - prefer},
                           {{"book", {good, bad}}, {"nothing", {0, 0}}});
}

} // namespace

TEST_CASE("value_now") {
    const auto game = reduce_to_two_state(UtilityDistribution::uniform(-40, 60), 0.0);
    CHECK(value_now(game.problem, game.problem.prior(), DecisionRule::expected_utility()) ==
          doctest::Approx(mean(UtilityDistribution::uniform(-40, 60))));

    const DecisionProblem single({"w0", "w1"}, {0.25, 0.75}, {{"a", {0, 100}}});
    CHECK(value_now(single, single.prior(), DecisionRule::risk_weighted(RiskFunction::power(2))) ==
          doctest::Approx(0 + 0.75 * 0.75 * 100));

    const DecisionProblem grid({"w0", "w1"}, {0.5, 0.5}, {{"a", {3, -1}}, {"b", {1, 9}}});
    CHECK(value_now(grid, Belief{1.0, 0.0}, DecisionRule::expected_utility()) == 3.0);

    DecisionRule missing{RuleKind::GammaMaximin, std::nullopt, std::nullopt};
    CHECK_THROWS_AS(value_now(grid, grid.prior(), missing), MissingRuleData);
}

TEST_CASE("value_of_learning_eu") {
    SUBCASE("confident booking with a garbled signal: learning is worth nothing") {
        const auto report = value_of_learning_eu(booking(), Belief{0.9, 0.1}, SignalChannel::binary_flip(0.02));
        CHECK(report.value_now == doctest::Approx(40).epsilon(1e-12));
        CHECK(report.value_learning == doctest::Approx(40).epsilon(1e-12));
        CHECK(report.voi == doctest::Approx(0).epsilon(1e-12));
        REQUIRE(report.per_signal.size() == 2);
        CHECK(report.per_signal[0].act == 0);
        CHECK(report.per_signal[1].act == 0);
        CHECK(report.per_signal[0].marginal + report.per_signal[1].marginal == doctest::Approx(1));
    }
    SUBCASE("perfect information") {
        const DecisionProblem p({"w0", "w1", "w2"}, {0.2, 0.3, 0.5},
                                {{"a0", {5, 0, 1}}, {"a1", {0, 4, 2}}, {"a2", {1, 1, 7}}});
        const std::vector<std::size_t> cells{0, 1, 2};
        const auto report = value_of_learning_eu(p, p.prior(), SignalChannel::partition({"x", "y", "z"}, cells));
        CHECK(report.value_learning == doctest::Approx(0.2 * 5 + 0.3 * 4 + 0.5 * 7));
    }
    SUBCASE("uninformative channel") {
        RandomStream s(8);
        const auto p = gen::problem(s, 3, 3);
        const auto report = value_of_learning_eu(p, p.prior(), gen::uninformative(s, 3, 2));
        CHECK(report.voi == doctest::Approx(0).epsilon(1e-12));
    }
    SUBCASE("zero-marginal signals are skipped") {
        const SignalChannel ch({"seen", "never"}, {{1.0, 0.0}, {1.0, 0.0}});
        const auto report = value_of_learning_eu(booking(), Belief{0.9, 0.1}, ch);
        CHECK(report.per_signal.size() == 1);
        CHECK(report.voi == doctest::Approx(0));
    }
    CHECK_THROWS_AS(value_of_learning_eu(booking(), Belief{1.0}, SignalChannel::binary_flip(0.1)), DimensionMismatch);
}

TEST_CASE("value_of_learning_rule reduces to EU") {
    RandomStream s(31);
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = s.between(1, 4);
        const auto p = gen::problem(s, n, s.between(1, 4));
        const auto ch = gen::channel(s, n, s.between(1, 3));
        const auto eu = value_of_learning_eu(p, p.prior(), ch);
        const auto via_rule = value_of_learning_rule(p, p.prior(), ch, DecisionRule::expected_utility());
        CHECK(via_rule == eu);
        const auto reu = value_of_learning_rule(p, p.prior(), ch, DecisionRule::risk_weighted(RiskFunction::identity()));
        CHECK(reu.value_learning == doctest::Approx(eu.value_learning).epsilon(1e-10));
        CHECK(reu.value_now == doctest::Approx(eu.value_now).epsilon(1e-10));
        const auto gm = value_of_learning_rule(p, p.prior(), ch, DecisionRule::gamma_maximin(CredalSet({p.prior()})));
        CHECK(gm.value_learning == doctest::Approx(eu.value_learning).epsilon(1e-10));
    }
}

TEST_CASE("value_of_learning_rule agrees with the brute-force oracles") {
    RandomStream s(47);
    const auto r = RiskFunction::power(2);
    int reu_negative = 0, gm_negative = 0;
    for (int i = 0; i < 3000; ++i) {
        const std::size_t n = s.between(2, 4);
        const auto p = gen::problem(s, n, s.between(2, 4));
        const auto ch = gen::channel(s, n, s.between(2, 3));

        const auto reu = value_of_learning_rule(p, p.prior(), ch, DecisionRule::risk_weighted(r));
        REQUIRE(reu.voi == doctest::Approx(oracle::reu_voi(p, p.prior(), ch, r)).epsilon(1e-10));
        reu_negative += reu.voi < -1e-6;

        const std::vector<Belief> members{s.simplex(n), s.simplex(n)};
        const auto gm = value_of_learning_rule(p, p.prior(), ch, DecisionRule::gamma_maximin(CredalSet(members)));
        REQUIRE(gm.voi == doctest::Approx(oracle::gamma_voi(p, members, ch)).epsilon(1e-10));
        gm_negative += gm.voi < -1e-6;
    }
    // Both rules can refuse free information.
    CHECK(reu_negative > 0);
    CHECK(gm_negative > 0);
}

TEST_CASE("uninformative channels give zero value under every rule") {
    RandomStream s(53);
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = s.between(1, 4);
        const auto p = gen::problem(s, n, s.between(1, 4));
        const auto ch = gen::uninformative(s, n, s.between(1, 3));
        CHECK(value_of_learning_rule(p, p.prior(), ch, DecisionRule::risk_weighted(RiskFunction::power(3))).voi ==
              doctest::Approx(0).epsilon(1e-10));
        const CredalSet credal({s.simplex(n), s.simplex(n)});
        CHECK(value_of_learning_rule(p, p.prior(), ch, DecisionRule::gamma_maximin(credal)).voi ==
              doctest::Approx(0).epsilon(1e-10));
        const auto faulty = Updater::make_faulty(0.5, Misupdate::complement());
        CHECK(value_of_learning_faulty(p, p.prior(), ch, faulty).voi == doctest::Approx(0).epsilon(1e-10));
    }
}

TEST_CASE("value_of_learning_faulty") {
    RandomStream s(61);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t n = s.between(1, 4);
        const auto p = gen::problem(s, n, s.between(1, 4));
        const auto ch = gen::channel(s, n, s.between(1, 3));
        const auto eu = value_of_learning_eu(p, p.prior(), ch);

        const auto never = value_of_learning_faulty(p, p.prior(), ch, Updater::make_faulty(0.0, Misupdate::complement()));
        REQUIRE(never.value_learning == doctest::Approx(eu.value_learning).epsilon(1e-12));

        const auto always_stuck =
            value_of_learning_faulty(p, p.prior(), ch, Updater::make_faulty(1.0, Misupdate::stay_at_prior()));
        REQUIRE(always_stuck.value_learning == doctest::Approx(always_stuck.value_now).epsilon(1e-12));

        // Stay-at-prior interpolates linearly between learning and choosing now.
        double previous = eu.value_learning + 1e-12;
        for (double q = 0.0; q <= 1.0; q += 0.125) {
            const auto r = value_of_learning_faulty(p, p.prior(), ch, Updater::make_faulty(q, Misupdate::stay_at_prior()));
            REQUIRE(r.voi >= -1e-12);
            REQUIRE(r.value_learning <= previous + 1e-12);
            REQUIRE(r.value_learning ==
                    doctest::Approx((1 - q) * eu.value_learning + q * eu.value_now).epsilon(1e-10));
            previous = r.value_learning;
        }

        const auto comp = value_of_learning_faulty(p, p.prior(), ch, Updater::make_faulty(0.5, Misupdate::complement()));
        REQUIRE(comp.voi == doctest::Approx(oracle::complement_voi(p, p.prior(), ch, 0.5)).epsilon(1e-10));
    }
}

TEST_CASE("faulty updater with a custom posterior table") {
    // The misupdated agent always believes "disprefer" and never books.
    const auto ch = SignalChannel::binary_flip(0.0);
    const auto updater = Updater::make_faulty(0.5, Misupdate::custom({{0.0, 1.0}, {0.0, 1.0}}));
    const auto report = value_of_learning_faulty(booking(0.6, 30, -20), Belief{0.6, 0.4}, ch, updater);
    // Correct: 0.6 * 30 = 18. Misupdate books never: 0. Mixture: 9. Choosing now: 10.
    CHECK(report.value_learning == doctest::Approx(9));
    CHECK(report.value_now == doctest::Approx(10));
    CHECK(report.voi == doctest::Approx(-1));
    CHECK(report.per_signal[0].misupdate_act == std::optional<std::size_t>(1));

    const auto short_table = Updater::make_faulty(0.5, Misupdate::custom({{0.0, 1.0}}));
    CHECK_THROWS_AS(value_of_learning_faulty(booking(), Belief{0.9, 0.1}, SignalChannel::binary_flip(0.1), short_table),
                    MissingRuleData);
}

TEST_CASE("property: Good's inequality") {
    RandomStream s(71);
    for (int i = 0; i < 10000; ++i) {
        const std::size_t n = s.between(1, 5);
        const auto p = gen::problem(s, n, s.between(1, 5));
        const auto ch = s.index(10) == 0 ? gen::uninformative(s, n, s.between(1, 4)) : gen::channel(s, n, s.between(1, 4));
        REQUIRE(value_of_learning_eu(p, p.prior(), ch).voi >= -1e-12);
    }
}
