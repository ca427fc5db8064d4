#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "privsketch/metrics.hpp"
#include "privsketch/rng.hpp"

using namespace privsketch;

namespace {

FrequencyTable table(std::vector<ItemId> items, std::vector<double> values) {
    FrequencyTable t;
    t.items = std::move(items);
    t.values = std::move(values);
    return t;
}

} // namespace

TEST_CASE("mse of a table against itself is zero") {
    const FrequencyTable t = table({0, 1, 2}, {0.5, 0.3, 0.2});
    CHECK(mse(t, t) == doctest::Approx(0.0));
}

TEST_CASE("mse averages squared gaps over the domain") {
    const FrequencyTable est = table({0, 1}, {0.6, 0.2});
    const FrequencyTable truth = table({0, 1}, {0.5, 0.3});
    // (0.01 + 0.01) / 2
    CHECK(mse(est, truth) == doctest::Approx(0.01));

    const FrequencyTable off = table({0, 1, 2, 3}, {0.3, 0.3, 0.3, 0.3});
    const FrequencyTable base = table({0, 1, 2, 3}, {0.0, 0.0, 0.0, 0.0});
    CHECK(mse(off, base) == doctest::Approx(0.09));
}

TEST_CASE("mse rejects mismatched domains") {
    const FrequencyTable a = table({0, 1}, {0.5, 0.5});
    const FrequencyTable b = table({0, 2}, {0.5, 0.5});
    const FrequencyTable c = table({1, 0}, {0.5, 0.5});
    const FrequencyTable d = table({0}, {0.5});
    FrequencyTable empty;
    CHECK_THROWS_AS(mse(a, b), std::invalid_argument);
    CHECK_THROWS_AS(mse(a, c), std::invalid_argument);
    CHECK_THROWS_AS(mse(a, d), std::invalid_argument);
    CHECK_THROWS_AS(mse(empty, empty), std::invalid_argument);
}

TEST_CASE("topk sorts by value with ties broken by item id") {
    const FrequencyTable t = table({9, 3, 7, 1}, {0.1, 0.5, 0.5, 0.2});
    const auto top = topk(t, 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0].item == 3); // 0.5, lower id first
    CHECK(top[1].item == 7); // 0.5
    CHECK(top[2].item == 1); // 0.2
}

TEST_CASE("topk truncates to the table size") {
    const FrequencyTable t = table({4, 2}, {0.1, 0.9});
    const auto top = topk(t, 10);
    REQUIRE(top.size() == 2);
    CHECK(top[0].item == 2);
    CHECK(top[1].item == 4);
}

TEST_CASE("var_topk averages squared count errors over shared items") {
    // est top-1 is {5}, truth top-1 is {5}; counts differ by 5 users
    const FrequencyTable est = table({5, 6}, {0.5, 0.1});
    const FrequencyTable truth = table({5, 6}, {1.0, 0.2});
    CHECK(var_topk(est, truth, 10, 1) == doctest::Approx(25.0));
}

TEST_CASE("var_topk scales like the square of the population") {
    const FrequencyTable est = table({5, 6}, {0.5, 0.1});
    const FrequencyTable truth = table({5, 6}, {1.0, 0.2});
    const double v1 = var_topk(est, truth, 10, 1);
    const double v2 = var_topk(est, truth, 20, 1);
    CHECK(v2 == doctest::Approx(4.0 * v1));
}

TEST_CASE("var_topk is NaN when the lists share nothing") {
    const FrequencyTable est = table({0, 1, 2, 3}, {0.9, 0.8, 0.0, 0.0});
    const FrequencyTable truth = table({0, 1, 2, 3}, {0.0, 0.0, 0.9, 0.8});
    CHECK(std::isnan(var_topk(est, truth, 100, 2)));
}

TEST_CASE("var_topk on identical tables is zero") {
    const FrequencyTable t = table({0, 1, 2}, {0.7, 0.2, 0.1});
    CHECK(var_topk(t, t, 1000, 2) == doctest::Approx(0.0));
}

TEST_CASE("ncr is one on agreement and zero on disjoint lists") {
    const FrequencyTable t = table({0, 1, 2, 3}, {0.6, 0.3, 0.08, 0.02});
    CHECK(ncr(t, t, 2) == doctest::Approx(1.0));
    const FrequencyTable est = table({0, 1, 2, 3}, {0.0, 0.0, 0.9, 0.8});
    CHECK(ncr(est, t, 2) == doctest::Approx(0.0));
}

TEST_CASE("ncr credits a partially recovered list by rank quality") {
    // true top-2: a (quality 2), b (quality 1); estimate recovers only b,
    // so the score is 1 / (2 + 1)
    const FrequencyTable truth = table({10, 11, 12}, {0.9, 0.5, 0.1});
    const FrequencyTable est = table({10, 11, 12}, {0.0, 0.9, 0.5});
    CHECK(ncr(est, truth, 2) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ncr order within the estimated list does not matter") {
    const FrequencyTable truth = table({0, 1, 2, 3}, {0.9, 0.6, 0.3, 0.1});
    const FrequencyTable swapped = table({0, 1, 2, 3}, {0.6, 0.9, 0.3, 0.1});
    CHECK(ncr(swapped, truth, 2) == doctest::Approx(1.0));
}

TEST_CASE("ncr validates k") {
    const FrequencyTable t = table({0, 1}, {0.5, 0.5});
    CHECK_THROWS_AS(ncr(t, t, 0), std::invalid_argument);
}

TEST_CASE("ncr stays inside the unit interval on random tables") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ItemId> items;
        std::vector<double> est_vals;
        std::vector<double> true_vals;
        for (ItemId x = 0; x < 12; ++x) {
            items.push_back(x);
            est_vals.push_back(rng.uniform_double());
            true_vals.push_back(rng.uniform_double());
        }
        const FrequencyTable est = table(items, est_vals);
        const FrequencyTable truth = table(items, true_vals);
        const double score = ncr(est, truth, 5);
        CHECK(score >= 0.0);
        CHECK(score <= 1.0);
    }
}
