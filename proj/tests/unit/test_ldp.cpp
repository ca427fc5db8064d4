#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "privsketch/ldp.hpp"

using namespace privsketch;

TEST_CASE("flip probability matches the closed form") {
    CHECK(flip_probability(3.0) == doctest::Approx(0.047426).epsilon(1e-4));
    CHECK(flip_probability(3.0 / 512.0) == doctest::Approx(0.498535).epsilon(1e-4));
    CHECK(flip_probability(1.0) == doctest::Approx(1.0 / (std::exp(1.0) + 1.0)));
    // likelihood ratio between truthful and flipped report is e^eps
    for (double eps : {0.4, 1.0, 3.0}) {
        const double q = flip_probability(eps);
        CHECK((1.0 - q) / q == doctest::Approx(std::exp(eps)).epsilon(1e-12));
    }
}

TEST_CASE("flip probability is decreasing in the budget") {
    CHECK(flip_probability(0.5) > flip_probability(3.0));
    CHECK(flip_probability(3.0) > flip_probability(10.0));
    CHECK(flip_probability(1000.0) == 0.0); // saturates, stays finite
}

TEST_CASE("flip probability rejects non-positive budgets") {
    CHECK_THROWS_AS(flip_probability(0.0), std::invalid_argument);
    CHECK_THROWS_AS(flip_probability(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(flip_probability(std::nan("")), std::invalid_argument);
}

TEST_CASE("privacy params validation") {
    PrivacyParams ok{3.0, 2, 8};
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.per_counter_budget(true) == doctest::Approx(3.0));
    CHECK(ok.per_counter_budget(false) == doctest::Approx(3.0 / 16.0));
    CHECK_THROWS_AS((PrivacyParams{0.0, 2, 8}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((PrivacyParams{3.0, 0, 8}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((PrivacyParams{3.0, 2, 1}.validate()), std::invalid_argument);
}

TEST_CASE("noiseless randomized response is the identity on signs") {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        CHECK(rr_perturb_bit(1, 0.0, rng) == 1);
        CHECK(rr_perturb_bit(0, 0.0, rng) == -1);
    }
}

TEST_CASE("randomized response validates inputs") {
    Rng rng(2);
    CHECK_THROWS_AS(rr_perturb_bit(2, 0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(rr_perturb_bit(-1, 0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(rr_perturb_bit(1, 0.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(rr_perturb_bit(1, -0.1, rng), std::invalid_argument);
    CHECK_NOTHROW(rr_perturb_bit(1, 0.49, rng));
}

TEST_CASE("randomized response flips at the requested rate") {
    Rng rng(42);
    const double q = 0.25;
    const int draws = 100000;
    long long sum = 0;
    for (int i = 0; i < draws; ++i) {
        sum += rr_perturb_bit(1, q, rng);
    }
    // E[sign] = 1 - 2q = 0.5, sd of the mean = sqrt(1-0.25)/sqrt(draws)
    const double mean = static_cast<double>(sum) / draws;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.025));
}

TEST_CASE("local hashing parameters follow the budget") {
    const OlhParams p = OlhParams::from_epsilon(std::log(3.0));
    CHECK(p.g == 4);
    CHECK(p.keep_prob == doctest::Approx(0.5));

    const OlhParams q = OlhParams::from_epsilon(3.0);
    CHECK(q.g == 21);
    const double e3 = std::exp(3.0);
    CHECK(q.keep_prob == doctest::Approx(e3 / (e3 + 20.0)));

    // tiny budgets clamp the range to 2 buckets
    const OlhParams r = OlhParams::from_epsilon(0.01);
    CHECK(r.g == 2);
    CHECK(r.keep_prob == doctest::Approx(std::exp(0.01) / (std::exp(0.01) + 1.0)));

    CHECK_THROWS_AS(OlhParams::from_epsilon(0.0), std::invalid_argument);
}

TEST_CASE("buckets are deterministic and in range") {
    for (std::uint64_t seed : {1ULL, 99ULL}) {
        for (ItemId x = 0; x < 200; ++x) {
            const std::uint32_t b = olh_bucket(x, seed, 8);
            CHECK(b < 8);
            CHECK(b == olh_bucket(x, seed, 8));
        }
    }
}

TEST_CASE("perturbation keeps the true bucket when keep_prob is 1") {
    OlhParams p{8, 1.0};
    Rng rng(5);
    for (ItemId x = 0; x < 100; ++x) {
        const OlhReport r = olh_perturb(x, p, 12345 + x, rng);
        CHECK(r.user_seed == 12345 + x);
        CHECK(r.bucket == olh_bucket(x, r.user_seed, p.g));
    }
}

TEST_CASE("perturbation keeps the bucket at the configured rate") {
    const OlhParams p = OlhParams::from_epsilon(3.0);
    Rng rng(777);
    const int draws = 20000;
    int kept = 0;
    for (int i = 0; i < draws; ++i) {
        const std::uint64_t seed = rng.next_u64();
        const OlhReport r = olh_perturb(7, p, seed, rng);
        CHECK(r.bucket < p.g);
        if (r.bucket == olh_bucket(7, seed, p.g)) ++kept;
    }
    // sd of the kept fraction ~ 0.0035; allow 4 sigma
    CHECK(static_cast<double>(kept) / draws == doctest::Approx(p.keep_prob).epsilon(0.02));
}

TEST_CASE("estimate recovers an item everyone holds, no noise") {
    OlhParams p{16, 1.0};
    Rng rng(8);
    std::vector<OlhReport> reports;
    const int n = 500;
    for (int i = 0; i < n; ++i) {
        reports.push_back(olh_perturb(3, p, rng.next_u64(), rng));
    }
    CHECK(olh_estimate(reports, 3, p) == doctest::Approx(static_cast<double>(n)));
}

TEST_CASE("estimate is near zero for an unseen item") {
    const OlhParams p = OlhParams::from_epsilon(3.0);
    Rng rng(314);
    std::vector<OlhReport> reports;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        reports.push_back(olh_perturb(1, p, rng.next_u64(), rng));
    }
    // support estimate for an absent item: sd ~ 105 at this n, allow 4+ sigma
    CHECK(std::abs(olh_estimate(reports, 2, p)) < 500.0);
}

TEST_CASE("estimate is near n/2 when half the users hold the item") {
    const OlhParams p = OlhParams::from_epsilon(3.0);
    Rng rng(2718);
    std::vector<OlhReport> reports;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        const ItemId held = (i % 2 == 0) ? 5 : 6;
        reports.push_back(olh_perturb(held, p, rng.next_u64(), rng));
    }
    CHECK(olh_estimate(reports, 5, p) == doctest::Approx(n / 2.0).epsilon(0.05));
}

TEST_CASE("estimate rejects an empty report set") {
    const OlhParams p = OlhParams::from_epsilon(3.0);
    CHECK_THROWS_AS(olh_estimate({}, 1, p), std::invalid_argument);
}
