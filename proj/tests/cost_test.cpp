#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <vector>

#include "siting/cost.hpp"
#include "siting/rng.hpp"

using namespace siting;

namespace {

DemandPoint demand_at(GeoPoint loc, RingZone zone, int sec_of_day, double weight = 1.0) {
    DemandPoint p;
    p.location = loc;
    p.weight = weight;
    p.zone = zone;
    p.time = sec_of_day;  // epoch day, so seconds_of_day(time) == sec_of_day
    return p;
}

CandidateStation station(int id, GeoPoint loc) { return CandidateStation{id, loc, 0}; }

}  // namespace

TEST_CASE("time windows are half-open") {
    TimeWindow w{7 * 3600, 9 * 3600};
    CHECK(w.contains(7 * 3600));
    CHECK(w.contains(8 * 3600 + 59 * 60 + 59));
    CHECK_FALSE(w.contains(9 * 3600));
    CHECK_FALSE(w.contains(7 * 3600 - 1));
}

TEST_CASE("sigma by zone and time of day") {
    CongestionPolicy policy;
    const GeoPoint loc{116.40, 39.90};
    auto sigma = [&](RingZone z, int sec) { return sigma_for(demand_at(loc, z, sec), policy); };

    const int morning = 7 * 3600 + 1800;
    const int evening = 18 * 3600 + 1800;
    const int noon = 12 * 3600;

    CHECK(sigma(RingZone::Inner3, morning) == 1.5);
    CHECK(sigma(RingZone::Inner3, evening) == 1.5);
    CHECK(sigma(RingZone::Ring3To4, morning) == 1.2);
    CHECK(sigma(RingZone::Ring3To4, evening) == 1.2);
    CHECK(sigma(RingZone::Outer, morning) == 1.0);
    CHECK(sigma(RingZone::Inner3, noon) == 1.0);
    CHECK(sigma(RingZone::Ring3To4, noon) == 1.0);

    // Window edges.
    CHECK(sigma(RingZone::Inner3, 7 * 3600) == 1.5);
    CHECK(sigma(RingZone::Inner3, 9 * 3600 - 1) == 1.5);
    CHECK(sigma(RingZone::Inner3, 9 * 3600) == 1.0);
    CHECK(sigma(RingZone::Inner3, 7 * 3600 - 1) == 1.0);
    CHECK(sigma(RingZone::Inner3, 20 * 3600) == 1.0);

    // The multiplier keys on the stored zone, not the location.
    CHECK(sigma_for(demand_at({0.0, 0.0}, RingZone::Inner3, morning), policy) == 1.5);
}

TEST_CASE("policy validity") {
    CongestionPolicy policy;
    CHECK(policy.valid());
    CHECK(policy.sigma_inner3 == 1.5);
    CHECK(policy.sigma_ring34 == 1.2);
    CHECK(policy.sigma_other == 1.0);
    REQUIRE(policy.windows.size() == 2);
    CHECK(policy.windows[0].start_sec == 7 * 3600);
    CHECK(policy.windows[1].end_sec == 20 * 3600);

    policy.sigma_ring34 = 0.9;  // a discount is not a congestion penalty
    CHECK_FALSE(policy.valid());
}

TEST_CASE("a congested entry is the plain distance times sigma") {
    // Power-of-two scale makes the arithmetic exact: 1/32 deg * 128 km/deg = 4 km.
    DegreeScale scale{128.0, 64.0};
    std::vector<DemandPoint> demand = {
        demand_at({116.40, 39.90}, RingZone::Inner3, 7 * 3600 + 1800)};
    std::vector<CandidateStation> cands = {station(0, {116.40, 39.90 + 1.0 / 32.0})};

    auto plain = build_cost_matrix(demand, cands, std::nullopt, scale);
    REQUIRE(plain.rows == 1);
    REQUIRE(plain.cols == 1);
    CHECK(plain.at(0, 0) == 4.0);

    auto rush = build_cost_matrix(demand, cands, CongestionPolicy{}, scale);
    CHECK(rush.at(0, 0) == 6.0);
}

TEST_CASE("matrix layout and weights") {
    std::vector<DemandPoint> demand = {
        demand_at({116.30, 39.85}, RingZone::Outer, 0, 2.5),
        demand_at({116.45, 39.95}, RingZone::Outer, 0, 3.0),
    };
    std::vector<CandidateStation> cands = {station(0, {116.30, 39.85}),
                                           station(1, {116.45, 39.95}),
                                           station(2, {116.40, 39.90})};
    auto m = build_cost_matrix(demand, cands, std::nullopt, DegreeScale{});
    CHECK(m.rows == 2);
    CHECK(m.cols == 3);
    CHECK(m.d.size() == 6);
    CHECK(m.h == std::vector<double>{2.5, 3.0});

    CHECK(m.at(0, 0) == 0.0);
    CHECK(m.at(1, 1) == 0.0);
    CHECK(m.at(0, 1) == manhattan_km({116.30, 39.85}, {116.45, 39.95}, DegreeScale{}));
    CHECK(m.at(1, 2) == manhattan_km({116.45, 39.95}, {116.40, 39.90}, DegreeScale{}));
    CHECK(m.at(0, 1) == m.d[1]);
    CHECK(m.at(1, 0) == m.d[3]);
}

TEST_CASE("empty inputs are rejected") {
    std::vector<DemandPoint> demand = {demand_at({116.40, 39.90}, RingZone::Inner3, 0)};
    std::vector<CandidateStation> cands = {station(0, {116.40, 39.90})};
    CHECK_THROWS_WITH_AS(build_cost_matrix({}, cands, std::nullopt, DegreeScale{}),
                         "empty instance", std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_cost_matrix(demand, {}, std::nullopt, DegreeScale{}),
                         "empty instance", std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_cost_matrix({}, {}, std::nullopt, DegreeScale{}),
                         "empty instance", std::invalid_argument);
}

TEST_CASE("a neutral policy reproduces the plain matrix exactly") {
    Rng rng(99);
    std::vector<DemandPoint> demand;
    for (int i = 0; i < 25; ++i) {
        demand.push_back(demand_at({116.2 + 0.35 * rng.uniform01(), 39.75 + 0.28 * rng.uniform01()},
                                   static_cast<RingZone>(rng.uniform_int(3)),
                                   static_cast<int>(rng.uniform_int(86400))));
    }
    std::vector<CandidateStation> cands;
    for (int j = 0; j < 7; ++j) {
        cands.push_back(station(j, {116.2 + 0.35 * rng.uniform01(), 39.75 + 0.28 * rng.uniform01()}));
    }

    CongestionPolicy neutral;
    neutral.sigma_inner3 = 1.0;
    neutral.sigma_ring34 = 1.0;
    neutral.sigma_other = 1.0;

    auto plain = build_cost_matrix(demand, cands, std::nullopt, DegreeScale{});
    auto neutered = build_cost_matrix(demand, cands, neutral, DegreeScale{});
    CHECK(plain.d == neutered.d);
    CHECK(plain.h == neutered.h);
}

TEST_CASE("congestion rescales rows without reordering them") {
    Rng rng(424);
    for (int round = 0; round < 6; ++round) {
        std::vector<DemandPoint> demand;
        for (int i = 0; i < 30; ++i) {
            demand.push_back(
                demand_at({116.2 + 0.35 * rng.uniform01(), 39.75 + 0.28 * rng.uniform01()},
                          static_cast<RingZone>(rng.uniform_int(3)),
                          static_cast<int>(rng.uniform_int(86400))));
        }
        std::vector<CandidateStation> cands;
        for (int j = 0; j < 9; ++j) {
            cands.push_back(
                station(j, {116.2 + 0.35 * rng.uniform01(), 39.75 + 0.28 * rng.uniform01()}));
        }

        CongestionPolicy policy;
        auto plain = build_cost_matrix(demand, cands, std::nullopt, DegreeScale{});
        auto rush = build_cost_matrix(demand, cands, policy, DegreeScale{});

        for (std::size_t i = 0; i < plain.rows; ++i) {
            const double sigma = sigma_for(demand[i], policy);
            std::size_t plain_arg = 0, rush_arg = 0;
            for (std::size_t j = 0; j < plain.cols; ++j) {
                CHECK(rush.at(i, j) == (sigma == 1.0 ? plain.at(i, j) : sigma * plain.at(i, j)));
                if (plain.at(i, j) < plain.at(i, plain_arg)) plain_arg = j;
                if (rush.at(i, j) < rush.at(i, rush_arg)) rush_arg = j;
            }
            CHECK(plain_arg == rush_arg);
        }
    }
}
