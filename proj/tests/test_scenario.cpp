// SPDX-License-Identifier: Apache-2.0

#include "sagin/errors.hpp"
#include "sagin/scenario.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

using namespace sagin;

namespace {

Station tbs(int id, Point at, int capacity = 100, double radius = 1000.0)
{
    Station s;
    s.id = id;
    s.position = at;
    s.capacity = capacity;
    s.coverage_radius_m = radius;
    return s;
}

Station abs(int id, Point at, int capacity = 100, double radius = 1000.0)
{
    Station s = tbs(id, at, capacity, radius);
    s.kind = StationKind::Abs;
    return s;
}

GroundUser user(int id, double x, double y, LatencyClass latency = LatencyClass::Relaxed)
{
    GroundUser u;
    u.id = id;
    u.position = {x, y, 0.0};
    u.latency = latency;
    return u;
}

} // namespace

TEST_CASE("reference grid has 49 distinct cells")
{
    const CellGrid g = buildGrid(7, 7, 500.0);
    CHECK(g.cells.size() == 49);
    CHECK(g.clusters() == 7);
    std::set<std::pair<long, long>> seen;
    for (const auto& c : g.cells) {
        seen.insert({std::lround(c.center.x * 1000), std::lround(c.center.y * 1000)});
        CHECK(c.id / 7 == c.cluster);
    }
    CHECK(seen.size() == 49);
    // Hex packing: every cell has a neighbour exactly sqrt(3) r away.
    for (const auto& a : g.cells) {
        double nearest = 1e18;
        for (const auto& b : g.cells) {
            if (a.id != b.id) {
                nearest = std::min(nearest, horizontalDistance(a.center, b.center));
            }
        }
        CHECK(nearest == doctest::Approx(std::numbers::sqrt3 * 500.0));
    }
}

TEST_CASE("small layouts")
{
    const CellGrid one = buildGrid(1, 1, 100.0);
    REQUIRE(one.cells.size() == 1);
    CHECK(one.cells[0].center == Point{});

    const CellGrid flower = buildGrid(1, 7, 100.0);
    REQUIRE(flower.cells.size() == 7);
    for (std::size_t i = 1; i < 7; ++i) {
        CHECK(horizontalDistance(flower.cells[i].center, {}) == doctest::Approx(std::numbers::sqrt3 * 100.0));
    }
    CHECK(flower.cellAt({1.0, 1.0, 0.0}) == 0);
    CHECK(flower.cellAt(flower.cells[4].center) == 4);

    CHECK_THROWS_AS(buildGrid(3, 7, 100.0), ConfigError);
    CHECK_THROWS_AS(buildGrid(7, 7, 0.0), ConfigError);
}

TEST_CASE("one station in range takes everyone")
{
    const std::vector<Station> st{tbs(4, {})};
    const std::vector<GroundUser> users{user(0, 10, 0), user(1, -50, 20), user(2, 0, 300)};
    for (auto policy : {AssociationPolicy::NearestDistance, AssociationPolicy::MaxSinr,
                        AssociationPolicy::PriorityLatency, AssociationPolicy::LoadThresholdOffload}) {
        CHECK(associate(users, st, policy, LinkModel{}) == std::vector<int>{4, 4, 4});
    }
}

TEST_CASE("equidistant stations tie to the lower id")
{
    const std::vector<Station> st{tbs(9, {100, 0, 0}), tbs(3, {-100, 0, 0})};
    const std::vector<GroundUser> users{user(0, 0, 50)};
    CHECK(associate(users, st, AssociationPolicy::NearestDistance, LinkModel{}) == std::vector<int>{3});
    CHECK(associate(users, st, AssociationPolicy::MaxSinr, LinkModel{}) == std::vector<int>{3});
}

TEST_CASE("load threshold keeps capacity on the TBS and offloads the rest")
{
    const std::vector<Station> st{tbs(0, {}, 10), abs(1, {0, 0, 120})};
    std::vector<GroundUser> users;
    for (int i = 0; i < 15; ++i) {
        const double a = 2.0 * std::numbers::pi * i / 15.0;
        users.push_back(user(i, (20.0 + 10.0 * i) * std::cos(a), (20.0 + 10.0 * i) * std::sin(a)));
    }
    const auto map = associate(users, st, AssociationPolicy::LoadThresholdOffload, LinkModel{});
    CHECK(std::count(map.begin(), map.end(), 0) == 10);
    CHECK(std::count(map.begin(), map.end(), 1) == 5);
    // The TBS keeps its strongest (closest) users.
    for (int i = 0; i < 10; ++i) {
        CHECK(map[static_cast<std::size_t>(i)] == 0);
    }
}

TEST_CASE("load threshold sheds users the ABS serves better once the TBS is busy")
{
    Station hot = tbs(0, {}, 10);
    Station air = abs(1, {300, 0, 50});
    air.tx_power_w = 200.0;
    std::vector<GroundUser> users;
    for (int i = 0; i < 9; ++i) {
        users.push_back(user(i, 10.0 * i - 40.0, 5.0));
    }
    users.push_back(user(9, 300, 0));
    users.push_back(user(10, 290, 10));
    const std::vector<Station> st{hot, air};
    LinkModel link;
    const auto map = associate(users, st, AssociationPolicy::LoadThresholdOffload, link);
    // 11 first choices on a 10-slot TBS exceed 90 %, so users near the ABS move.
    CHECK(map[9] == 1);
    CHECK(map[10] == 1);
    CHECK(std::count(map.begin(), map.end(), 0) == 9);

    // Under the threshold nobody moves even if the ABS is stronger.
    const std::vector<GroundUser> few{users[0], users[9]};
    CHECK(associate(few, st, AssociationPolicy::LoadThresholdOffload, link) == std::vector<int>{0, 0});
}

TEST_CASE("priority-latency sends tight users to the TBS and relaxed users to the ABS")
{
    const std::vector<Station> st{tbs(0, {}), abs(1, {0, 0, 100})};
    const std::vector<GroundUser> users{user(0, 10, 0, LatencyClass::Tight), user(1, 20, 0, LatencyClass::Relaxed),
                                        user(2, 30, 0, LatencyClass::Tight)};
    CHECK(associate(users, st, AssociationPolicy::PriorityLatency, LinkModel{}) == std::vector<int>{0, 1, 0});
}

TEST_CASE("capacity overflow moves the weakest users on")
{
    const std::vector<Station> st{tbs(0, {}, 2), tbs(1, {500, 0, 0}, 5)};
    const std::vector<GroundUser> users{user(0, 100, 0), user(1, 10, 0), user(2, 50, 0)};
    const auto map = associate(users, st, AssociationPolicy::MaxSinr, LinkModel{});
    CHECK(map == std::vector<int>{1, 0, 0});
}

TEST_CASE("users out of range or over capacity stay uncovered")
{
    const std::vector<Station> st{tbs(0, {}, 1, 100.0)};
    const std::vector<GroundUser> users{user(0, 10, 0), user(1, 20, 0), user(2, 500, 0)};
    CHECK(associate(users, st, AssociationPolicy::NearestDistance, LinkModel{}) ==
          std::vector<int>{0, kUncovered, kUncovered});
}

TEST_CASE("association never uses a failed station")
{
    World w = makeBaseWorld(ScenarioParams{}, 3);
    const int failed[] = {0, 8, 24};
    w = reassociate(applyFailure(std::move(w), failed));
    for (int s : w.association) {
        CHECK(s != 0);
        CHECK(s != 8);
        CHECK(s != 24);
    }
    std::vector<int> load(w.stations.size(), 0);
    for (int s : w.association) {
        if (s != kUncovered) {
            ++load[static_cast<std::size_t>(s)];
        }
    }
    for (std::size_t i = 0; i < load.size(); ++i) {
        CHECK(load[i] <= w.stations[i].capacity);
    }
}

TEST_CASE("failure bookkeeping")
{
    World w = makeBaseWorld(ScenarioParams{}, 1);
    w = reassociate(std::move(w));
    const World same = applyFailure(w, {});
    CHECK(same.association_current);
    CHECK(same.stations == w.stations);
    const int bad[] = {999};
    CHECK_THROWS_AS(applyFailure(w, bad), ConfigError);
    const int one[] = {5};
    const World failed = applyFailure(w, one);
    CHECK_FALSE(failed.association_current);
    CHECK_FALSE(failed.station(5).operational);
    CHECK_THROWS_AS(coverageReport(failed, nullptr), std::logic_error);
}

TEST_CASE("max-SINR association ignores a common power scale")
{
    World w = makeBaseWorld(ScenarioParams{}, 12);
    w.stations.push_back(abs(49, {0, 0, 120}, 100, 1200.0));
    const auto before = associate(w.users, w.stations, AssociationPolicy::MaxSinr, w.link);
    for (auto& s : w.stations) {
        s.tx_power_w *= 37.5;
    }
    CHECK(associate(w.users, w.stations, AssociationPolicy::MaxSinr, w.link) == before);
}

TEST_CASE("three UAVs over seven clusters")
{
    const CellGrid g = buildGrid(7, 7, 500.0);
    const UavSchedule s = uavRotation(3, g, 60.0);
    CHECK(s.totalPhases() == 3);
    CHECK(std::accumulate(s.allocations.begin(), s.allocations.end(), 0) == 9);
    CHECK(s.sector_of_cluster[0] == -1);
    CHECK(s.sweep_order.back() == 0);
    const double mean_duty = std::accumulate(s.duty_cycle.begin(), s.duty_cycle.end(), 0.0) / 7.0;
    CHECK(mean_duty == doctest::Approx(3.0 / 7.0));
    std::set<int> visited;
    for (const auto& phase : s.phases) {
        CHECK(phase.cluster_of_uav.size() == 3);
        visited.insert(phase.cluster_of_uav.begin(), phase.cluster_of_uav.end());
    }
    CHECK(visited.size() == 7);
    for (int c = 0; c < 7; ++c) {
        const auto i = static_cast<std::size_t>(c);
        CHECK(s.worst_wait_s[i] == doctest::Approx((3 - s.phases_covered[i]) * 60.0));
        CHECK(s.duty_cycle[i] == doctest::Approx(s.phases_covered[i] / 3.0));
    }
    // Outer clusters come in 120 degree sectors of two.
    for (int sec = 0; sec < 3; ++sec) {
        CHECK(std::count(s.sector_of_cluster.begin(), s.sector_of_cluster.end(), sec) == 2);
    }
}

TEST_CASE("saturated and single-UAV rotations")
{
    const CellGrid g = buildGrid(7, 7, 500.0);
    const UavSchedule full = uavRotation(7, g, 60.0);
    CHECK(full.totalPhases() == 1);
    for (int c = 0; c < 7; ++c) {
        CHECK(full.duty_cycle[static_cast<std::size_t>(c)] == 1.0);
        CHECK(full.worst_wait_s[static_cast<std::size_t>(c)] == 0.0);
    }
    const UavSchedule lone = uavRotation(1, g, 60.0);
    CHECK(lone.totalPhases() == 7);
    for (int c = 0; c < 7; ++c) {
        CHECK(lone.duty_cycle[static_cast<std::size_t>(c)] == doctest::Approx(1.0 / 7.0));
        CHECK(lone.worst_wait_s[static_cast<std::size_t>(c)] == doctest::Approx(360.0));
    }
    CHECK_THROWS_AS(uavRotation(0, g, 60.0), ConfigError);
}

TEST_CASE("coverage with every station up has no waiting")
{
    const World w = reassociate(makeBaseWorld(ScenarioParams{}, 2));
    const CoverageReport r = coverageReport(w, nullptr);
    CHECK(r.total_users == 490);
    CHECK(r.total_uncovered == 0);
    CHECK(r.offloaded_users.empty());
    for (const auto& c : r.clusters) {
        CHECK(c.max_wait_s == 0.0);
        CHECK(c.covered_fraction == 1.0);
    }
}

TEST_CASE("no stations means nobody is covered")
{
    World w = makeBaseWorld(ScenarioParams{}, 2);
    std::vector<int> all(w.stations.size());
    std::iota(all.begin(), all.end(), 0);
    w = reassociate(applyFailure(std::move(w), all));
    const CoverageReport r = coverageReport(w, nullptr);
    CHECK(r.total_uncovered == r.total_users);
    for (const auto& c : r.clusters) {
        CHECK(c.covered_fraction == 0.0);
    }
}

TEST_CASE("scenario presets")
{
    const ScenarioParams p;
    SUBCASE("single failure")
    {
        const auto out = runScenario(kScenarioSingleFailure, p, 1);
        CHECK(out.report.failed_stations == std::vector<int>{0});
        CHECK_FALSE(out.report.offloaded_users.empty());
        CHECK(out.report.total_uncovered == 0);
    }
    SUBCASE("cluster outage")
    {
        const auto out = runScenario(kScenarioClusterOutage, p, 1);
        CHECK(out.report.failed_stations.size() == 7);
        REQUIRE(out.schedule.has_value());
        const auto& affected = out.report.clusters[static_cast<std::size_t>(p.outage_cluster)];
        CHECK(affected.max_wait_s ==
              doctest::Approx(out.schedule->worst_wait_s[static_cast<std::size_t>(p.outage_cluster)]));
        CHECK(affected.max_wait_s > 0.0);
    }
    SUBCASE("event offload")
    {
        const auto out = runScenario(kScenarioEventOffload, p, 1);
        CHECK(out.report.station_load.front() == p.tbs_capacity);
        CHECK(out.report.station_load.back() > 0);
        CHECK(out.report.failed_stations.empty());
    }
    CHECK_THROWS_AS(runScenario("scenario4", p, 1), ConfigError);
    CHECK(scenarioPresets().size() == 3);
}

TEST_CASE("scenario parameters are validated")
{
    ScenarioParams p;
    p.responder_fraction = 2.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = ScenarioParams{};
    p.outage_cluster = 7;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
