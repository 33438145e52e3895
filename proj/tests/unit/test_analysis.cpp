#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "swperc/analysis.hpp"
#include "swperc/errors.hpp"
#include "swperc/serialize.hpp"

using namespace swperc;

namespace {

std::vector<Node> sorted(std::vector<Node> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Node> reached_nodes(const BfsTrace& t) {
  std::vector<Node> all = t.visited_order;
  all.insert(all.end(), t.terminal_queue.begin(), t.terminal_queue.end());
  return sorted(all);
}

// Queue bookkeeping Q_r = Q_{r-1} + W_r - 1 and trace sanity for a sequential visit.
void check_sequential_trace(const BfsTrace& t) {
  REQUIRE(t.queue_sizes.size() == t.rounds + 1);
  REQUIRE(t.additions.size() == t.rounds);
  CHECK(t.queue_sizes[0] == 1);
  for (std::size_t r = 1; r <= t.rounds; ++r) {
    CHECK(t.queue_sizes[r - 1] > 0);
    CHECK(t.queue_sizes[r] == t.queue_sizes[r - 1] + t.additions[r - 1] - 1);
  }
  std::set<Node> seen(t.visited_order.begin(), t.visited_order.end());
  CHECK(seen.size() == t.visited_order.size());
  CHECK((t.queue_sizes.back() == 0) == t.exhausted());
}

}  // namespace

TEST_CASE("components of fixed graphs") {
  SUBCASE("p = 1") {
    RngStream rng(1, 0);
    auto g = std::make_shared<const SmallWorldGraph>(sample_small_world(50, 1.0, rng));
    const auto r = connected_components(percolate(g, 1.0, rng));
    CHECK(r.count() == 1);
    CHECK(r.largest_size == 50);
    CHECK(r.largest_fraction == 1.0);
  }
  SUBCASE("p = 0") {
    RngStream rng(1, 0);
    auto g = std::make_shared<const SmallWorldGraph>(sample_small_world(50, 1.0, rng));
    const auto r = connected_components(percolate(g, 0.0, rng));
    CHECK(r.count() == 50);
    CHECK(r.largest_size == 1);
    REQUIRE(r.largest_diameter.has_value());
    CHECK(r.largest_diameter->exact());
    CHECK(r.largest_diameter->upper == 0);
  }
  SUBCASE("hand-checked n = 6") {
    const auto gp = fixture::make(6, {0, 1, 3}, {});
    const auto r = connected_components(gp);
    REQUIRE(r.count() == 3);
    CHECK(std::vector<Node>(r.component(0).begin(), r.component(0).end()) == std::vector<Node>{0, 1, 2});
    CHECK(std::vector<Node>(r.component(1).begin(), r.component(1).end()) == std::vector<Node>{3, 4});
    CHECK(std::vector<Node>(r.component(2).begin(), r.component(2).end()) == std::vector<Node>{5});
    CHECK(r.largest_size == 3);
    CHECK(r.largest_fraction == doctest::Approx(0.5));
    CHECK(r.largest_diameter->upper == 2);
    const auto j = to_json(r);
    CHECK(j["components"].size() == 3);
    CHECK(j["largest_size"] == 3);
    CHECK(j["largest_diameter"] == 2);
  }
}

TEST_CASE("components partition V and agree with the sequential BFS") {
  for (int inst = 0; inst < 1000; ++inst) {
    const Node n = 5 + static_cast<Node>(inst % 196);
    const double alpha = 0.3 + 0.7 * (inst % 5);
    const double p = 0.2 + 0.15 * (inst % 6);
    const auto gp = fixture::random(n, alpha, p, 1000 + inst);
    const auto r = connected_components(gp, {.with_diameter = false});
    std::vector<int> cover(n, 0);
    std::size_t largest = 0;
    for (std::size_t c = 0; c < r.count(); ++c) {
      const auto comp = r.component(c);
      largest = std::max(largest, comp.size());
      for (Node u : comp) ++cover[u];
      if (c > 0) CHECK(r.component(c - 1).front() < comp.front());
    }
    CHECK(std::all_of(cover.begin(), cover.end(), [](int k) { return k == 1; }));
    CHECK(r.largest_size == largest);
    CHECK(r.largest_fraction == doctest::Approx(double(largest) / n));

    const auto adj = oracle::adjacency(gp);
    RngStream pick(inst, 9);
    const Node s = static_cast<Node>(pick.below(n));
    const auto want = oracle::reach(adj, s);
    CHECK(component_of(gp, s) == want);
    const auto c = r.component_containing(s);
    CHECK(std::vector<Node>(c.begin(), c.end()) == want);
  }
}

TEST_CASE("component_of edge cases") {
  const auto iso = fixture::make(6, {0, 1}, {});
  CHECK(component_of(iso, 4) == std::vector<Node>{4});
  CHECK(component_of(fixture::full_ring(9), 3).size() == 9);
  CHECK_THROWS_AS(component_of(iso, 6), InputError);
}

TEST_CASE("diameter") {
  const auto ring = fixture::full_ring(11);
  std::vector<Node> all(11);
  for (Node i = 0; i < 11; ++i) all[i] = i;
  CHECK(diameter(ring, std::vector<Node>{4}).upper == 0);
  CHECK(diameter(ring, all).exact());
  CHECK(diameter(ring, all).upper == 5);
  CHECK(diameter(fixture::full_ring(12), std::vector<Node>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}).upper == 6);
  const auto split = fixture::make(6, {0, 1, 3}, {});
  CHECK_FALSE(diameter(split, std::vector<Node>{0, 1, 3}).connected);
  CHECK_THROWS_AS(diameter(split, std::vector<Node>{}), InputError);
  CHECK_THROWS_AS(diameter(split, std::vector<Node>{9}), InputError);
  CHECK(to_json(diameter(split, std::vector<Node>{0, 1, 3})) == "inf");

  SUBCASE("matches an all-pairs oracle on random induced subgraphs") {
    for (int inst = 0; inst < 300; ++inst) {
      const Node n = 6 + inst % 60;
      const auto gp = fixture::random(n, 1.0, 0.8, 5000 + inst);
      const auto adj = oracle::adjacency(gp);
      RngStream pick(inst, 1);
      std::vector<Node> S;
      for (Node u = 0; u < n; ++u)
        if (pick.bernoulli(0.6)) S.push_back(u);
      if (S.empty()) S.push_back(0);
      const long want = oracle::induced_diameter(adj, S);
      const auto got = diameter(gp, S);
      CHECK(got.connected == (want >= 0));
      if (want >= 0) {
        CHECK(got.exact());
        CHECK(got.upper == static_cast<std::uint64_t>(want));
      }
    }
  }

  SUBCASE("bounds bracket the exact value on large sets") {
    for (int inst = 0; inst < 6; ++inst) {
      const auto gp = fixture::random(3000, 1.5 + 0.3 * inst, 0.9, 700 + inst);
      const auto r = connected_components(gp, {.with_diameter = false});
      const auto big = r.largest();
      const auto exact = diameter(gp, big, {.exact_limit = 100000});
      REQUIRE(exact.exact());
      const auto approx = diameter(gp, big, {.exact_limit = 10, .bfs_budget = 16});
      CHECK(approx.connected);
      CHECK(approx.lower <= exact.upper);
      CHECK(approx.upper >= exact.upper);
      CHECK(approx.upper <= 2 * approx.lower);
    }
  }
}

TEST_CASE("ring spread") {
  const auto iso = fixture::make(12, {}, {});
  CHECK(ring_spread(iso, 5) == 0);
  CHECK(ring_spread(fixture::make(12, {3, 4}, {}), 3) == 2);
  CHECK(ring_spread(fixture::make(12, {0, 11}, {}), 0) == 1);
  CHECK_THROWS_AS(ring_spread(iso, 12), InputError);

  for (int inst = 0; inst < 200; ++inst) {
    const Node n = 5 + inst % 80;
    const auto gp = fixture::random(n, 0.8, 0.5 + 0.1 * (inst % 5), 9000 + inst);
    const auto all = ring_spread_all(connected_components(gp, {.with_diameter = false}));
    for (Node s = 0; s < n; ++s) {
      CHECK(all[s] == ring_spread(gp, s));
      CHECK(all[s] <= n / 2);
    }
  }
}

TEST_CASE("max degree") {
  RngStream rng(2, 0);
  auto g = std::make_shared<const SmallWorldGraph>(sample_small_world(200, 1.0, rng));
  CHECK(max_degree(percolate(g, 0.0, rng)) == 0);
  CHECK(max_degree(fixture::full_ring(10)) == 2);
  CHECK(max_degree(*g) == max_degree(percolate(g, 1.0, rng)));
  CHECK(max_degree(*g) == g->to_graph().max_degree());
}

TEST_CASE("bfs with removed nodes") {
  const auto ring8 = fixture::full_ring(8);
  SUBCASE("hand trace") {
    const auto t = bfs_with_removed(ring8, 0, std::vector<Node>{4});
    CHECK(sorted(t.visited_order) == std::vector<Node>{0, 1, 2, 3, 5, 6, 7});
    CHECK(t.visited_order == std::vector<Node>{0, 1, 7, 2, 6, 3, 5});
    CHECK(t.terminal_removed == std::vector<Node>{0, 1, 2, 3, 5, 6, 7});
    check_sequential_trace(t);
  }
  SUBCASE("all neighbors removed") {
    const auto t = bfs_with_removed(ring8, 0, std::vector<Node>{1, 7});
    CHECK(t.visited_order == std::vector<Node>{0});
    CHECK(t.rounds == 1);
  }
  SUBCASE("source in R0") {
    CHECK_THROWS_AS(bfs_with_removed(ring8, 3, std::vector<Node>{3}), InputError);
    CHECK_THROWS_AS(bfs_with_removed(ring8, 8, std::vector<Node>{}), InputError);
  }
  SUBCASE("iteration budget") {
    const auto t = bfs_with_removed(ring8, 0, std::vector<Node>{}, 3);
    CHECK(t.rounds == 3);
    CHECK_FALSE(t.exhausted());
    CHECK(t.visited_order == std::vector<Node>{0, 1, 7});
    CHECK(sorted(t.terminal_queue) == std::vector<Node>{2, 6});
    CHECK(t.reached.back() == 5);
    check_sequential_trace(t);
  }
  SUBCASE("empty R0 reproduces the component and satisfies the queue recursion") {
    for (int inst = 0; inst < 300; ++inst) {
      const Node n = 10 + inst % 150;
      const auto gp = fixture::random(n, 1.2, 0.7, 300 + inst);
      const Node s = static_cast<Node>(inst % n);
      const auto t = bfs_with_removed(gp, s, std::vector<Node>{});
      CHECK(sorted(t.visited_order) == component_of(gp, s));
      CHECK(t.exhausted());
      check_sequential_trace(t);

      // Enlarging R0 never enlarges the reached set.
      RngStream pick(inst, 2);
      std::vector<Node> R0, R1;
      for (Node u = 0; u < n; ++u) {
        if (u == s) continue;
        const double r = pick.uniform();
        if (r < 0.1) R0.push_back(u);
        if (r < 0.25) R1.push_back(u);
      }
      const auto a = reached_nodes(bfs_with_removed(gp, s, R0));
      const auto b = reached_nodes(bfs_with_removed(gp, s, R1));
      CHECK(std::includes(a.begin(), a.end(), b.begin(), b.end()));
      check_sequential_trace(bfs_with_removed(gp, s, R1, 5));
    }
  }
}

TEST_CASE("parallel bfs") {
  SUBCASE("path 0-1-2-3 from both ends") {
    const auto path = fixture::make(8, {0, 1, 2}, {});
    const auto t = parallel_bfs(path, std::vector<Node>{0, 3}, std::vector<Node>{});
    CHECK(t.rounds == 2);
    CHECK(sorted(t.visited_order) == std::vector<Node>{0, 1, 2, 3});
  }
  SUBCASE("whole component as initiators") {
    const auto path = fixture::make(8, {0, 1, 2}, {});
    const auto t = parallel_bfs(path, std::vector<Node>{0, 1, 2, 3}, std::vector<Node>{});
    CHECK(t.rounds == 1);
  }
  SUBCASE("errors") {
    const auto ring = fixture::full_ring(8);
    CHECK_THROWS_AS(parallel_bfs(ring, std::vector<Node>{}, std::vector<Node>{}), InputError);
    CHECK_THROWS_AS(parallel_bfs(ring, std::vector<Node>{1}, std::vector<Node>{1}), InputError);
    CHECK_THROWS_AS(parallel_bfs(ring, std::vector<Node>{8}, std::vector<Node>{}), InputError);
  }
  SUBCASE("single source reaches its component in eccentricity + 1 rounds") {
    for (int inst = 0; inst < 300; ++inst) {
      const Node n = 10 + inst % 150;
      const auto gp = fixture::random(n, 0.9, 0.6, 600 + inst);
      const Node s = static_cast<Node>((7 * inst) % n);
      const auto t = parallel_bfs(gp, std::vector<Node>{s}, std::vector<Node>{});
      CHECK(sorted(t.visited_order) == component_of(gp, s));
      const auto d = oracle::distances(oracle::adjacency(gp), {s});
      const int ecc = *std::max_element(d.begin(), d.end());
      CHECK(t.rounds == static_cast<std::size_t>(ecc) + 1);
      CHECK(t.queue_sizes.back() == 0);
    }
  }
  SUBCASE("json") {
    const auto t = parallel_bfs(fixture::full_ring(6), std::vector<Node>{0}, std::vector<Node>{});
    const auto j = to_json(t);
    CHECK(j["rounds"] == 4);
    CHECK(j["queue_sizes"].size() == 5);
  }
}

TEST_CASE("restart search") {
  SUBCASE("p = 1 triggers on the first restart") {
    for (double k : {1.0, 2.0, 10.0}) {
      RngStream rng(4, 0);
      auto g = std::make_shared<const SmallWorldGraph>(sample_small_world(2000, 0.5, rng));
      const auto out = restart_search(percolate(g, 1.0, rng), {.tau1 = 2000, .beta_log = 1e9, .k_frac = k});
      CHECK(out.iterations == 1);
      CHECK(out.trigger == RestartTrigger::fraction);
      CHECK(static_cast<double>(out.final_reached) >= 2000 / k);
    }
  }
  SUBCASE("p = 0 never triggers") {
    RngStream rng(4, 0);
    auto g = std::make_shared<const SmallWorldGraph>(sample_small_world(300, 0.5, rng));
    const auto out = restart_search(percolate(g, 0.0, rng), {.tau1 = 5, .beta_log = 1.0, .k_frac = 10});
    CHECK(out.trigger == RestartTrigger::none);
    CHECK(out.iterations <= 300);
  }
  SUBCASE("bad parameters") {
    const auto ring = fixture::full_ring(10);
    CHECK_THROWS_AS(restart_search(ring, {.tau1 = 0}), InputError);
    CHECK_THROWS_AS(restart_search(ring, {.tau1 = 1, .beta_log = 1, .k_frac = 0}), InputError);
  }
  SUBCASE("alpha = 0.5 at p = 0.95 triggers reliably") {
    const Node n = 100000;
    const double ln = std::log(double(n));
    const RestartParams params{.tau1 = static_cast<std::size_t>(std::ceil(2 * ln)), .beta_log = 1.0, .k_frac = 10.0};
    int triggered = 0, large = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto gp = fixture::random(n, 0.5, 0.95, 40000 + trial);
      const auto out = restart_search(gp, params);
      triggered += out.trigger != RestartTrigger::none;
      large += static_cast<double>(out.final_reached) >= n / params.k_frac;
    }
    CHECK(triggered >= 99);
    CHECK(large >= 99);
  }
}
