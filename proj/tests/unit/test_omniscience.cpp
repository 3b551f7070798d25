#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ccdsk/errors.hpp"
#include "ccdsk/omniscience.hpp"
#include "oracles.hpp"

using namespace ccdsk;

namespace {

IndexSet clients(std::size_t n, std::vector<std::size_t> members) { return make_index_set(n, members); }

const MessageFamily kTriangle = MessageFamily::from_lists(3, {{1, 2}, {0, 2}, {0, 1}});

}  // namespace

TEST(Demand, Examples) {
  EXPECT_EQ(demand(MessageFamily::from_lists(2, {{0}, {1}}), clients(2, {0})), 1u);
  EXPECT_EQ(demand(kTriangle, clients(3, {0, 1})), 1u);
  EXPECT_EQ(demand(MessageFamily::from_lists(3, {{0, 1}, {1, 2}}), clients(2, {1})), 1u);
  EXPECT_THROW(demand(kTriangle, clients(3, {})), InputError);
  EXPECT_THROW(demand(kTriangle, clients(3, {0, 1, 2})), InputError);
}

TEST(MStar, Examples) {
  EXPECT_EQ(compute_m_star(MessageFamily::from_lists(2, {{0}, {1}})).m_star, 2u);
  EXPECT_EQ(compute_m_star(make_gap(4)).m_star, 2u);
  const auto tri = compute_m_star(kTriangle);
  EXPECT_EQ(tri.m_star, 2u);
  EXPECT_EQ(tri.witness, (Allocation{1, 1, 0}));
  EXPECT_EQ(compute_m_star(make_example1()).m_star, 9u);
  EXPECT_EQ(compute_m_star(MessageFamily::from_lists(3, {{0, 1, 2}})).m_star, 0u);
}

TEST(MStar, GapFamiliesUseMessageTable) {
  // n = 29 for m = 8, beyond the client-subset table.
  for (std::size_t m : {4, 6, 8}) EXPECT_EQ(compute_m_star(make_gap(m)).m_star, m - 2) << m;
}

TEST(MStar, TightSetsAreTight) {
  const auto fam = make_pin(5);
  const auto res = compute_m_star(fam);
  ASSERT_FALSE(res.tight_sets.empty());
  EXPECT_LE(res.tight_sets.size(), 10u);
  for (const auto& s : res.tight_sets) {
    std::int64_t sum = 0;
    for (auto j : members(s)) sum += res.witness[j];
    EXPECT_EQ(sum, static_cast<std::int64_t>(demand(fam, s)));
  }
}

TEST(Separate, Examples) {
  const auto two = MessageFamily::from_lists(2, {{0}, {1}});
  const auto v = separate(two, {0, 0});
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(members(v->clients), (std::vector<std::size_t>{0}));
  EXPECT_EQ(v->amount, 1);
  EXPECT_FALSE(separate(two, {1, 1}).has_value());
  Allocation a(7, 0);
  a[0] = 2;
  EXPECT_FALSE(separate(make_gap(4), a).has_value());
}

TEST(MStar, MatchesBruteForceIncludingWitness) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 4, m = 1 + rng() % 6;
    const auto fam = oracle::random_family(rng, n, m);
    const auto res = compute_m_star(fam);
    const auto [best, witness] = oracle::brute_m_star(fam);
    ASSERT_EQ(res.m_star, best) << serialize_network(fam);
    ASSERT_EQ(res.witness, witness) << serialize_network(fam);
  }
}

TEST(MStar, MessageTableRouteMatchesBruteForce) {
  std::mt19937_64 rng(12);
  int message_route = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 6 + rng() % 2, m = 1 + rng() % 3;
    const auto fam = oracle::random_family(rng, n, m);
    // The solver breaks ties towards the front, compute_m_star towards the
    // back, so feed it the clients reversed.
    BudgetSolver solver;
    solver.load(m, {fam.holdings().rbegin(), fam.holdings().rend()});
    message_route += solver.uses_client_table() ? 0 : 1;
    Allocation a;
    const auto value = solver.minimum(&a);
    std::reverse(a.begin(), a.end());
    const auto [best, witness] = oracle::brute_m_star(fam);
    ASSERT_EQ(value, best);
    ASSERT_EQ(a, witness);
  }
  EXPECT_GT(message_route, 0);
}

TEST(MStar, WitnessIsFeasibleAndTight) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 5, m = 1 + rng() % 7;
    const auto fam = oracle::random_family(rng, n, m);
    const auto res = compute_m_star(fam);
    std::int64_t total = 0;
    for (auto x : res.witness) {
      EXPECT_GE(x, 0);
      total += x;
    }
    EXPECT_EQ(total, static_cast<std::int64_t>(res.m_star));
    EXPECT_FALSE(separate(fam, res.witness).has_value());
    for (std::size_t j = 0; j < n; ++j) {
      if (res.witness[j] == 0) continue;
      auto smaller = res.witness;
      --smaller[j];
      EXPECT_TRUE(separate(fam, smaller).has_value());
    }
  }
}

TEST(MStar, SubfamilyNeverIncreases) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 8, m = 1 + rng() % 8;
    const auto fam = oracle::random_family(rng, n, m);
    const auto sub = fam.restrict(oracle::random_subset(rng, m));
    EXPECT_LE(compute_m_star(sub).m_star, compute_m_star(fam).m_star);
  }
}

TEST(MStar, SizeGuard) {
  // 26 clients and 26 messages, each client alone on one message.
  std::vector<std::vector<std::size_t>> lists;
  for (std::size_t j = 0; j < 26; ++j) lists.push_back({j});
  EXPECT_THROW(compute_m_star(MessageFamily::from_lists(26, lists)), SizeGuardError);
}
