// One line per acceptance criterion; exit status 1 if any of them fails.
// Criteria 1-3 compare against fixed reference values; everything else is
// compared against the brute-force oracles in tests/support.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ccdsk/cli.hpp"
#include "ccdsk/connectivity.hpp"
#include "ccdsk/omniscience.hpp"
#include "ccdsk/oracle.hpp"
#include "ccdsk/protocol.hpp"
#include "ccdsk/secrecy.hpp"
#include "oracles.hpp"

using namespace ccdsk;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Criterion = std::function<Outcome()>;

std::string show(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "inf"; }

// Finite values compare as usual and infinity sits above all of them.
bool le(const std::optional<std::size_t>& a, const std::optional<std::size_t>& b) {
  if (!b) return true;
  if (!a) return false;
  return *a <= *b;
}

Outcome table1() {
  const std::string net = "acceptance_table1.json";
  std::vector<std::string> args{"ccdsk", "example", "table1", "--out", net};
  auto call = [](std::vector<std::string>& a, std::ostream& out) {
    std::vector<char*> argv;
    for (auto& s : a) argv.push_back(s.data());
    std::ostringstream err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  };
  std::ostringstream ignored, out;
  if (call(args, ignored) != 0) return {false, "could not write example network"};
  args = {"ccdsk", "analyze", net, "--all-tau"};
  if (call(args, out) != 0) return {false, "analyze failed"};
  std::remove(net.c_str());

  std::istringstream lines(out.str());
  std::string line;
  std::vector<std::string> taus, values;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string head, bar, cell;
    cells >> head >> bar;
    if (bar != "|") continue;
    auto& target = head == "tau" ? taus : values;
    while (cells >> cell) target.push_back(cell);
  }
  const std::vector<std::string> expected{"2", "4", "4", "6", "8", "8", "inf"};
  std::string got;
  for (const auto& v : values) got += v + " ";
  if (values != expected) return {false, "S_L row = " + got};
  // Beyond the printed range every tau stays infeasible.
  const auto fam = make_example1();
  for (std::size_t tau = 8; tau <= 10; ++tau)
    if (s_l_tau(fam, tau).s_l) return {false, "tau=" + std::to_string(tau) + " finite"};
  return {true, "S_L = " + got + "(tau 1..7), inf for tau 8..10"};
}

Outcome pin() {
  std::size_t checked = 0;
  for (std::size_t n : {4, 5, 6})
    for (std::size_t tau = 1; tau <= n / 2; ++tau) {
      const auto got = s_l_tau(make_pin(n), tau).s_l;
      if (got != std::optional<std::size_t>(tau * (n - 2)))
        return {false, "n=" + std::to_string(n) + " tau=" + std::to_string(tau) + " got " + show(got)};
      ++checked;
    }
  return {true, std::to_string(checked) + " (n, tau) pairs equal tau(n-2)"};
}

Outcome gap() {
  std::ostringstream detail;
  for (std::size_t m : {4, 6, 8}) {
    const auto fam = make_gap(m);
    const auto s_l = s_l_tau(fam, 1).s_l;
    if (s_l != std::optional<std::size_t>(m - 2)) return {false, "m=" + std::to_string(m) + " S_L=" + show(s_l)};
    const auto proto = gap_protocol(m);
    if (proto.transmissions() != m / 2 - 1) return {false, "m=" + std::to_string(m) + " wrong transmission count"};
    OracleOptions opt;
    opt.state_limit = std::uint64_t{1} << 23;
    const auto v = verify_exhaustive(fam, proto, opt);
    if (!v.ok()) return {false, "m=" + std::to_string(m) + " exhaustive check failed"};
    detail << "m=" << m << ": S_L=" << *s_l << ", " << proto.transmissions() << " tx over GF("
           << proto.field.order() << ")^2, " << v.assignments << " assignments; ";
  }
  return {true, detail.str()};
}

Outcome route_vs_partition() {
  std::mt19937_64 rng(20240401);
  std::size_t agree = 0;
  const std::size_t trials = 240;
  for (std::size_t t = 0; t < trials; ++t) {
    // n = 1 is left out: one vertex has no partition to violate.
    const std::size_t n = 2 + rng() % 7, m = 1 + rng() % 8, tau = 1 + rng() % 3;
    const auto fam = oracle::random_family(rng, n, m);
    const bool route = is_inherently_tau_connected(fam, tau);
    const bool bound = partition_bound(to_hypergraph(fam), tau).holds;
    const auto h = to_hypergraph(fam);
    const bool brute = oracle::brute_partition_bound(n, h.edges, tau);
    if (route != bound || bound != brute) return {false, "disagreement on\n" + serialize_network(fam)};
    agree += route;
  }
  return {true, std::to_string(trials) + " families agree (" + std::to_string(agree) + " connected)"};
}

Outcome orders() {
  std::mt19937_64 rng(77);
  const std::size_t trials = 60;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 2 + rng() % 5, m = 1 + rng() % 7;
    const auto fam = oracle::random_family(rng, n, m);
    const auto h = to_hypergraph(fam);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::size_t least = SIZE_MAX;
    do {
      least = std::min(least, tree_packing_number(induce_by_order(h, order)));
    } while (std::next_permutation(order.begin(), order.end()));
    for (std::size_t tau = 1; tau <= 3; ++tau)
      if ((least >= tau) != is_inherently_tau_connected(fam, tau))
        return {false, "tau=" + std::to_string(tau) + " disagreement on\n" + serialize_network(fam)};
  }
  return {true, std::to_string(trials) + " families x tau 1..3 agree over all orders"};
}

Outcome tutte() {
  std::mt19937_64 rng(5);
  const std::size_t trials = 250;
  for (std::size_t t = 0; t < trials; ++t) {
    Multigraph g;
    g.vertices = 2 + rng() % 7;
    const std::size_t edges = rng() % 22;
    std::vector<std::vector<std::size_t>> lists;
    for (std::size_t i = 0; i < edges; ++i) {
      const std::size_t u = rng() % g.vertices;
      std::size_t v = rng() % (g.vertices - 1);
      if (v >= u) ++v;
      g.edges.emplace_back(u, v);
      lists.push_back({u, v});
    }
    const std::size_t packed = tree_packing_number(g);
    const std::size_t bound = oracle::brute_partition_tau(g.vertices, lists);
    if (packed != bound)
      return {false, "n=" + std::to_string(g.vertices) + " packing " + std::to_string(packed) + " vs bound " +
                         std::to_string(bound)};
  }
  return {true, std::to_string(trials) + " multigraphs agree"};
}

Outcome ilp() {
  std::mt19937_64 rng(11);
  const std::size_t trials = 600;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 1 + rng() % 4, m = 1 + rng() % 5;
    const auto fam = oracle::random_family(rng, n, m);
    const auto got = compute_m_star(fam);
    const auto [best, witness] = oracle::brute_m_star(fam);
    if (got.m_star != best || got.witness != witness) return {false, "mismatch on\n" + serialize_network(fam)};
  }
  return {true, std::to_string(trials) + " families match value and tie-broken allocation"};
}

Outcome soundness() {
  std::mt19937_64 rng(99);
  std::size_t omni = 0, sk = 0, exhaustive = 0;
  for (std::size_t t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng() % 4, m = 1 + rng() % 6;
    const auto fam = oracle::random_family(rng, n, m);
    const auto field = default_field(n);
    const auto p = synth_omniscience(fam, field, t);
    if (p.rows.size() != compute_m_star(fam).m_star) return {false, "omniscience row count"};
    for (int draw = 0; draw < 100; ++draw) {
      std::vector<Element> x(m);
      for (auto& v : x) v = static_cast<Element>(rng() % field.order());
      const auto transcript = transcript_of(p, x);
      for (std::size_t j = 0; j < n; ++j)
        if (decode(fam, p, j, x, transcript) != x) return {false, "omniscience decode\n" + serialize_network(fam)};
    }
    ++omni;
    for (std::size_t tau = 1; tau <= 3; ++tau) {
      const auto entry = s_l_tau(fam, tau);
      if (!entry.s_l) continue;
      const auto key = synth_sk(fam, tau, field, t);
      if (key.rows.size() != *entry.s_l) return {false, "SK row count"};
      if (!check_algebraic(fam, key).ok()) return {false, "SK algebraic check\n" + serialize_network(fam)};
      ++sk;
      if (std::pow(double(field.order()), double(m)) <= double(kDefaultStateLimit)) {
        if (!verify_exhaustive(fam, key).ok()) return {false, "SK exhaustive check\n" + serialize_network(fam)};
        ++exhaustive;
      }
    }
  }
  const auto fam = make_example1();
  const auto field = gf::make_field(17, 1);
  for (std::size_t tau = 1; tau <= 6; ++tau) {
    const auto key = synth_sk(fam, tau, field);
    if (key.rows.size() != *s_l_tau(fam, tau).s_l || !check_algebraic(fam, key).ok())
      return {false, "example network tau=" + std::to_string(tau)};
    ++sk;
  }
  return {true, std::to_string(omni) + " omniscience, " + std::to_string(sk) + " SK protocols (" +
                    std::to_string(exhaustive) + " exhaustively)"};
}

Outcome set_cover() {
  std::mt19937_64 rng(3);
  const std::size_t trials = 120;
  for (std::size_t t = 0; t < trials; ++t) {
    SetCoverInstance inst;
    inst.universe = 1 + rng() % 6;
    const std::size_t k = 1 + rng() % 6;
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<std::size_t> s;
      for (std::size_t v = 0; v < inst.universe; ++v)
        if (rng() % 2) s.push_back(v);
      inst.subsets.push_back(s);
    }
    // Patch uncovered elements into random subsets so the instance is valid.
    for (std::size_t v = 0; v < inst.universe; ++v) {
      bool covered = false;
      for (const auto& s : inst.subsets) covered = covered || std::count(s.begin(), s.end(), v);
      if (!covered) {
        auto& s = inst.subsets[rng() % k];
        s.insert(std::upper_bound(s.begin(), s.end(), v), v);
      }
    }
    const auto got = min_cover_via_reduction(inst);
    const auto want = oracle::brute_min_cover(inst.universe, inst.subsets);
    if (got != want) return {false, "got " + std::to_string(got) + " want " + std::to_string(want)};
  }
  return {true, std::to_string(trials) + " instances match"};
}

Outcome monotonicity() {
  std::mt19937_64 rng(8);
  const std::size_t trials = 520;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 1 + rng() % 7, m = 1 + rng() % 7;
    const auto fam = oracle::random_family(rng, n, m);
    const auto sub = fam.restrict(oracle::random_subset(rng, m));
    const auto big = compute_m_star(fam).m_star;
    const auto small = sub.messages() == 0 ? 0 : compute_m_star(sub).m_star;
    if (small > big) return {false, "M* grew on a subfamily\n" + serialize_network(fam)};
    for (std::size_t tau = 1; tau <= 3; ++tau) {
      if (sub.messages() > 0 && sk_feasible(sub, tau) && !sk_feasible(fam, tau))
        return {false, "key feasibility lost on the larger family"};
      const auto s_sub = sub.messages() == 0 ? std::nullopt : s_l_tau(sub, tau).s_l;
      const auto s_fam = s_l_tau(fam, tau).s_l;
      if (!le(s_fam, s_sub)) return {false, "S_L dropped on a subfamily: " + show(s_fam) + " vs " + show(s_sub)};
    }
  }
  return {true, std::to_string(trials) + " pairs: M*, linear S_L and key feasibility are monotone"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> criteria{
      {"1 table1 reproduction", table1},   {"2 PIN formula", pin},
      {"3 gap construction", gap},          {"4 M* route vs partition bound", route_vs_partition},
      {"5 order-induced multigraphs", orders}, {"6 tree packing vs partition bound", tutte},
      {"7 M* vs brute force", ilp},         {"8 protocol soundness", soundness},
      {"9 set cover reduction", set_cover}, {"10 monotonicity", monotonicity},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (r.pass ? "PASS " : "FAIL ") << name << ": " << r.detail << " [" << secs << " s]" << std::endl;
    failures += !r.pass;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
