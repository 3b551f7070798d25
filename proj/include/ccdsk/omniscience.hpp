#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ccdsk/network.hpp"

namespace ccdsk {

/// Per-client transmission counts, indexed by 0-based client.
using Allocation = std::vector<std::int64_t>;

struct OmniscienceResult {
  std::size_t m_star = 0;
  Allocation witness;
  /// Client subsets S (nonempty, proper) with a(S) equal to the demand of S,
  /// ascending by bitmask, at most 10. Only filled when n <= 24.
  std::vector<IndexSet> tight_sets;
};

struct Violation {
  IndexSet clients;
  std::int64_t amount = 0;  // demand(S) - a(S) > 0
};

/// Largest n for which 2^n client-subset enumeration is attempted.
inline constexpr std::size_t kMaxEnumeratedClients = 24;

/// Number of messages held by no client outside S. S must be a nonempty
/// proper client subset.
std::size_t demand(const MessageFamily& fam, const IndexSet& S);

/// Exact minimum omniscience length. Among optimal allocations the one
/// returned is lexicographically smallest read from the last client
/// backwards, so load lands on low-numbered clients. Throws SizeGuardError when both the client count and
/// the message count exceed 24.
OmniscienceResult compute_m_star(const MessageFamily& fam);

/// Most violated constraint for `a`, ties to the smallest client bitmask, or
/// nullopt when a is feasible. Enumerates 2^n subsets (n <= 24).
std::optional<Violation> separate(const MessageFamily& fam, const Allocation& a);

/// Feasibility test for a fixed budget on a compact instance, reusable across
/// many instances without reallocating.
///
/// Budget T is feasible iff some allocation of total T satisfies every
/// constraint. The test runs a greedy pass over clients n-1..0 that gives
/// each client the largest amount the already-processed clients leave room
/// for; T is feasible exactly when the amounts sum to T, and at the smallest
/// feasible T they form the lexicographically smallest optimal allocation.
class BudgetSolver {
 public:
  /// holdings[j] lists message positions 0..k-1. Chooses between the 2^n
  /// client table and the 2^k message table, whichever is cheaper.
  void load(std::size_t k, const std::vector<IndexSet>& holdings);
  /// Faster path when k <= 64.
  void load_masks(std::size_t k, const std::vector<std::uint64_t>& holdings);

  bool feasible(std::size_t budget, Allocation* out = nullptr);
  /// Smallest feasible budget, by binary search over [0, k].
  std::size_t minimum(Allocation* out = nullptr);

  bool uses_client_table() const { return client_route_; }

 private:
  void prepare();
  void build_union_table();
  bool feasible_clients(std::size_t budget, Allocation& a);
  bool feasible_messages(std::size_t budget, Allocation& a);

  std::size_t n_ = 0, k_ = 0, words_ = 0;
  std::vector<std::uint64_t> hold_;  // n_ * words_
  bool client_route_ = true;
  bool table_ready_ = false;
  std::vector<std::uint32_t> union_size_;  // 2^n, client route
  std::vector<std::int64_t> partial_;      // 2^n or 2^k scratch
  Allocation scratch_;
};

}  // namespace ccdsk
