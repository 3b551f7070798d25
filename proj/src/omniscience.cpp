#include "ccdsk/omniscience.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

#include "ccdsk/errors.hpp"

namespace ccdsk {

namespace {

constexpr std::size_t kMaxMessageTable = 24;
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

std::vector<std::uint64_t> to_words(const std::vector<IndexSet>& sets, std::size_t k, std::size_t words) {
  std::vector<std::uint64_t> out(sets.size() * words, 0);
  for (std::size_t j = 0; j < sets.size(); ++j)
    for (auto i = sets[j].find_first(); i != IndexSet::npos; i = sets[j].find_next(i)) {
      if (i >= k) throw InputError("holding refers to a message outside the instance");
      out[j * words + i / 64] |= std::uint64_t{1} << (i % 64);
    }
  return out;
}

// sizes[U] = |union of holdings of clients in U| for every client mask U,
// filled by depth-first extension so only n union buffers are live.
void fill_union_sizes(std::size_t n, std::size_t words, const std::vector<std::uint64_t>& hold,
                      std::vector<std::uint32_t>& sizes) {
  sizes.assign(std::size_t{1} << n, 0);
  std::vector<std::uint64_t> stack((n + 1) * words, 0);
  struct Frame {
    std::size_t next;
    std::uint64_t mask;
  };
  std::vector<Frame> frames;
  frames.reserve(n + 1);
  frames.push_back({0, 0});
  while (!frames.empty()) {
    Frame& top = frames.back();
    const std::size_t depth = frames.size() - 1;
    if (top.next >= n) {
      frames.pop_back();
      continue;
    }
    const std::size_t t = top.next++;
    const std::uint64_t mask = top.mask | (std::uint64_t{1} << t);
    const std::uint64_t* parent = &stack[depth * words];
    std::uint64_t* child = &stack[(depth + 1) * words];
    std::uint32_t count = 0;
    for (std::size_t w = 0; w < words; ++w) {
      child[w] = parent[w] | hold[t * words + w];
      count += static_cast<std::uint32_t>(std::popcount(child[w]));
    }
    sizes[mask] = count;
    frames.push_back({t + 1, mask});
  }
}

IndexSet mask_to_set(std::uint64_t mask, std::size_t n) {
  IndexSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if ((mask >> i) & 1) s.set(i);
  return s;
}

}  // namespace

void BudgetSolver::load(std::size_t k, const std::vector<IndexSet>& holdings) {
  n_ = holdings.size();
  k_ = k;
  words_ = std::max<std::size_t>(1, (k + 63) / 64);
  hold_ = to_words(holdings, k, words_);
  prepare();
}

void BudgetSolver::load_masks(std::size_t k, const std::vector<std::uint64_t>& holdings) {
  if (k > 64) throw InputError("load_masks supports at most 64 messages");
  n_ = holdings.size();
  k_ = k;
  words_ = 1;
  hold_ = holdings;
  prepare();
}

void BudgetSolver::prepare() {
  if (n_ == 0) throw InputError("a family needs at least one client");
  table_ready_ = false;
  const double inf = std::numeric_limits<double>::infinity();
  const double client_cost = n_ <= kMaxEnumeratedClients ? static_cast<double>(std::uint64_t{1} << n_) * words_ : inf;
  double message_cost = inf;
  if (k_ <= kMaxMessageTable) {
    message_cost = static_cast<double>(std::uint64_t{1} << k_);
    for (std::size_t j = 0; j < n_; ++j)
      message_cost += 2.0 * static_cast<double>(std::uint64_t{1} << (k_ - std::popcount(hold_[j])));
  }
  if (client_cost == inf && message_cost == inf)
    throw SizeGuardError("omniscience solver needs n <= 24 or m <= 24 (got n=" + std::to_string(n_) +
                         ", m=" + std::to_string(k_) + ")");
  client_route_ = client_cost <= message_cost;
}

void BudgetSolver::build_union_table() {
  fill_union_sizes(n_, words_, hold_, union_size_);
  table_ready_ = true;
}

bool BudgetSolver::feasible(std::size_t budget, Allocation* out) {
  Allocation& a = out ? *out : scratch_;
  a.assign(n_, 0);
  return client_route_ ? feasible_clients(budget, a) : feasible_messages(budget, a);
}

bool BudgetSolver::feasible_clients(std::size_t budget, Allocation& a) {
  if (!table_ready_) build_union_table();
  const std::int64_t offset = static_cast<std::int64_t>(budget) - static_cast<std::int64_t>(k_);
  partial_.assign(std::size_t{1} << n_, 0);
  std::uint64_t done = 0;
  std::int64_t total = 0;
  for (std::size_t j = n_; j-- > 0;) {
    const std::uint64_t bit = std::uint64_t{1} << j;
    std::int64_t best = kInf;
    for (std::uint64_t sub = done;; sub = (sub - 1) & done) {
      best = std::min(best, std::int64_t{union_size_[sub | bit]} + offset - partial_[sub]);
      if (sub == 0) break;
    }
    a[j] = best;
    total += best;
    for (std::uint64_t sub = done;; sub = (sub - 1) & done) {
      partial_[sub | bit] = partial_[sub] + best;
      if (sub == 0) break;
    }
    done |= bit;
  }
  return total == static_cast<std::int64_t>(budget);
}

bool BudgetSolver::feasible_messages(std::size_t budget, Allocation& a) {
  const std::int64_t offset = static_cast<std::int64_t>(budget) - static_cast<std::int64_t>(k_);
  const std::uint64_t full = (std::uint64_t{1} << k_) - 1;
  partial_.assign(std::size_t{1} << k_, 0);
  std::int64_t total = 0;
  for (std::size_t j = n_; j-- > 0;) {
    const std::uint64_t h = hold_[j];
    const std::uint64_t free = full & ~h;
    std::int64_t best = kInf;
    for (std::uint64_t sub = free;; sub = (sub - 1) & free) {
      const std::uint64_t w = h | sub;
      best = std::min(best, std::popcount(w) + offset - partial_[w]);
      if (sub == 0) break;
    }
    a[j] = best;
    total += best;
    if (best > 0) {
      for (std::uint64_t sub = free;; sub = (sub - 1) & free) {
        partial_[h | sub] += best;
        if (sub == 0) break;
      }
    }
  }
  return total == static_cast<std::int64_t>(budget);
}

std::size_t BudgetSolver::minimum(Allocation* out) {
  std::size_t lo = 0, hi = k_;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  if (out && !feasible(lo, out)) throw std::logic_error("budget solver lost feasibility");
  return lo;
}

std::size_t demand(const MessageFamily& fam, const IndexSet& S) {
  const std::size_t n = fam.clients();
  if (S.size() != n) throw InputError("client subset width does not match the client count");
  if (S.none() || S.count() == n) throw InputError("demand is defined for nonempty proper client subsets");
  IndexSet outside(fam.labels());
  for (std::size_t j = 0; j < n; ++j)
    if (!S[j]) outside |= fam.holding(j);
  return fam.messages() - outside.count();
}

OmniscienceResult compute_m_star(const MessageFamily& fam) {
  const MessageFamily c = fam.compact();
  const std::size_t n = c.clients(), k = c.labels();
  OmniscienceResult result;
  BudgetSolver solver;
  // The solver breaks ties towards the front; feeding clients in reverse
  // moves that to the back.
  std::vector<IndexSet> reversed(c.holdings().rbegin(), c.holdings().rend());
  solver.load(k, reversed);
  result.m_star = solver.minimum(&result.witness);
  std::reverse(result.witness.begin(), result.witness.end());

  if (n <= kMaxEnumeratedClients && n >= 2) {
    const std::size_t words = std::max<std::size_t>(1, (k + 63) / 64);
    std::vector<std::uint32_t> sizes;
    fill_union_sizes(n, words, to_words(c.holdings(), k, words), sizes);
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    std::vector<std::int64_t> sums(std::size_t{1} << n, 0);
    for (std::uint64_t s = 1; s < full && result.tight_sets.size() < 10; ++s) {
      const auto low = static_cast<std::size_t>(std::countr_zero(s));
      sums[s] = sums[s & (s - 1)] + result.witness[low];
      const std::int64_t d = static_cast<std::int64_t>(k) - sizes[full ^ s];
      if (sums[s] == d) result.tight_sets.push_back(mask_to_set(s, n));
    }
  }
  return result;
}

std::optional<Violation> separate(const MessageFamily& fam, const Allocation& a) {
  const std::size_t n = fam.clients();
  if (a.size() != n) throw InputError("allocation length does not match the client count");
  if (n > kMaxEnumeratedClients)
    throw SizeGuardError("constraint separation enumerates 2^n subsets and needs n <= 24");
  if (n < 2) return std::nullopt;
  const MessageFamily c = fam.compact();
  const std::size_t k = c.labels();
  const std::size_t words = std::max<std::size_t>(1, (k + 63) / 64);
  std::vector<std::uint32_t> sizes;
  fill_union_sizes(n, words, to_words(c.holdings(), k, words), sizes);
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<std::int64_t> sums(std::size_t{1} << n, 0);
  std::int64_t worst = 0;
  std::uint64_t worst_mask = 0;
  for (std::uint64_t s = 1; s < full; ++s) {
    const auto low = static_cast<std::size_t>(std::countr_zero(s));
    sums[s] = sums[s & (s - 1)] + a[low];
    const std::int64_t gap = static_cast<std::int64_t>(k) - sizes[full ^ s] - sums[s];
    if (gap > worst) {
      worst = gap;
      worst_mask = s;
    }
  }
  if (worst_mask == 0) return std::nullopt;
  return Violation{mask_to_set(worst_mask, n), worst};
}

}  // namespace ccdsk
