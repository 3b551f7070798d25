#include "ccdsk/secrecy.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "ccdsk/errors.hpp"
#include "ccdsk/omniscience.hpp"

namespace ccdsk {

bool sk_feasible(const MessageFamily& fam, std::size_t tau) {
  return compute_m_star(fam).m_star + tau <= fam.messages();
}

bool is_tau_critical(const MessageFamily& fam, std::size_t tau) {
  const std::size_t m_star = compute_m_star(fam).m_star;
  if (m_star + tau != fam.messages()) return false;
  for (auto e : fam.universe_list())
    if (compute_m_star(fam.without(e)).m_star != m_star) return false;
  return true;
}

namespace {

constexpr std::uint64_t kNotFound = std::numeric_limits<std::uint64_t>::max();

// Subset search on the compact instance: positions 0..k-1 stand for the
// universe labels in ascending order.
class SubsetSearch {
 public:
  SubsetSearch(const MessageFamily& compact, std::size_t tau) : tau_(tau), n_(compact.clients()), k_(compact.labels()) {
    hold_.assign(n_, 0);
    shared_.assign(n_, 0);
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t e = 0; e < k_; ++e)
        if (compact.holds(j, e)) hold_[j] |= std::uint64_t{1} << e;
    // Degree prune only counts messages with at least two holders.
    for (std::size_t e = 0; e < k_; ++e) {
      std::size_t count = 0;
      for (std::size_t j = 0; j < n_; ++j) count += (hold_[j] >> e) & 1;
      if (count >= 2)
        for (std::size_t j = 0; j < n_; ++j) shared_[j] |= hold_[j] & (std::uint64_t{1} << e);
    }
  }

  // Each worker owns one solver and scratch buffer.
  struct Worker {
    BudgetSolver solver;
    std::vector<std::uint64_t> masks;
  };

  bool passes(std::uint64_t keep, std::size_t size, Worker& w) const {
    if (n_ >= 2)
      for (std::size_t j = 0; j < n_; ++j)
        if (static_cast<std::size_t>(std::popcount(shared_[j] & keep)) < tau_) return false;
    w.masks.assign(n_, 0);
    std::size_t pos = 0;
    for (std::uint64_t rest = keep; rest != 0; rest &= rest - 1, ++pos) {
      const std::uint64_t bit = rest & (~rest + 1);
      for (std::size_t j = 0; j < n_; ++j)
        if (hold_[j] & bit) w.masks[j] |= std::uint64_t{1} << pos;
    }
    w.solver.load_masks(size, w.masks);
    return w.solver.feasible(size - tau_);
  }

  // Index (in lexicographic order) of the first passing subset of the given
  // size, and the subset itself.
  std::pair<std::uint64_t, std::uint64_t> first_of_size(std::size_t size, std::size_t jobs) const {
    std::atomic<std::uint64_t> best{kNotFound};
    std::vector<std::uint64_t> found(jobs, 0);
    auto run = [&](std::size_t t) {
      Worker w;
      std::vector<std::size_t> c(size);
      for (std::size_t i = 0; i < size; ++i) c[i] = i;
      for (std::uint64_t index = 0;; ++index) {
        if (index >= best.load(std::memory_order_relaxed)) return;
        if (index % jobs == t) {
          std::uint64_t keep = 0;
          for (auto p : c) keep |= std::uint64_t{1} << p;
          if (passes(keep, size, w)) {
            found[t] = keep;
            std::uint64_t cur = best.load();
            while (index < cur && !best.compare_exchange_weak(cur, index)) {
            }
            return;
          }
        }
        // Advance to the next combination.
        std::size_t i = size;
        while (i > 0 && c[i - 1] == k_ - size + i - 1) --i;
        if (i == 0) return;
        ++c[i - 1];
        for (std::size_t j = i; j < size; ++j) c[j] = c[j - 1] + 1;
      }
    };
    if (jobs == 1) {
      run(0);
    } else {
      std::vector<std::thread> threads;
      for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(run, t);
      for (auto& th : threads) th.join();
    }
    const std::uint64_t index = best.load();
    if (index == kNotFound) return {kNotFound, 0};
    return {index, found[index % jobs]};
  }

 private:
  std::size_t tau_, n_, k_;
  std::vector<std::uint64_t> hold_, shared_;
};

}  // namespace

TauEntry s_l_tau(const MessageFamily& fam, std::size_t tau, std::size_t jobs) {
  if (tau < 1) throw InputError("tau must be at least 1");
  jobs = std::max<std::size_t>(1, jobs);
  TauEntry entry;
  entry.tau = tau;
  const std::size_t m = fam.messages();
  if (compute_m_star(fam).m_star + tau > m) return entry;
  if (m > kMaxSearchMessages)
    throw SizeGuardError("minimum critical subfamily search needs m <= 24 (got m=" + std::to_string(m) + ")");

  const auto labels = fam.universe_list();
  const SubsetSearch search(fam.compact(), tau);
  for (std::size_t size = tau; size <= m; ++size) {
    const auto [index, keep] = search.first_of_size(size, jobs);
    if (index == kNotFound) continue;
    entry.s_l = size - tau;
    for (std::size_t p = 0; p < m; ++p)
      if ((keep >> p) & 1) entry.witness.push_back(labels[p]);
    return entry;
  }
  throw std::logic_error("feasible instance without an inherently connected subfamily");
}

SetCoverInstance parse_set_cover(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("set-cover file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("universe") || !doc.contains("subsets"))
    throw InputError("set-cover file needs keys \"universe\" and \"subsets\"");
  const auto& ju = doc["universe"];
  const auto& js = doc["subsets"];
  if (!ju.is_number_integer() || ju.get<long long>() < 1) throw InputError("\"universe\" must be a positive integer");
  if (!js.is_array()) throw InputError("\"subsets\" must be an array");
  SetCoverInstance inst;
  inst.universe = ju.get<std::size_t>();
  for (const auto& s : js) {
    if (!s.is_array()) throw InputError("each subset must be an array");
    std::vector<std::size_t> out;
    for (const auto& v : s) {
      if (!v.is_number_integer()) throw InputError("set elements must be integers");
      const auto x = v.get<long long>();
      if (x < 1 || static_cast<std::size_t>(x) > inst.universe)
        throw InputError("set element " + std::to_string(x) + " is out of range");
      out.push_back(static_cast<std::size_t>(x - 1));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    inst.subsets.push_back(std::move(out));
  }
  return inst;
}

SetCoverInstance read_set_cover_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read set-cover file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_set_cover(buf.str());
}

MessageFamily reduce_set_cover(const SetCoverInstance& inst) {
  if (inst.universe == 0) throw InputError("set cover needs a nonempty universe");
  const std::size_t k = inst.subsets.size();
  std::vector<IndexSet> holdings(inst.universe + 1, IndexSet(k));
  std::vector<bool> covered(inst.universe, false);
  for (std::size_t j = 0; j < k; ++j) {
    for (auto v : inst.subsets[j]) {
      if (v >= inst.universe) throw InputError("set element out of range");
      holdings[v].set(j);
      covered[v] = true;
    }
    holdings[inst.universe].set(j);
  }
  for (std::size_t v = 0; v < inst.universe; ++v)
    if (!covered[v]) throw InputError("element " + std::to_string(v + 1) + " is not covered by any subset");
  return MessageFamily(k, std::move(holdings));
}

std::size_t min_cover_via_reduction(const SetCoverInstance& inst, std::size_t jobs) {
  const TauEntry entry = s_l_tau(reduce_set_cover(inst), 1, jobs);
  if (!entry.s_l) throw std::logic_error("reduced set-cover family is disconnected");
  return *entry.s_l + 1;
}

}  // namespace ccdsk
