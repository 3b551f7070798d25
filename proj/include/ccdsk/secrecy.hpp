#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "ccdsk/network.hpp"

namespace ccdsk {

/// S_L for one key count. s_l is empty when the keys cannot be generated.
struct TauEntry {
  std::size_t tau = 0;
  std::optional<std::size_t> s_l;
  /// Message labels of the minimum tau-critical subfamily (empty when s_l is).
  std::vector<std::size_t> witness;
};

/// Largest message count the subset search will enumerate.
inline constexpr std::size_t kMaxSearchMessages = 24;

bool sk_feasible(const MessageFamily& fam, std::size_t tau);

/// messages - M* == tau, and deleting any single message keeps M*.
bool is_tau_critical(const MessageFamily& fam, std::size_t tau);

/// Minimum number of linear transmissions for tau keys: the smallest message
/// subset whose restriction is inherently tau-connected, minus tau. Subsets
/// are tried by increasing size, lexicographically within a size, so the
/// witness is the first such subset. `jobs` worker threads split each size
/// class; the result does not depend on it. Throws SizeGuardError when a
/// feasible instance has more than 24 messages.
TauEntry s_l_tau(const MessageFamily& fam, std::size_t tau, std::size_t jobs = 1);

/// Elements are 0-based in memory, 1-based in files.
struct SetCoverInstance {
  std::size_t universe = 0;
  std::vector<std::vector<std::size_t>> subsets;
};

/// Parses {"universe": u, "subsets": [[...], ...]}. Throws InputError on an
/// empty universe, out-of-range elements, or subsets that do not cover.
SetCoverInstance parse_set_cover(std::string_view text);
SetCoverInstance read_set_cover_file(const std::string& path);

/// Clients are the elements plus one extra client (the last) that joins every
/// subset; messages are the subsets.
MessageFamily reduce_set_cover(const SetCoverInstance& inst);

/// Minimum cover size, read off the reduced family as S_L + 1.
std::size_t min_cover_via_reduction(const SetCoverInstance& inst, std::size_t jobs = 1);

}  // namespace ccdsk
