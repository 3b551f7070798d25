#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccdsk/network.hpp"
#include "ccdsk/protocol.hpp"

namespace ccdsk {

/// Counts of (key tuple, transcript) pairs over an enumeration. Keys and
/// transcripts are mixed-radix indices; the transcript index only encodes a
/// maximal independent subset of rows, which determines the rest.
class JointHistogram {
 public:
  JointHistogram(std::uint64_t key_space, std::uint64_t transcript_space);

  void add(std::uint64_t key, std::uint64_t transcript, std::uint64_t count = 1);
  void merge(const JointHistogram& other);

  std::uint64_t key_space() const { return key_space_; }
  std::uint64_t transcript_space() const { return transcript_space_; }
  std::uint64_t total() const { return total_; }
  bool dense() const { return dense_; }
  std::uint64_t count(std::uint64_t key, std::uint64_t transcript) const;

  /// Calls f(key, transcript, count) for every nonzero cell, in ascending
  /// (key, transcript) order.
  template <typename F>
  void for_each(F&& f) const {
    if (dense_) {
      for (std::uint64_t i = 0; i < cells_.size(); ++i)
        if (cells_[i] != 0) f(i / transcript_space_, i % transcript_space_, std::uint64_t{cells_[i]});
      return;
    }
    for (auto i : sorted_sparse_keys()) f(i / transcript_space_, i % transcript_space_, sparse_.at(i));
  }

 private:
  std::vector<std::uint64_t> sorted_sparse_keys() const;

  std::uint64_t key_space_, transcript_space_;
  bool dense_;
  std::vector<std::uint32_t> cells_;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
  std::uint64_t total_ = 0;
};

__extension__ typedef unsigned __int128 Wide;

struct HistogramCell {
  std::uint64_t key = 0;
  std::uint64_t transcript = 0;
  std::uint64_t count = 0;
  /// Independence requires count * total == product of the two marginals.
  Wide marginal_product = 0;
  std::uint64_t total = 0;
};

struct MutualInformationVerdict {
  bool zero = true;
  /// Cell maximizing |count * total - marginal product|, ties to the
  /// smallest (key, transcript); set only when zero is false.
  std::optional<HistogramCell> worst;
};

/// Exact test of I(key; transcript) = 0 via the factorization identity.
/// Throws InputError on an empty histogram.
MutualInformationVerdict mutual_information_exact(const JointHistogram& hist);

inline constexpr std::uint64_t kDefaultStateLimit = std::uint64_t{1} << 22;

struct OracleOptions {
  std::uint64_t state_limit = kDefaultStateLimit;
  std::size_t jobs = 1;
};

struct OracleVerdict {
  bool agreement = true;
  bool uniformity = true;
  bool independence = true;
  std::uint64_t assignments = 0;  // enumerated states (support coordinates only)
  std::size_t support = 0;        // coordinates that appear in some row or key
  std::string agreement_detail, uniformity_detail, independence_detail;
  /// Assignment (full coordinate vector) witnessing an agreement failure.
  std::vector<Element> counterexample;

  bool ok() const { return agreement && uniformity && independence; }
};

/// Enumerates every assignment of the coordinates the protocol touches and
/// checks key agreement with each client's decoder, exact key uniformity,
/// and exact key/transcript independence. Coordinates outside the support
/// are independent of everything observed and are left at zero. Throws
/// SizeGuardError when q^support exceeds the state limit.
OracleVerdict verify_exhaustive(const MessageFamily& fam, const LinearProtocol& proto, const OracleOptions& options = {});

/// Index -> tuple of codes, least significant first.
std::vector<Element> index_to_tuple(std::uint64_t index, std::uint64_t q, std::size_t length);

}  // namespace ccdsk
