#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace ccdsk {

/// Set of 0-based message (or client) indices.
using IndexSet = boost::dynamic_bitset<>;

IndexSet make_index_set(std::size_t size, const std::vector<std::size_t>& members);
std::vector<std::size_t> members(const IndexSet& s);

/// Clients and the messages each of them initially holds.
///
/// Messages keep their original 0-based labels in [0, labels()). A family
/// built by restrict() may leave some labels unused; universe() is the set of
/// labels held by at least one client and messages() is its size.
class MessageFamily {
 public:
  /// holdings[j] must have labels bits. Coverage of [labels] is not required
  /// here; parse_network() enforces it for files.
  MessageFamily(std::size_t labels, std::vector<IndexSet> holdings);

  /// Convenience constructor from 0-based index lists.
  static MessageFamily from_lists(std::size_t labels, const std::vector<std::vector<std::size_t>>& holdings);

  std::size_t clients() const { return holdings_.size(); }
  std::size_t labels() const { return labels_; }
  std::size_t messages() const { return universe_.count(); }

  const IndexSet& holding(std::size_t client) const { return holdings_[client]; }
  const std::vector<IndexSet>& holdings() const { return holdings_; }
  const IndexSet& universe() const { return universe_; }
  std::vector<std::size_t> universe_list() const { return members(universe_); }
  bool holds(std::size_t client, std::size_t message) const { return holdings_[client][message]; }
  /// Clients holding the message, ascending.
  std::vector<std::size_t> holders(std::size_t message) const;

  /// Keeps only the messages in `keep`; labels are preserved.
  MessageFamily restrict(const IndexSet& keep) const;
  /// Removes one message label.
  MessageFamily without(std::size_t message) const;
  /// Renumbers the universe to 0..messages()-1 in label order.
  MessageFamily compact() const;

  friend bool operator==(const MessageFamily& a, const MessageFamily& b) {
    return a.labels_ == b.labels_ && a.holdings_ == b.holdings_;
  }

 private:
  std::size_t labels_;
  std::vector<IndexSet> holdings_;
  IndexSet universe_;
};

/// Clients as vertices, messages as hyperedges. labels[e] is the message
/// label of edge e; edges appear in label order.
struct Hypergraph {
  std::size_t vertices = 0;
  std::vector<std::vector<std::size_t>> edges;
  std::vector<std::size_t> labels;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;
};

Hypergraph to_hypergraph(const MessageFamily& fam);
/// Inverse of to_hypergraph; `labels` is the label-space size of the result.
MessageFamily from_hypergraph(const Hypergraph& h, std::size_t labels);

/// Parses {"clients": n, "messages": m, "holdings": [[...], ...]} with
/// 1-based indices. Throws InputError on any violation.
MessageFamily parse_network(std::string_view text);
/// Compact, stable rendering; a restricted family is renumbered first.
std::string serialize_network(const MessageFamily& fam);

MessageFamily read_network_file(const std::string& path);

/// Every client pair shares exactly one message; pairs in lexicographic order.
MessageFamily make_pin(std::size_t n);
/// The 15-client cyclic-shift family.
MessageFamily make_example1();
/// Client 1 holds [m]; the other C(m,2) clients hold the distinct pairs.
MessageFamily make_gap(std::size_t m);

}  // namespace ccdsk
