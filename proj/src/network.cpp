#include "ccdsk/network.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ccdsk/errors.hpp"

namespace ccdsk {

IndexSet make_index_set(std::size_t size, const std::vector<std::size_t>& indices) {
  IndexSet s(size);
  for (auto i : indices) s.set(i);
  return s;
}

std::vector<std::size_t> members(const IndexSet& s) {
  std::vector<std::size_t> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != IndexSet::npos; i = s.find_next(i)) out.push_back(i);
  return out;
}

MessageFamily::MessageFamily(std::size_t labels, std::vector<IndexSet> holdings)
    : labels_(labels), holdings_(std::move(holdings)), universe_(labels) {
  if (holdings_.empty()) throw InputError("a family needs at least one client");
  for (const auto& h : holdings_) {
    if (h.size() != labels_) throw InputError("holding width does not match the label count");
    universe_ |= h;
  }
}

MessageFamily MessageFamily::from_lists(std::size_t labels,
                                        const std::vector<std::vector<std::size_t>>& holdings) {
  std::vector<IndexSet> sets;
  sets.reserve(holdings.size());
  for (const auto& h : holdings) {
    for (auto e : h)
      if (e >= labels) throw InputError("message index out of range");
    sets.push_back(make_index_set(labels, h));
  }
  return MessageFamily(labels, std::move(sets));
}

std::vector<std::size_t> MessageFamily::holders(std::size_t message) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < holdings_.size(); ++j)
    if (holdings_[j][message]) out.push_back(j);
  return out;
}

MessageFamily MessageFamily::restrict(const IndexSet& keep) const {
  if (keep.size() != labels_) throw InputError("keep set width does not match the label count");
  std::vector<IndexSet> out = holdings_;
  for (auto& h : out) h &= keep;
  return MessageFamily(labels_, std::move(out));
}

MessageFamily MessageFamily::without(std::size_t message) const {
  IndexSet keep(labels_);
  keep.set();
  keep.reset(message);
  return restrict(keep);
}

MessageFamily MessageFamily::compact() const {
  const auto used = universe_list();
  std::vector<IndexSet> out(holdings_.size(), IndexSet(used.size()));
  for (std::size_t j = 0; j < holdings_.size(); ++j)
    for (std::size_t i = 0; i < used.size(); ++i)
      if (holdings_[j][used[i]]) out[j].set(i);
  return MessageFamily(used.size(), std::move(out));
}

Hypergraph to_hypergraph(const MessageFamily& fam) {
  Hypergraph h;
  h.vertices = fam.clients();
  for (auto e : fam.universe_list()) {
    h.edges.push_back(fam.holders(e));
    h.labels.push_back(e);
  }
  return h;
}

MessageFamily from_hypergraph(const Hypergraph& h, std::size_t labels) {
  std::vector<IndexSet> holdings(h.vertices, IndexSet(labels));
  for (std::size_t e = 0; e < h.edges.size(); ++e)
    for (auto v : h.edges[e]) holdings.at(v).set(h.labels[e]);
  return MessageFamily(labels, std::move(holdings));
}

MessageFamily parse_network(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("network file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("clients") || !doc.contains("messages") || !doc.contains("holdings"))
    throw InputError("network file needs keys \"clients\", \"messages\" and \"holdings\"");
  const auto& jc = doc["clients"];
  const auto& jm = doc["messages"];
  const auto& jh = doc["holdings"];
  if (!jc.is_number_integer() || jc.get<long long>() < 1) throw InputError("\"clients\" must be a positive integer");
  if (!jm.is_number_integer() || jm.get<long long>() < 1) throw InputError("\"messages\" must be a positive integer");
  const auto n = jc.get<std::size_t>();
  const auto m = jm.get<std::size_t>();
  if (!jh.is_array() || jh.size() != n) throw InputError("\"holdings\" must list exactly one array per client");

  std::vector<IndexSet> holdings;
  for (std::size_t j = 0; j < n; ++j) {
    if (!jh[j].is_array()) throw InputError("holding of client " + std::to_string(j + 1) + " is not an array");
    IndexSet s(m);
    for (const auto& v : jh[j]) {
      if (!v.is_number_integer()) throw InputError("message indices must be integers");
      const auto idx = v.get<long long>();
      if (idx < 1 || static_cast<std::size_t>(idx) > m)
        throw InputError("message index " + std::to_string(idx) + " of client " + std::to_string(j + 1) +
                         " is out of range 1.." + std::to_string(m));
      if (s[idx - 1])
        throw InputError("client " + std::to_string(j + 1) + " lists message " + std::to_string(idx) + " twice");
      s.set(idx - 1);
    }
    holdings.push_back(std::move(s));
  }
  MessageFamily fam(m, std::move(holdings));
  if (fam.messages() != m) {
    IndexSet missing = ~fam.universe();
    throw InputError("message " + std::to_string(missing.find_first() + 1) + " is held by no client");
  }
  return fam;
}

std::string serialize_network(const MessageFamily& input) {
  const MessageFamily fam = input.messages() == input.labels() ? input : input.compact();
  std::ostringstream out;
  out << "{\n  \"clients\": " << fam.clients() << ",\n  \"messages\": " << fam.labels() << ",\n  \"holdings\": [\n";
  for (std::size_t j = 0; j < fam.clients(); ++j) {
    out << "    [";
    bool first = true;
    for (auto e : members(fam.holding(j))) {
      out << (first ? "" : ", ") << e + 1;
      first = false;
    }
    out << "]" << (j + 1 < fam.clients() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

MessageFamily read_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read network file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

MessageFamily make_pin(std::size_t n) {
  if (n < 2) throw InputError("the pairwise model needs at least 2 clients");
  const std::size_t m = n * (n - 1) / 2;
  std::vector<IndexSet> holdings(n, IndexSet(m));
  std::size_t e = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b, ++e) {
      holdings[a].set(e);
      holdings[b].set(e);
    }
  return MessageFamily(m, std::move(holdings));
}

MessageFamily make_example1() {
  constexpr std::size_t kSize = 15;
  std::vector<std::size_t> base = {5, 7, 10, 11, 13, 14, 15};
  std::vector<IndexSet> holdings;
  for (std::size_t j = 0; j < kSize; ++j) {
    IndexSet s(kSize);
    for (auto label : base) s.set(label - 1);
    holdings.push_back(s);
    for (auto& label : base) label = label % kSize + 1;
  }
  return MessageFamily(kSize, std::move(holdings));
}

MessageFamily make_gap(std::size_t m) {
  if (m < 4 || m % 2 != 0) throw InputError("the gap family needs an even m >= 4");
  std::vector<IndexSet> holdings;
  IndexSet all(m);
  all.set();
  holdings.push_back(all);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) holdings.push_back(make_index_set(m, {a, b}));
  return MessageFamily(m, std::move(holdings));
}

}  // namespace ccdsk
