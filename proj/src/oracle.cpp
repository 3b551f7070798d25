#include "ccdsk/oracle.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <thread>

#include "ccdsk/errors.hpp"

namespace ccdsk {

namespace {

constexpr std::uint64_t kDenseCells = std::uint64_t{1} << 25;

// q^e, or nullopt past 2^62.
std::optional<std::uint64_t> checked_power(std::uint64_t q, std::size_t e) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (v > (std::uint64_t{1} << 62) / q) return std::nullopt;
    v *= q;
  }
  return v;
}

std::string tuple_text(const std::vector<Element>& t) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
  out << ")";
  return out.str();
}

}  // namespace

std::vector<Element> index_to_tuple(std::uint64_t index, std::uint64_t q, std::size_t length) {
  std::vector<Element> out(length, 0);
  for (std::size_t i = 0; i < length; ++i) {
    out[i] = static_cast<Element>(index % q);
    index /= q;
  }
  return out;
}

JointHistogram::JointHistogram(std::uint64_t key_space, std::uint64_t transcript_space)
    : key_space_(key_space), transcript_space_(transcript_space) {
  dense_ = transcript_space_ != 0 && key_space_ <= kDenseCells / transcript_space_;
  if (dense_) cells_.assign(key_space_ * transcript_space_, 0);
}

void JointHistogram::add(std::uint64_t key, std::uint64_t transcript, std::uint64_t count) {
  const std::uint64_t i = key * transcript_space_ + transcript;
  if (dense_)
    cells_[i] += static_cast<std::uint32_t>(count);
  else
    sparse_[i] += count;
  total_ += count;
}

void JointHistogram::merge(const JointHistogram& other) {
  if (other.key_space_ != key_space_ || other.transcript_space_ != transcript_space_)
    throw std::invalid_argument("cannot merge histograms of different shapes");
  if (dense_) {
    for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
  } else {
    for (const auto& [k, c] : other.sparse_) sparse_[k] += c;
  }
  total_ += other.total_;
}

std::uint64_t JointHistogram::count(std::uint64_t key, std::uint64_t transcript) const {
  const std::uint64_t i = key * transcript_space_ + transcript;
  if (dense_) return cells_[i];
  const auto it = sparse_.find(i);
  return it == sparse_.end() ? 0 : it->second;
}

std::vector<std::uint64_t> JointHistogram::sorted_sparse_keys() const {
  std::vector<std::uint64_t> keys;
  keys.reserve(sparse_.size());
  for (const auto& kv : sparse_) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  return keys;
}

MutualInformationVerdict mutual_information_exact(const JointHistogram& hist) {
  if (hist.total() == 0) throw InputError("empty histogram");
  const std::uint64_t total = hist.total();
  std::unordered_map<std::uint64_t, std::uint64_t> by_key, by_transcript;
  std::uint64_t nonzero = 0;
  hist.for_each([&](std::uint64_t k, std::uint64_t t, std::uint64_t c) {
    by_key[k] += c;
    by_transcript[t] += c;
    ++nonzero;
  });

  MutualInformationVerdict verdict;
  Wide worst = 0;
  auto consider = [&](std::uint64_t k, std::uint64_t t, std::uint64_t c) {
    const Wide product = Wide{by_key[k]} * by_transcript[t];
    const Wide scaled = Wide{c} * total;
    const Wide gap = scaled > product ? scaled - product : product - scaled;
    if (gap == 0) return;
    const bool better = gap > worst || (gap == worst && verdict.worst &&
                                        std::pair(k, t) < std::pair(verdict.worst->key, verdict.worst->transcript));
    if (better) {
      worst = gap;
      verdict.zero = false;
      verdict.worst = HistogramCell{k, t, c, product, total};
    }
  };
  hist.for_each(consider);

  // Cells with zero count but positive marginals also break the identity.
  if (Wide{nonzero} != Wide{by_key.size()} * by_transcript.size()) {
    std::vector<std::uint64_t> keys, transcripts;
    for (const auto& kv : by_key) keys.push_back(kv.first);
    for (const auto& kv : by_transcript) transcripts.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    std::sort(transcripts.begin(), transcripts.end());
    const bool full_scan = Wide{keys.size()} * transcripts.size() <= (Wide{1} << 26);
    for (auto k : keys) {
      bool found = false;
      for (auto t : transcripts)
        if (hist.count(k, t) == 0) {
          consider(k, t, 0);
          found = true;
          if (!full_scan) break;
        }
      if (found && !full_scan) break;
    }
  }
  return verdict;
}

namespace {

struct Update {
  std::size_t index;
  Element coeff;
};

struct ThreadResult {
  JointHistogram hist;
  std::uint64_t first_bad = std::numeric_limits<std::uint64_t>::max();
  std::size_t bad_client = 0;
};

}  // namespace

OracleVerdict verify_exhaustive(const MessageFamily& fam, const LinearProtocol& proto, const OracleOptions& options) {
  check_shape(fam, proto);
  const auto& field = proto.field;
  const std::uint64_t q = field.order();
  const std::size_t coords = proto.coordinates();
  const gf::Matrix a = proto.encoding();
  const gf::Matrix targets = decode_targets(fam, proto);
  const std::size_t tau = proto.tau();

  std::vector<bool> used(coords, false);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < coords; ++c) used[c] = used[c] || a(r, c) != 0;
  for (std::size_t r = 0; r < targets.rows(); ++r)
    for (std::size_t c = 0; c < coords; ++c) used[c] = used[c] || targets(r, c) != 0;
  std::vector<std::size_t> support;
  for (std::size_t c = 0; c < coords; ++c)
    if (used[c]) support.push_back(c);

  OracleVerdict verdict;
  verdict.support = support.size();
  const auto states = checked_power(q, support.size());
  if (!states || *states > options.state_limit)
    throw SizeGuardError("exhaustive verification needs q^support <= " + std::to_string(options.state_limit) +
                         " (q=" + std::to_string(q) + ", support=" + std::to_string(support.size()) + ")");
  const auto key_space = checked_power(q, tau);
  if (!key_space || *key_space > (std::uint64_t{1} << 32))
    throw SizeGuardError("key space too large for exhaustive verification");

  // Rows that determine the whole transcript.
  std::vector<std::size_t> basis_rows;
  {
    gf::EchelonBasis basis(field, coords);
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (basis.insert(a.row(r))) basis_rows.push_back(r);
  }
  const std::uint64_t transcript_space = *checked_power(q, basis_rows.size());

  std::vector<ClientDecoder> decoders;
  for (std::size_t j = 0; j < fam.clients(); ++j) {
    auto dec = make_decoder(fam, proto, j);
    if (dec) {
      decoders.push_back(std::move(*dec));
      continue;
    }
    if (!verdict.agreement) continue;
    // Two assignments the client cannot tell apart but whose targets differ.
    gf::Matrix view = a;
    std::vector<Element> unit(coords, 0);
    for (auto c : held_coordinates(fam, proto, j)) {
      unit[c] = 1;
      view.append_row(unit);
      unit[c] = 0;
    }
    const gf::Matrix null = gf::nullspace(field, view);
    for (std::size_t i = 0; i < null.rows() && verdict.agreement; ++i) {
      const auto v = null.row_vector(i);
      const auto diff = gf::apply(field, targets, v);
      if (std::any_of(diff.begin(), diff.end(), [](Element e) { return e != 0; })) {
        verdict.agreement = false;
        verdict.counterexample = v;
        verdict.agreement_detail = "client " + std::to_string(j + 1) +
                                   " sees the same values under the all-zero assignment and " + tuple_text(v) +
                                   " but the targets differ";
      }
    }
  }

  std::vector<std::vector<Update>> row_updates(support.size()), key_updates(support.size());
  for (std::size_t s = 0; s < support.size(); ++s) {
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (a(r, support[s]) != 0) row_updates[s].push_back({r, a(r, support[s])});
    for (std::size_t i = 0; i < targets.rows(); ++i)
      if (targets(i, support[s]) != 0) key_updates[s].push_back({i, targets(i, support[s])});
  }

  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::uint64_t>(options.jobs, *states));
  std::vector<ThreadResult> results;
  for (std::size_t t = 0; t < jobs; ++t) results.push_back({JointHistogram(*key_space, transcript_space)});

  auto run = [&](std::size_t t) {
    ThreadResult& res = results[t];
    const std::uint64_t begin = *states / jobs * t + std::min<std::uint64_t>(t, *states % jobs);
    const std::uint64_t end = begin + *states / jobs + (t < *states % jobs ? 1 : 0);
    if (begin >= end) return;
    std::vector<Element> x(coords, 0), digits = index_to_tuple(begin, q, support.size());
    for (std::size_t s = 0; s < support.size(); ++s) x[support[s]] = digits[s];
    std::vector<Element> transcript = gf::apply(field, a, x);
    std::vector<Element> reference = gf::apply(field, targets, x);
    std::vector<Element> out(targets.rows(), 0);

    auto shift = [&](std::size_t s, Element delta) {
      for (const auto& u : row_updates[s]) transcript[u.index] = field.fma(u.coeff, delta, transcript[u.index]);
      for (const auto& u : key_updates[s]) reference[u.index] = field.fma(u.coeff, delta, reference[u.index]);
    };

    for (std::uint64_t index = begin; index < end; ++index) {
      if (index != begin) {
        for (std::size_t s = 0; s < support.size(); ++s) {
          const Element old = digits[s];
          const Element now = old + 1 == q ? 0 : old + 1;
          digits[s] = now;
          x[support[s]] = now;
          shift(s, field.sub(now, old));
          if (now != 0) break;
        }
      }
      if (res.first_bad == std::numeric_limits<std::uint64_t>::max()) {
        for (const auto& dec : decoders) {
          for (std::size_t i = 0; i < out.size(); ++i) {
            Element acc = 0;
            const auto& fr = dec.from_rows[i];
            for (std::size_t r = 0; r < fr.size(); ++r)
              if (fr[r] != 0) acc = field.fma(fr[r], transcript[r], acc);
            const auto& fh = dec.from_held[i];
            for (std::size_t c = 0; c < fh.size(); ++c)
              if (fh[c] != 0) acc = field.fma(fh[c], x[dec.held[c]], acc);
            out[i] = acc;
          }
          if (out != reference) {
            res.first_bad = index;
            res.bad_client = dec.client;
            break;
          }
        }
      }
      std::uint64_t key = 0, tr = 0;
      if (tau > 0)
        for (std::size_t i = tau; i-- > 0;) key = key * q + reference[i];
      for (std::size_t i = basis_rows.size(); i-- > 0;) tr = tr * q + transcript[basis_rows[i]];
      res.hist.add(key, tr);
    }
  };

  if (jobs == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(run, t);
    for (auto& th : threads) th.join();
  }

  JointHistogram hist = std::move(results[0].hist);
  for (std::size_t t = 1; t < jobs; ++t) hist.merge(results[t].hist);
  verdict.assignments = hist.total();

  for (const auto& res : results) {
    if (res.first_bad == std::numeric_limits<std::uint64_t>::max()) continue;
    if (verdict.agreement) {
      std::vector<Element> x(coords, 0);
      const auto digits = index_to_tuple(res.first_bad, q, support.size());
      for (std::size_t s = 0; s < support.size(); ++s) x[support[s]] = digits[s];
      verdict.agreement = false;
      verdict.counterexample = x;
      verdict.agreement_detail = "client " + std::to_string(res.bad_client + 1) + " decodes a wrong " +
                                 (proto.is_omniscience() ? "message vector" : "key") + " at assignment " +
                                 tuple_text(x);
    }
    break;
  }

  if (tau > 0) {
    std::vector<std::uint64_t> marginal(*key_space, 0);
    hist.for_each([&](std::uint64_t k, std::uint64_t, std::uint64_t c) { marginal[k] += c; });
    for (std::uint64_t k = 0; k < *key_space; ++k)
      if (Wide{marginal[k]} * *key_space != Wide{hist.total()}) {
        verdict.uniformity = false;
        verdict.uniformity_detail = "key " + tuple_text(index_to_tuple(k, q, tau)) + " occurs " +
                                    std::to_string(marginal[k]) + " times out of " + std::to_string(hist.total());
        break;
      }
    const auto mi = mutual_information_exact(hist);
    if (!mi.zero) {
      const auto& w = *mi.worst;
      verdict.independence = false;
      const auto basis_values = index_to_tuple(w.transcript, q, basis_rows.size());
      verdict.independence_detail = "cell key=" + tuple_text(index_to_tuple(w.key, q, tau)) +
                                    " transcript-basis=" + tuple_text(basis_values) + " count=" +
                                    std::to_string(w.count) + " but marginals give " +
                                    std::to_string(static_cast<std::uint64_t>(w.marginal_product)) + "/" +
                                    std::to_string(w.total);
    }
  }
  return verdict;
}

}  // namespace ccdsk
