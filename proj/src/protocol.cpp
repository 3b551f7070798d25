#include "ccdsk/protocol.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "ccdsk/errors.hpp"
#include "ccdsk/omniscience.hpp"
#include "ccdsk/secrecy.hpp"

namespace ccdsk {

using gf::EchelonBasis;
using gf::Matrix;

Matrix LinearProtocol::encoding() const {
  Matrix a(0, coordinates());
  for (const auto& r : rows) a.append_row(r.coeffs);
  return a;
}

gf::Field default_field(std::size_t n) {
  std::uint64_t p = n + 1;
  while (!gf::is_prime(p)) ++p;
  return gf::make_field(static_cast<std::uint32_t>(p), 1);
}

namespace {

void require_large_field(const MessageFamily& fam, const gf::Field& field) {
  if (field.order() <= fam.clients())
    throw InputError("field too small: q=" + std::to_string(field.order()) + " must exceed n=" +
                     std::to_string(fam.clients()));
}

bool everyone_omniscient(const MessageFamily& fam, const gf::Field& field, const std::vector<Row>& rows) {
  const std::size_t target = fam.messages();
  for (std::size_t j = 0; j < fam.clients(); ++j) {
    EchelonBasis basis(field, fam.labels());
    for (const auto& r : rows) basis.insert(r.coeffs);
    std::vector<Element> unit(fam.labels(), 0);
    for (auto e : members(fam.holding(j))) {
      unit[e] = 1;
      basis.insert(unit);
      unit[e] = 0;
    }
    if (basis.rank() != target) return false;
  }
  return true;
}

}  // namespace

LinearProtocol synth_omniscience(const MessageFamily& fam, const gf::Field& field, std::uint64_t seed) {
  require_large_field(fam, field);
  const OmniscienceResult opt = compute_m_star(fam);
  const std::size_t q = field.order();

  std::vector<Row> rows;
  std::size_t global = 0;
  for (std::size_t j = 0; j < fam.clients(); ++j) {
    const auto own = members(fam.holding(j));
    for (std::int64_t r = 0; r < opt.witness[j]; ++r, ++global) {
      const Element x = static_cast<Element>(global % (q - 1) + 1);
      Row row{j, std::vector<Element>(fam.labels(), 0)};
      for (std::size_t e = 0; e < own.size(); ++e) row.coeffs[own[e]] = field.pow(x, e);
      rows.push_back(std::move(row));
    }
  }

  if (!everyone_omniscient(fam, field, rows)) {
    bool done = false;
    for (std::uint64_t attempt = 0; attempt < 64 && !done; ++attempt) {
      std::mt19937_64 rng(seed * 1000003 + attempt);
      std::uniform_int_distribution<Element> pick(0, static_cast<Element>(q - 1));
      for (auto& row : rows)
        for (auto e : members(fam.holding(row.client))) row.coeffs[e] = pick(rng);
      done = everyone_omniscient(fam, field, rows);
    }
    if (!done) throw SynthesisError("no omniscience code found after 64 random draws");
  }
  return LinearProtocol{field, fam.labels(), 1, std::move(rows), Matrix(0, fam.labels())};
}

LinearProtocol synth_sk(const MessageFamily& fam, std::size_t tau, const gf::Field& field, std::uint64_t seed,
                        std::size_t jobs) {
  require_large_field(fam, field);
  const TauEntry entry = s_l_tau(fam, tau, jobs);
  if (!entry.s_l) throw InfeasibleError("infeasible: m < M* + tau");

  const IndexSet keep = make_index_set(fam.labels(), entry.witness);
  LinearProtocol proto = synth_omniscience(fam.restrict(keep), field, seed);

  const Matrix local = proto.encoding().select_columns(entry.witness);
  const Matrix extra = gf::complete_basis(field, local, tau);
  proto.keys = Matrix(tau, fam.labels());
  for (std::size_t i = 0; i < tau; ++i)
    for (std::size_t c = 0; c < entry.witness.size(); ++c) proto.keys(i, entry.witness[c]) = extra(i, c);
  return proto;
}

LinearProtocol synth_chain(const MessageFamily& fam, const gf::Field& field) {
  const auto labels = fam.universe_list();
  if (labels.empty()) throw InputError("family has no messages");
  const std::size_t first = labels.front();
  std::vector<bool> reached(fam.labels(), false);
  std::vector<std::size_t> queue{first};
  reached[first] = true;
  std::vector<Row> rows;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t k = queue[head];
    for (auto c : fam.holders(k))
      for (auto e : members(fam.holding(c))) {
        if (reached[e]) continue;
        reached[e] = true;
        queue.push_back(e);
        Row row{c, std::vector<Element>(fam.labels(), 0)};
        row.coeffs[first] = 1;
        row.coeffs[e] = 1;
        rows.push_back(std::move(row));
      }
  }
  if (queue.size() != labels.size()) throw InputError("chain protocol needs a connected hypergraph");
  Matrix keys(1, fam.labels());
  keys(0, first) = 1;
  return LinearProtocol{field, fam.labels(), 1, std::move(rows), std::move(keys)};
}

std::uint32_t gap_component_order(std::size_t m) {
  if (m < 4 || m % 2 != 0) throw InputError("the gap construction needs an even m >= 4");
  const std::uint64_t clients = m * (m - 1) / 2 + 1;
  for (std::uint64_t q = std::max<std::uint64_t>(4, m - 1);; ++q) {
    std::uint64_t base = 2;
    while (q % base != 0) ++base;
    std::uint64_t v = q;
    while (v % base == 0) v /= base;
    if (v == 1 && q * q > clients) return static_cast<std::uint32_t>(q);
  }
}

LinearProtocol gap_protocol(std::size_t m) {
  const gf::Field field = gf::field_of_order(gap_component_order(m));
  const std::size_t q = field.order();
  const std::size_t coords = 2 * m;
  // Distinct nonzero evaluation points: codes 2, 3, ..., q-1, then 1.
  std::vector<Element> y;
  for (Element v = 2; v < q && y.size() < m - 2; ++v) y.push_back(v);
  if (y.size() < m - 2) y.push_back(1);

  std::vector<Row> rows;
  const Element minus_one = field.neg(1);
  for (std::size_t i = 0; i < m - 2; ++i) {
    Row row{0, std::vector<Element>(coords, 0)};
    row.coeffs[0] = minus_one;
    row.coeffs[2] = field.neg(y[i]);
    row.coeffs[2 * (i + 2)] = 1;
    rows.push_back(std::move(row));
  }
  Matrix keys(2, coords);
  keys(0, 2 * (m - 2)) = 1;
  keys(1, 2 * (m - 1)) = 1;
  return LinearProtocol{field, m, 2, std::move(rows), std::move(keys)};
}

std::vector<std::size_t> held_coordinates(const MessageFamily& fam, const LinearProtocol& proto, std::size_t client) {
  std::vector<std::size_t> out;
  for (auto e : members(fam.holding(client)))
    for (std::size_t c = 0; c < proto.split; ++c) out.push_back(e * proto.split + c);
  return out;
}

Matrix decode_targets(const MessageFamily& fam, const LinearProtocol& proto) {
  if (!proto.is_omniscience()) return proto.keys;
  Matrix out(0, proto.coordinates());
  std::vector<Element> unit(proto.coordinates(), 0);
  for (auto e : fam.universe_list())
    for (std::size_t c = 0; c < proto.split; ++c) {
      unit[e * proto.split + c] = 1;
      out.append_row(unit);
      unit[e * proto.split + c] = 0;
    }
  return out;
}

void check_shape(const MessageFamily& fam, const LinearProtocol& proto) {
  if (proto.split == 0) throw InputError("split factor must be positive");
  if (proto.messages != fam.labels())
    throw InputError("protocol has " + std::to_string(proto.messages) + " messages but the network has " +
                     std::to_string(fam.labels()));
  if (proto.rows.size() % proto.split != 0) throw InputError("row count is not a multiple of the split factor");
  for (std::size_t i = 0; i < proto.rows.size(); ++i) {
    const auto& r = proto.rows[i];
    if (r.client >= fam.clients()) throw InputError("row " + std::to_string(i + 1) + " names an unknown client");
    if (r.coeffs.size() != proto.coordinates())
      throw InputError("row " + std::to_string(i + 1) + " has the wrong number of coefficients");
    for (auto v : r.coeffs)
      if (!proto.field.contains(v)) throw InputError("coefficient outside the field");
    if (r.client != proto.rows[i - i % proto.split].client)
      throw InputError("rows of one transmission must come from the same client");
  }
  if (proto.keys.cols() != proto.coordinates() && proto.keys.rows() > 0)
    throw InputError("key rows have the wrong number of coefficients");
  for (std::size_t i = 0; i < proto.keys.rows(); ++i)
    for (auto v : proto.keys.row(i))
      if (!proto.field.contains(v)) throw InputError("key coefficient outside the field");
}

namespace {

void insert_units(EchelonBasis& basis, std::size_t coords, const std::vector<std::size_t>& held) {
  std::vector<Element> unit(coords, 0);
  for (auto c : held) {
    unit[c] = 1;
    basis.insert(unit);
    unit[c] = 0;
  }
}

}  // namespace

AlgebraicReport check_algebraic(const MessageFamily& fam, const LinearProtocol& proto) {
  check_shape(fam, proto);
  const auto& field = proto.field;
  const std::size_t coords = proto.coordinates();
  AlgebraicReport report;

  for (std::size_t t = 0; t < proto.transmissions() && report.realizable.pass; ++t) {
    const std::size_t client = proto.rows[t * proto.split].client;
    EchelonBasis basis(field, coords);
    for (std::size_t r = 0; r < t * proto.split; ++r) basis.insert(proto.rows[r].coeffs);
    insert_units(basis, coords, held_coordinates(fam, proto, client));
    for (std::size_t c = 0; c < proto.split; ++c)
      if (!basis.contains(proto.rows[t * proto.split + c].coeffs)) {
        report.realizable = {false, "transmission " + std::to_string(t + 1) + " uses messages client " +
                                        std::to_string(client + 1) + " cannot compute"};
        break;
      }
  }

  const Matrix targets = decode_targets(fam, proto);
  for (std::size_t j = 0; j < fam.clients() && report.agreement.pass; ++j) {
    EchelonBasis basis(field, coords);
    for (const auto& r : proto.rows) basis.insert(r.coeffs);
    insert_units(basis, coords, held_coordinates(fam, proto, j));
    for (std::size_t i = 0; i < targets.rows(); ++i)
      if (!basis.contains(targets.row(i))) {
        report.agreement = {false, "client " + std::to_string(j + 1) + " cannot compute " +
                                       (proto.is_omniscience() ? "message coordinate " : "key ") +
                                       std::to_string(i + 1)};
        break;
      }
  }

  const Matrix a = proto.encoding();
  const std::size_t rank_k = proto.keys.rows() == 0 ? 0 : gf::rank(field, proto.keys);
  if (rank_k != proto.tau())
    report.uniformity = {false, "key rows have rank " + std::to_string(rank_k) + " < " + std::to_string(proto.tau())};
  if (proto.tau() > 0) {
    const std::size_t rank_a = gf::rank(field, a);
    const std::size_t joint = gf::rank(field, a.stacked(proto.keys));
    if (joint != rank_a + rank_k)
      report.independence = {false, "rank[A;K] = " + std::to_string(joint) + " but rank A + rank K = " +
                                        std::to_string(rank_a + rank_k)};
  }
  return report;
}

std::optional<ClientDecoder> make_decoder(const MessageFamily& fam, const LinearProtocol& proto, std::size_t client) {
  const std::size_t coords = proto.coordinates();
  ClientDecoder dec;
  dec.client = client;
  dec.held = held_coordinates(fam, proto, client);
  EchelonBasis basis(proto.field, coords, true);
  for (const auto& r : proto.rows) basis.insert(r.coeffs);
  insert_units(basis, coords, dec.held);
  const Matrix targets = decode_targets(fam, proto);
  const std::size_t t = proto.rows.size();
  for (std::size_t i = 0; i < targets.rows(); ++i) {
    auto comb = basis.express(targets.row(i));
    if (!comb) return std::nullopt;
    dec.from_rows.emplace_back(comb->begin(), comb->begin() + static_cast<std::ptrdiff_t>(t));
    dec.from_held.emplace_back(comb->begin() + static_cast<std::ptrdiff_t>(t), comb->end());
  }
  return dec;
}

std::vector<Element> run_decoder(const gf::Field& field, const ClientDecoder& dec, const std::vector<Element>& own,
                                 const std::vector<Element>& transcript) {
  std::vector<Element> out(dec.from_rows.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    Element acc = 0;
    const auto& fr = dec.from_rows[i];
    for (std::size_t r = 0; r < fr.size(); ++r)
      if (fr[r] != 0) acc = field.fma(fr[r], transcript[r], acc);
    const auto& fh = dec.from_held[i];
    for (std::size_t c = 0; c < fh.size(); ++c)
      if (fh[c] != 0) acc = field.fma(fh[c], own[dec.held[c]], acc);
    out[i] = acc;
  }
  return out;
}

std::vector<Element> transcript_of(const LinearProtocol& proto, const std::vector<Element>& x) {
  return gf::apply(proto.field, proto.encoding(), x);
}

std::vector<Element> decode(const MessageFamily& fam, const LinearProtocol& proto, std::size_t client,
                            const std::vector<Element>& own, const std::vector<Element>& transcript) {
  check_shape(fam, proto);
  if (client >= fam.clients()) throw InputError("unknown client");
  if (own.size() != proto.coordinates() || transcript.size() != proto.rows.size())
    throw InputError("observation has the wrong length");
  const auto dec = make_decoder(fam, proto, client);
  if (!dec) throw VerificationError("client " + std::to_string(client + 1) + " cannot decode");
  return run_decoder(proto.field, *dec, own, transcript);
}

}  // namespace ccdsk
