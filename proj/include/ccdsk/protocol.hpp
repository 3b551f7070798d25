#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccdsk/finite_field.hpp"
#include "ccdsk/network.hpp"

namespace ccdsk {

using gf::Element;

/// One encoded row sent by `client`, as coefficients on message coordinates.
struct Row {
  std::size_t client = 0;
  std::vector<Element> coeffs;

  friend bool operator==(const Row&, const Row&) = default;
};

/// Linear protocol over GF(q). With split = 1 every message is one field
/// symbol. With split = s > 1 (vector-linear) message j has components at
/// coordinates j*s .. j*s+s-1 and every s consecutive rows form one
/// transmission, all from the same client.
///
/// Rows are stored fully expanded in message coordinates; keys is a
/// tau x coordinates matrix. A protocol without key rows is an omniscience
/// protocol.
struct LinearProtocol {
  gf::Field field;
  std::size_t messages = 0;
  std::size_t split = 1;
  std::vector<Row> rows;
  gf::Matrix keys;

  std::size_t coordinates() const { return messages * split; }
  std::size_t transmissions() const { return split == 0 ? 0 : rows.size() / split; }
  std::size_t tau() const { return keys.rows(); }
  bool is_omniscience() const { return keys.rows() == 0; }
  gf::Matrix encoding() const;

  friend bool operator==(const LinearProtocol& a, const LinearProtocol& b) {
    return a.field == b.field && a.messages == b.messages && a.split == b.split && a.rows == b.rows &&
           a.keys == b.keys;
  }
};

/// Smallest prime field with more than n elements.
gf::Field default_field(std::size_t n);

/// Omniscience in exactly M* rows, client j sending a_j of them. Throws
/// InputError when q <= n and SynthesisError after 64 failed coefficient draws.
LinearProtocol synth_omniscience(const MessageFamily& fam, const gf::Field& field, std::uint64_t seed = 0);

/// tau keys in exactly S_L rows: omniscience on the minimum tau-critical
/// subfamily plus unit-vector keys outside its row space. Throws
/// InfeasibleError when m < M* + tau and InputError when q <= n.
LinearProtocol synth_sk(const MessageFamily& fam, std::size_t tau, const gf::Field& field, std::uint64_t seed = 0,
                        std::size_t jobs = 1);

/// m-1 rows X_f + X_e over a breadth-first walk of the hypergraph starting
/// at the smallest message f; the key is X_f. Throws InputError when the
/// hypergraph is disconnected.
LinearProtocol synth_chain(const MessageFamily& fam, const gf::Field& field);

/// Component field order used by gap_protocol(m).
std::uint32_t gap_component_order(std::size_t m);

/// Vector-linear protocol for make_gap(m): m/2-1 transmissions by client 1,
/// each carrying two first-component combinations; keys are the first
/// components of the last two messages.
LinearProtocol gap_protocol(std::size_t m);

/// Coordinates client `client` holds in this protocol's layout.
std::vector<std::size_t> held_coordinates(const MessageFamily& fam, const LinearProtocol& proto, std::size_t client);

/// Vectors every client must be able to compute: the key rows, or every
/// message coordinate for an omniscience protocol.
gf::Matrix decode_targets(const MessageFamily& fam, const LinearProtocol& proto);

struct CheckResult {
  bool pass = true;
  std::string detail;  // first failure, empty on success
};

struct AlgebraicReport {
  CheckResult realizable;
  CheckResult agreement;
  CheckResult uniformity;
  CheckResult independence;

  bool ok() const { return realizable.pass && agreement.pass && uniformity.pass && independence.pass; }
};

/// Throws InputError when the protocol does not fit the family's dimensions.
void check_shape(const MessageFamily& fam, const LinearProtocol& proto);

/// Rank-based checks of realizability, key agreement, key uniformity and
/// independence from the transcript.
AlgebraicReport check_algebraic(const MessageFamily& fam, const LinearProtocol& proto);

/// Linear decoder of one client: target i equals
/// sum_r from_rows[i][r] * T_r + sum_c from_held[i][c] * X_{held[c]}.
struct ClientDecoder {
  std::size_t client = 0;
  std::vector<std::size_t> held;
  std::vector<std::vector<Element>> from_rows;
  std::vector<std::vector<Element>> from_held;
};

/// nullopt when the client cannot compute every target.
std::optional<ClientDecoder> make_decoder(const MessageFamily& fam, const LinearProtocol& proto, std::size_t client);

std::vector<Element> run_decoder(const gf::Field& field, const ClientDecoder& dec, const std::vector<Element>& own,
                                 const std::vector<Element>& transcript);

/// Transcript values A x for a full coordinate assignment x.
std::vector<Element> transcript_of(const LinearProtocol& proto, const std::vector<Element>& x);

/// What `client` recovers from its own values (a full coordinate vector of
/// which only held entries are read) and the transcript: the key values, or
/// the full message vector for an omniscience protocol. Throws
/// VerificationError when the client cannot decode.
std::vector<Element> decode(const MessageFamily& fam, const LinearProtocol& proto, std::size_t client,
                            const std::vector<Element>& own, const std::vector<Element>& transcript);

/// Protocol file I/O. `messages` comes from the accompanying network file.
std::string serialize_protocol(const LinearProtocol& proto);
LinearProtocol parse_protocol(const std::string& text, std::size_t messages);
LinearProtocol read_protocol_file(const std::string& path, std::size_t messages);

}  // namespace ccdsk
