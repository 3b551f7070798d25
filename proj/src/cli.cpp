#include "ccdsk/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccdsk/connectivity.hpp"
#include "ccdsk/errors.hpp"
#include "ccdsk/network.hpp"
#include "ccdsk/omniscience.hpp"
#include "ccdsk/oracle.hpp"
#include "ccdsk/protocol.hpp"
#include "ccdsk/secrecy.hpp"

namespace ccdsk::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("failed writing " + path);
}

std::string one_based(const std::vector<std::size_t>& items, const char* open = "{", const char* close = "}") {
  std::ostringstream out;
  out << open;
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? "," : "") << items[i] + 1;
  out << close;
  return out.str();
}

std::string pairs_text(const Multigraph& g, const std::vector<std::size_t>& edge_ids) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < edge_ids.size(); ++i) {
    const auto [u, v] = g.edges[edge_ids[i]];
    out << (i ? "," : "") << "[" << u + 1 << "," << v + 1 << "]";
  }
  out << "]";
  return out.str();
}

std::string partition_text(const VertexPartition& p) {
  std::vector<std::vector<std::size_t>> blocks(p.blocks);
  for (std::size_t v = 0; v < p.block.size(); ++v) blocks[p.block[v]].push_back(v);
  std::string out;
  for (std::size_t b = 0; b < blocks.size(); ++b) out += (b ? " | " : "") + one_based(blocks[b]);
  return out;
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  return order;
}

struct AnalyzeArgs {
  std::string path;
  std::optional<std::size_t> tau;
  bool all_tau = false;
  bool witness = false;
  std::string report;
  std::size_t jobs = 1;
};

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  const MessageFamily fam = read_network_file(args.path);
  const auto t0 = Clock::now();
  const OmniscienceResult omni = compute_m_star(fam);
  const double omni_ms = elapsed_ms(t0);
  const std::size_t m = fam.messages();
  const std::size_t max_tau = m > omni.m_star ? m - omni.m_star : 0;

  std::vector<std::size_t> taus;
  if (args.tau) {
    if (*args.tau < 1) throw InputError("--tau must be at least 1");
    taus.push_back(*args.tau);
  } else if (args.all_tau) {
    for (std::size_t t = 1; t <= max_tau + 1; ++t) taus.push_back(t);
  }

  const auto t1 = Clock::now();
  std::vector<TauEntry> entries;
  for (auto t : taus) entries.push_back(s_l_tau(fam, t, args.jobs));
  const double search_ms = elapsed_ms(t1);

  out << "clients: " << fam.clients() << "\n";
  out << "messages: " << m << "\n";
  out << "M* = " << omni.m_star << "\n";
  out << "allocation: (";
  for (std::size_t j = 0; j < omni.witness.size(); ++j) out << (j ? "," : "") << omni.witness[j];
  out << ")\n";
  out << "tight sets:";
  if (omni.tight_sets.empty()) out << " none";
  for (const auto& s : omni.tight_sets) out << " " << one_based(members(s));
  out << "\n";
  out << "max tau = " << max_tau << "\n";

  if (!entries.empty()) {
    std::vector<std::string> head{"tau"}, value{"S_L"};
    for (const auto& e : entries) {
      head.push_back(std::to_string(e.tau));
      value.push_back(e.s_l ? std::to_string(*e.s_l) : "inf");
    }
    std::size_t width = 0;
    for (std::size_t i = 1; i < head.size(); ++i) width = std::max({width, head[i].size(), value[i].size()});
    auto line = [&](const std::vector<std::string>& cells) {
      out << cells[0] << std::string(5 - cells[0].size(), ' ') << "|";
      for (std::size_t i = 1; i < cells.size(); ++i)
        out << " " << std::string(width - cells[i].size(), ' ') << cells[i];
      out << "\n";
    };
    line(head);
    line(value);
  }

  for (const auto& e : entries) {
    if (e.s_l) {
      out << "witness tau=" << e.tau << ": " << one_based(e.witness) << "\n";
      if (!args.witness) continue;
      const auto sub = fam.restrict(make_index_set(fam.labels(), e.witness));
      const Multigraph g = induce_by_order(to_hypergraph(sub), identity_order(fam.clients()));
      const auto trees = pack_spanning_trees(g, e.tau);
      if (trees)
        for (std::size_t i = 0; i < trees->size(); ++i)
          out << "  tree " << i + 1 << ": " << pairs_text(g, (*trees)[i]) << "\n";
    } else if (args.witness) {
      if (fam.clients() <= kMaxPartitionVertices) {
        const auto check = partition_bound(to_hypergraph(fam), e.tau);
        if (check.violation)
          out << "violating partition tau=" << e.tau << ": " << partition_text(*check.violation) << "\n";
      } else {
        out << "violating partition tau=" << e.tau << ": not enumerated (n > " << kMaxPartitionVertices << ")\n";
      }
    }
  }

  err << "timing: omniscience " << omni_ms << " ms, search " << search_ms << " ms\n";

  if (!args.report.empty()) {
    nlohmann::ordered_json rep;
    rep["clients"] = fam.clients();
    rep["messages"] = m;
    rep["m_star"] = omni.m_star;
    rep["allocation"] = omni.witness;
    auto tight = nlohmann::ordered_json::array();
    for (const auto& s : omni.tight_sets) {
      auto v = members(s);
      for (auto& x : v) ++x;
      tight.push_back(v);
    }
    rep["tight_sets"] = tight;
    rep["max_tau"] = max_tau;
    auto table = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
      nlohmann::ordered_json row;
      row["tau"] = e.tau;
      row["s_l"] = e.s_l ? nlohmann::ordered_json(*e.s_l) : nlohmann::ordered_json(nullptr);
      auto w = e.witness;
      for (auto& x : w) ++x;
      row["witness"] = w;
      table.push_back(row);
    }
    rep["table"] = table;
    rep["timing_ms"] = {{"omniscience", omni_ms}, {"search", search_ms}};
    write_text(args.report, rep.dump(2) + "\n");
  }
  return kOk;
}

struct ProtocolArgs {
  std::string path;
  std::size_t tau = 1;
  std::optional<std::uint64_t> field;
  bool chain = false;
  bool omniscience = false;
  std::string out_path;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

void print_report(const AlgebraicReport& r, std::ostream& out, const char* prefix) {
  auto line = [&](const char* name, const CheckResult& c) {
    out << prefix << name << ": " << (c.pass ? "PASS" : "FAIL");
    if (!c.pass) out << " (" << c.detail << ")";
    out << "\n";
  };
  line("realizability", r.realizable);
  line("agreement", r.agreement);
  line("uniformity", r.uniformity);
  line("independence", r.independence);
}

int cmd_protocol(const ProtocolArgs& args, std::ostream& out, std::ostream& err) {
  if (args.chain && args.omniscience) throw InputError("--chain and --omniscience are exclusive");
  const MessageFamily fam = read_network_file(args.path);
  const gf::Field field = args.field ? gf::field_of_order(*args.field) : default_field(fam.clients());
  const LinearProtocol proto = args.chain         ? synth_chain(fam, field)
                               : args.omniscience ? synth_omniscience(fam, field, args.seed)
                                                  : synth_sk(fam, args.tau, field, args.seed, args.jobs);
  const AlgebraicReport report = check_algebraic(fam, proto);
  std::ostream& summary = args.out_path.empty() ? err : out;
  summary << "field: GF(" << field.order() << ")\n";
  summary << "rows: " << proto.rows.size() << "\n";
  summary << "keys: " << proto.tau() << "\n";
  print_report(report, summary, "");
  if (args.out_path.empty())
    out << serialize_protocol(proto);
  else
    write_text(args.out_path, serialize_protocol(proto));
  return report.ok() ? kOk : kVerificationFailed;
}

struct VerifyArgs {
  std::string network, protocol;
  bool exhaustive = false;
  std::size_t jobs = 1;
  std::uint64_t limit = kDefaultStateLimit;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  const MessageFamily fam = read_network_file(args.network);
  const LinearProtocol proto = read_protocol_file(args.protocol, fam.labels());
  const AlgebraicReport report = check_algebraic(fam, proto);
  bool ok = report.ok();
  print_report(report, out, "algebraic ");
  if (args.exhaustive) {
    const OracleVerdict v = verify_exhaustive(fam, proto, {args.limit, args.jobs});
    auto line = [&](const char* name, bool pass, const std::string& detail) {
      out << "exhaustive " << name << ": " << (pass ? "PASS" : "FAIL");
      if (!pass) out << " (" << detail << ")";
      out << "\n";
    };
    line("agreement", v.agreement, v.agreement_detail);
    line("uniformity", v.uniformity, v.uniformity_detail);
    line("independence", v.independence, v.independence_detail);
    out << "assignments: " << v.assignments << "\n";
    if (!v.counterexample.empty()) {
      out << "counterexample:";
      for (auto e : v.counterexample) out << " " << e;
      out << "\n";
    }
    ok = ok && v.ok();
  }
  return ok ? kOk : kVerificationFailed;
}

struct ExampleArgs {
  std::vector<std::string> words;
  std::string out_path;
  std::string protocol_path;
};

std::size_t parse_count(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw InputError("expected a number, got '" + s + "'");
  }
  if (pos != s.size()) throw InputError("expected a number, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

int cmd_example(const ExampleArgs& args, std::ostream& out) {
  if (args.words.empty()) throw InputError("example needs a name: table1, pin N or gap M");
  const std::string& name = args.words[0];
  std::optional<MessageFamily> fam;
  std::optional<LinearProtocol> proto;
  if (name == "table1" && args.words.size() == 1) {
    fam = make_example1();
  } else if (name == "pin" && args.words.size() == 2) {
    fam = make_pin(parse_count(args.words[1]));
  } else if (name == "gap" && args.words.size() == 2) {
    const std::size_t m = parse_count(args.words[1]);
    fam = make_gap(m);
    proto = gap_protocol(m);
  } else {
    throw InputError("unknown example; use table1, pin N or gap M");
  }
  if (!args.protocol_path.empty()) {
    if (!proto) throw InputError("--protocol is only available for the gap example");
    write_text(args.protocol_path, serialize_protocol(*proto));
  }
  if (args.out_path.empty())
    out << serialize_network(*fam);
  else
    write_text(args.out_path, serialize_network(*fam));
  return kOk;
}

struct ReduceArgs {
  std::string path;
  std::string out_path;
  bool solve = false;
  std::size_t jobs = 1;
};

int cmd_reduce(const ReduceArgs& args, std::ostream& out) {
  const SetCoverInstance inst = read_set_cover_file(args.path);
  const MessageFamily fam = reduce_set_cover(inst);
  if (!args.out_path.empty())
    write_text(args.out_path, serialize_network(fam));
  else if (!args.solve)
    out << serialize_network(fam);
  if (args.solve) out << "minimum cover = " << min_cover_via_reduction(inst, args.jobs) << "\n";
  return kOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Omniscience and secret-key analysis for message-holding networks"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* a = app.add_subcommand("analyze", "M*, maximum key count and S_L per key count");
  a->add_option("network", analyze.path, "network file")->required();
  auto* tau_opt = a->add_option("--tau", analyze.tau, "single key count");
  a->add_flag("--all-tau", analyze.all_tau, "every key count up to the first infeasible one")->excludes(tau_opt);
  a->add_flag("--witness", analyze.witness, "print spanning trees and violating partitions");
  a->add_option("--report", analyze.report, "write a JSON report");
  a->add_option("--jobs", analyze.jobs, "worker threads")->check(CLI::PositiveNumber);

  ProtocolArgs protocol;
  auto* p = app.add_subcommand("protocol", "synthesize a linear protocol");
  p->add_option("network", protocol.path, "network file")->required();
  p->add_option("--tau", protocol.tau, "number of keys")->check(CLI::PositiveNumber);
  p->add_option("--field", protocol.field, "field order q (prime power)");
  p->add_flag("--chain", protocol.chain, "single-key chain protocol");
  p->add_flag("--omniscience", protocol.omniscience, "omniscience protocol without keys");
  p->add_option("--out", protocol.out_path, "output protocol file");
  p->add_option("--seed", protocol.seed, "seed for the random fallback");
  p->add_option("--jobs", protocol.jobs, "worker threads")->check(CLI::PositiveNumber);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "check a protocol against a network");
  v->add_option("network", verify.network, "network file")->required();
  v->add_option("protocol", verify.protocol, "protocol file")->required();
  v->add_flag("--exhaustive", verify.exhaustive, "also enumerate every assignment");
  v->add_option("--jobs", verify.jobs, "worker threads")->check(CLI::PositiveNumber);
  v->add_option("--limit", verify.limit, "maximum enumerated states");

  ExampleArgs example;
  auto* e = app.add_subcommand("example", "emit a built-in network: table1, pin N, gap M");
  e->add_option("name", example.words, "example name and parameter")->required()->expected(1, 2);
  e->add_option("--out", example.out_path, "output network file");
  e->add_option("--protocol", example.protocol_path, "also write the gap protocol");

  ReduceArgs reduce;
  auto* r = app.add_subcommand("reduce", "set-cover instance to a network");
  r->add_option("cover", reduce.path, "set-cover file")->required();
  r->add_option("--out", reduce.out_path, "output network file");
  r->add_flag("--solve", reduce.solve, "print the minimum cover size");
  r->add_option("--jobs", reduce.jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*a) return cmd_analyze(analyze, out, err);
    if (*p) return cmd_protocol(protocol, out, err);
    if (*v) return cmd_verify(verify, out);
    if (*e) return cmd_example(example, out);
    if (*r) return cmd_reduce(reduce, out);
  } catch (const InputError& ex) {
    err << "error: " << ex.what() << "\n";
    return kBadInput;
  } catch (const SizeGuardError& ex) {
    err << "error: " << ex.what() << "\n";
    return kSizeGuard;
  } catch (const InfeasibleError& ex) {
    err << "error: " << ex.what() << "\n";
    return kInfeasible;
  } catch (const SynthesisError& ex) {
    err << "error: " << ex.what() << "\n";
    return kSynthesisFailed;
  } catch (const VerificationError& ex) {
    err << "error: " << ex.what() << "\n";
    return kVerificationFailed;
  }
  return kBadInput;
}

}  // namespace ccdsk::cli
