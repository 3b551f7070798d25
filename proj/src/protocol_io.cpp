#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ccdsk/errors.hpp"
#include "ccdsk/protocol.hpp"

namespace ccdsk {

namespace {

void write_list(std::ostringstream& out, const auto& values) {
  out << "[";
  bool first = true;
  for (auto v : values) {
    out << (first ? "" : ", ") << v;
    first = false;
  }
  out << "]";
}

std::vector<Element> read_codes(const nlohmann::json& j, std::size_t expected, const gf::Field& field,
                                const std::string& what) {
  if (!j.is_array() || j.size() != expected)
    throw InputError(what + " must list exactly " + std::to_string(expected) + " coefficients");
  std::vector<Element> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0 || !field.contains(v.get<std::uint64_t>()))
      throw InputError(what + " has a coefficient outside the field");
    out.push_back(v.get<Element>());
  }
  return out;
}

}  // namespace

std::string serialize_protocol(const LinearProtocol& proto) {
  std::ostringstream out;
  out << "{\n  \"field\": {\"p\": " << proto.field.characteristic() << ", \"k\": " << proto.field.degree()
      << ", \"modulus\": ";
  write_list(out, proto.field.modulus());
  out << "},\n";
  if (proto.split != 1) out << "  \"split\": " << proto.split << ",\n";
  out << "  \"rows\": [";
  for (std::size_t i = 0; i < proto.rows.size(); ++i) {
    out << (i == 0 ? "\n" : ",\n") << "    {\"client\": " << proto.rows[i].client + 1 << ", \"coeffs\": ";
    write_list(out, proto.rows[i].coeffs);
    out << "}";
  }
  out << (proto.rows.empty() ? "],\n" : "\n  ],\n");
  out << "  \"keys\": [";
  for (std::size_t i = 0; i < proto.keys.rows(); ++i) {
    out << (i == 0 ? "\n    " : ",\n    ");
    write_list(out, proto.keys.row(i));
  }
  out << (proto.keys.rows() == 0 ? "]\n" : "\n  ]\n") << "}\n";
  return out.str();
}

LinearProtocol parse_protocol(const std::string& text, std::size_t messages) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("protocol file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("field") || !doc.contains("rows") || !doc.contains("keys"))
    throw InputError("protocol file needs keys \"field\", \"rows\" and \"keys\"");
  const auto& jf = doc["field"];
  if (!jf.is_object() || !jf.contains("p") || !jf.contains("k") || !jf["p"].is_number_unsigned() ||
      !jf["k"].is_number_unsigned())
    throw InputError("\"field\" needs integer \"p\" and \"k\"");
  std::optional<std::vector<std::uint32_t>> modulus;
  if (jf.contains("modulus")) {
    if (!jf["modulus"].is_array()) throw InputError("\"modulus\" must be an array");
    std::vector<std::uint32_t> coeffs;
    for (const auto& v : jf["modulus"]) {
      if (!v.is_number_unsigned()) throw InputError("modulus coefficients must be nonnegative integers");
      coeffs.push_back(v.get<std::uint32_t>());
    }
    modulus = std::move(coeffs);
  }
  const gf::Field field = gf::make_field(jf["p"].get<std::uint32_t>(), jf["k"].get<std::uint32_t>(), modulus);

  std::size_t split = 1;
  if (doc.contains("split")) {
    if (!doc["split"].is_number_unsigned() || doc["split"].get<std::size_t>() < 1)
      throw InputError("\"split\" must be a positive integer");
    split = doc["split"].get<std::size_t>();
  }
  const std::size_t coords = messages * split;

  if (!doc["rows"].is_array()) throw InputError("\"rows\" must be an array");
  std::vector<Row> rows;
  for (const auto& jr : doc["rows"]) {
    if (!jr.is_object() || !jr.contains("client") || !jr.contains("coeffs") || !jr["client"].is_number_unsigned() ||
        jr["client"].get<std::size_t>() < 1)
      throw InputError("each row needs a 1-based \"client\" and \"coeffs\"");
    rows.push_back(Row{jr["client"].get<std::size_t>() - 1,
                       read_codes(jr["coeffs"], coords, field, "row " + std::to_string(rows.size() + 1))});
  }

  if (!doc["keys"].is_array()) throw InputError("\"keys\" must be an array");
  gf::Matrix keys(0, coords);
  for (const auto& jk : doc["keys"]) keys.append_row(read_codes(jk, coords, field, "key row"));

  return LinearProtocol{field, messages, split, std::move(rows), std::move(keys)};
}

LinearProtocol read_protocol_file(const std::string& path, std::size_t messages) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read protocol file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_protocol(buf.str(), messages);
}

}  // namespace ccdsk
