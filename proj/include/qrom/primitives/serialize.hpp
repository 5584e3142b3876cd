#pragma once

// Replay formats for oracle tables and keys. Field order is fixed: widths
// first, then table rows in input order.
//
// Binary oracle table ("QROT"): magic "QROT", u32 version, u32 in_bits,
// u32 out_bits, then 2^in_bits rows as u64. All integers little-endian.

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrom/primitives/clawfree.hpp"
#include "qrom/primitives/tdp.hpp"
#include "qrom/qsim/oracle_table.hpp"

namespace qrom::primitives {

using ordered_json = nlohmann::ordered_json;

inline constexpr std::uint32_t kBinaryFormatVersion = 1;

inline ordered_json to_json(const qsim::OracleTable& t) {
  ordered_json j;
  j["in_bits"] = t.in_bits();
  j["out_bits"] = t.out_bits();
  j["rows"] = std::vector<std::uint64_t>(t.rows().begin(), t.rows().end());
  return j;
}

inline qsim::OracleTable oracle_table_from_json(const ordered_json& j) {
  return qsim::OracleTable(j.at("in_bits").get<unsigned>(), j.at("out_bits").get<unsigned>(),
                           j.at("rows").get<std::vector<std::uint64_t>>());
}

inline ordered_json to_json(const TdpPublicKey& pk) {
  ordered_json j;
  j["domain_bits"] = pk.domain_bits;
  j["table"] = *pk.forward;
  return j;
}

inline ordered_json to_json(const ClawFreePublicKey& pk) {
  ordered_json j;
  j["modulus"] = pk.modulus;
  j["domain_size"] = pk.domain_size();
  return j;
}

namespace detail {
inline void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
inline std::uint64_t get_le(const std::vector<std::uint8_t>& in, std::size_t& pos, int bytes) {
  if (pos + static_cast<std::size_t>(bytes) > in.size()) throw std::invalid_argument("QROT: truncated input");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{in[pos + i]} << (8 * i);
  pos += static_cast<std::size_t>(bytes);
  return v;
}
}  // namespace detail

inline std::vector<std::uint8_t> to_binary(const qsim::OracleTable& t) {
  std::vector<std::uint8_t> out{'Q', 'R', 'O', 'T'};
  detail::put_le(out, kBinaryFormatVersion, 4);
  detail::put_le(out, t.in_bits(), 4);
  detail::put_le(out, t.out_bits(), 4);
  for (auto v : t.rows()) detail::put_le(out, v, 8);
  return out;
}

inline qsim::OracleTable oracle_table_from_binary(const std::vector<std::uint8_t>& in) {
  if (in.size() < 16 || std::memcmp(in.data(), "QROT", 4) != 0)
    throw std::invalid_argument("QROT: bad magic");
  std::size_t pos = 4;
  if (detail::get_le(in, pos, 4) != kBinaryFormatVersion) throw std::invalid_argument("QROT: unknown version");
  const auto in_bits = static_cast<unsigned>(detail::get_le(in, pos, 4));
  const auto out_bits = static_cast<unsigned>(detail::get_le(in, pos, 4));
  if (in_bits > qsim::kMaxTableInputBits) throw std::invalid_argument("QROT: in_bits exceeds cap");
  std::vector<std::uint64_t> rows(std::size_t{1} << in_bits);
  for (auto& r : rows) r = detail::get_le(in, pos, 8);
  if (pos != in.size()) throw std::invalid_argument("QROT: trailing bytes");
  return qsim::OracleTable(in_bits, out_bits, std::move(rows));
}

}  // namespace qrom::primitives
