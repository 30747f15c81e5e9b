#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hybridpir/mds_codebook.hpp"
#include "hybridpir/pir_engine.hpp"
#include "hybridpir/storage_planner.hpp"
#include "hybridpir/tradeoff.hpp"

// Wire and file formats. Database, message and row ids are 1-based in every
// external format; symbols are canonical integers in [0, q). Parsers throw
// ParseError on malformed input. The layouts are documented in
// docs/formats.md.
namespace hybridpir {

// {"field": "prime:257", "N": 6, "K": 2, "alphas": [1, 2, ...]}
std::string codebook_to_json(const MdsCodebook& cb);
// Rebuilds the codebook and checks the alphas match the canonical choice.
MdsCodebook codebook_from_json(const std::string& text);

std::string plan_to_json(const SystemParams& params, const PartitionMap& pmap);

// {"database": n, "atoms": [[[m, j], [m, j]], ...]}
std::string query_to_json(const QuerySet& query);
QuerySet query_from_json(const std::string& text);

// Little-endian:
//   u32 magic 0x51524950 ("PIRQ"), u32 version = 1, u32 database,
//   u32 atom_count, then per atom: u32 pair_count, pair_count x (u32 message,
//   u32 row).
std::vector<std::uint8_t> query_to_binary(const QuerySet& query);
QuerySet query_from_binary(const std::vector<std::uint8_t>& bytes);

// Little-endian: u32 magic 0x4d524950 ("PIRM"), u32 version = 1, u32 M,
// u32 R, u32 K, then M*R*K u32 symbols, message-major then row-major.
void write_messages(std::ostream& out, const MessageSet& messages);
MessageSet read_messages(std::istream& in, const Field& field);

// Header "mu_num,mu_den,D_num,D_den,provenance", one point per line; the
// provenance column is double-quoted.
std::string curve_to_csv(const std::vector<TradeoffPoint>& points);
std::vector<TradeoffPoint> curve_from_csv(const std::string& text);

std::string curve_to_json(const std::string& name, const TradeoffCurve& curve);

}  // namespace hybridpir
