#include "hybridpir/serialization.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hybridpir/errors.hpp"

namespace hybridpir {

using nlohmann::json;

namespace {

constexpr std::uint32_t kQueryMagic = 0x51524950;    // "PIRQ"
constexpr std::uint32_t kMessageMagic = 0x4d524950;  // "PIRM"
constexpr std::uint32_t kFormatVersion = 1;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParseError(std::string("unexpected JSON layout: ") + e.what());
  }
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    if (pos_ + 4 > bytes_.size()) throw ParseError("truncated binary query");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

void write_u32(std::ostream& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 4);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4)) throw ParseError("truncated message file");
  return std::uint32_t{buf[0]} | std::uint32_t{buf[1]} << 8 | std::uint32_t{buf[2]} << 16 |
         std::uint32_t{buf[3]} << 24;
}

RowRef checked_ref(std::int64_t message, std::int64_t row) {
  if (message < 1 || row < 1) throw ParseError("ids in queries are 1-based");
  return RowRef{static_cast<int>(message - 1), row - 1};
}

}  // namespace

std::string codebook_to_json(const MdsCodebook& cb) {
  json j;
  j["field"] = cb.field().config().descriptor();
  j["N"] = cb.databases();
  j["K"] = cb.dimension();
  json alphas = json::array();
  for (const auto& a : cb.evaluation_points()) alphas.push_back(a.value());
  j["alphas"] = alphas;
  return j.dump();
}

MdsCodebook codebook_from_json(const std::string& text) {
  const auto j = parse_json(text);
  return guarded([&] {
    const Field field(FieldConfig::parse(j.at("field").get<std::string>()));
    MdsCodebook cb(field, j.at("N").get<std::size_t>(), j.at("K").get<std::size_t>());
    const auto alphas = j.at("alphas").get<std::vector<std::uint32_t>>();
    if (alphas.size() != cb.databases()) throw ParseError("alpha count does not match N");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (alphas[i] != cb.evaluation_points()[i].value()) {
        throw ParseError("codebook evaluation points are not the canonical choice");
      }
    }
    return cb;
  });
}

std::string plan_to_json(const SystemParams& params, const PartitionMap& pmap) {
  json j;
  j["N"] = params.databases;
  j["M"] = params.messages;
  j["t"] = params.span;
  j["K"] = params.dimension;
  j["c"] = params.multiplier;
  j["mu"] = to_string(params.storage_ratio());
  j["R"] = params.rows_per_message;
  j["L"] = params.message_length;
  j["rows_per_partition"] = params.rows_per_partition;
  j["instances_per_round"] = params.instances_per_round;
  j["atoms_per_round"] = params.atoms_per_round;
  json parts = json::array();
  for (std::size_t p = 0; p < pmap.size(); ++p) {
    json subset = json::array();
    for (int n : pmap.subsets[p]) subset.push_back(n + 1);
    json rows = json::array();
    for (auto r : pmap.rows[p]) rows.push_back(r + 1);
    parts.push_back({{"databases", subset}, {"rows", rows}});
  }
  j["partitions"] = parts;
  return j.dump(2);
}

std::string query_to_json(const QuerySet& query) {
  json atoms = json::array();
  for (const auto& atom : query.atoms) {
    json pairs = json::array();
    for (const auto& r : atom) pairs.push_back({r.message + 1, r.row + 1});
    atoms.push_back(pairs);
  }
  return json{{"database", query.database + 1}, {"atoms", atoms}}.dump();
}

QuerySet query_from_json(const std::string& text) {
  const auto j = parse_json(text);
  return guarded([&] {
    QuerySet q;
    const auto db = j.at("database").get<std::int64_t>();
    if (db < 1) throw ParseError("database ids are 1-based");
    q.database = static_cast<int>(db - 1);
    for (const auto& atom : j.at("atoms")) {
      std::vector<RowRef> refs;
      for (const auto& pair : atom) {
        if (pair.size() != 2) throw ParseError("query pairs must be [message, row]");
        refs.push_back(checked_ref(pair[0].get<std::int64_t>(), pair[1].get<std::int64_t>()));
      }
      q.atoms.push_back(std::move(refs));
    }
    return q;
  });
}

std::vector<std::uint8_t> query_to_binary(const QuerySet& query) {
  std::vector<std::uint8_t> out;
  put_u32(out, kQueryMagic);
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(query.database + 1));
  put_u32(out, static_cast<std::uint32_t>(query.atoms.size()));
  for (const auto& atom : query.atoms) {
    put_u32(out, static_cast<std::uint32_t>(atom.size()));
    for (const auto& r : atom) {
      put_u32(out, static_cast<std::uint32_t>(r.message + 1));
      put_u32(out, static_cast<std::uint32_t>(r.row + 1));
    }
  }
  return out;
}

QuerySet query_from_binary(const std::vector<std::uint8_t>& bytes) {
  ByteReader in(bytes);
  if (in.u32() != kQueryMagic) throw ParseError("not a binary query (bad magic)");
  if (in.u32() != kFormatVersion) throw ParseError("unsupported binary query version");
  QuerySet q;
  const auto db = in.u32();
  if (db < 1) throw ParseError("database ids are 1-based");
  q.database = static_cast<int>(db - 1);
  const auto atoms = in.u32();
  for (std::uint32_t i = 0; i < atoms; ++i) {
    const auto pairs = in.u32();
    std::vector<RowRef> refs;
    for (std::uint32_t k = 0; k < pairs; ++k) {
      const auto m = in.u32();
      const auto r = in.u32();
      refs.push_back(checked_ref(m, r));
    }
    q.atoms.push_back(std::move(refs));
  }
  if (!in.done()) throw ParseError("trailing bytes after binary query");
  return q;
}

void write_messages(std::ostream& out, const MessageSet& messages) {
  write_u32(out, kMessageMagic);
  write_u32(out, kFormatVersion);
  write_u32(out, static_cast<std::uint32_t>(messages.count()));
  write_u32(out, static_cast<std::uint32_t>(messages.rows()));
  write_u32(out, static_cast<std::uint32_t>(messages.row_length()));
  for (const auto& m : messages.messages) {
    for (const auto& row : m) {
      for (const auto& s : row) write_u32(out, s.value());
    }
  }
}

MessageSet read_messages(std::istream& in, const Field& field) {
  if (read_u32(in) != kMessageMagic) throw ParseError("not a message file (bad magic)");
  if (read_u32(in) != kFormatVersion) throw ParseError("unsupported message file version");
  const auto count = read_u32(in);
  const auto rows = read_u32(in);
  const auto length = read_u32(in);
  MessageSet set;
  set.messages.resize(count);
  for (auto& m : set.messages) {
    m.resize(rows);
    for (auto& row : m) {
      row.reserve(length);
      for (std::uint32_t i = 0; i < length; ++i) {
        const auto v = read_u32(in);
        if (v >= field.order()) throw ParseError("symbol " + std::to_string(v) + " outside the field");
        row.push_back(field.element(v));
      }
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ParseError("trailing bytes in message file");
  return set;
}

std::string curve_to_csv(const std::vector<TradeoffPoint>& points) {
  std::ostringstream out;
  out << "mu_num,mu_den,D_num,D_den,provenance\n";
  for (const auto& p : points) {
    out << p.mu.numerator() << ',' << p.mu.denominator() << ',' << p.cost.numerator() << ','
        << p.cost.denominator() << ",\"" << p.provenance.to_string() << "\"\n";
  }
  return out.str();
}

std::vector<TradeoffPoint> curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "mu_num,mu_den,D_num,D_den,provenance") {
    throw ParseError("missing CSV header");
  }
  std::vector<TradeoffPoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // The provenance column is quoted and may contain commas.
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (int i = 0; i < 4; ++i) {
      const auto comma = line.find(',', start);
      if (comma == std::string::npos) throw ParseError("short CSV line '" + line + "'");
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    const auto mu = parse_rational(fields[0] + "/" + fields[1]);
    const auto cost = parse_rational(fields[2] + "/" + fields[3]);
    auto provenance = line.substr(start);
    if (provenance.size() >= 2 && provenance.front() == '"' && provenance.back() == '"') {
      provenance = provenance.substr(1, provenance.size() - 2);
    }
    out.push_back({mu, cost, Provenance::parse(provenance)});
  }
  return out;
}

std::string curve_to_json(const std::string& name, const TradeoffCurve& curve) {
  json points = json::array();
  for (const auto& p : curve.points) {
    points.push_back({{"mu", to_string(p.mu)},
                      {"D", to_string(p.cost)},
                      {"mu_value", to_double(p.mu)},
                      {"D_value", to_double(p.cost)},
                      {"provenance", p.provenance.to_string()}});
  }
  return json{{"name", name}, {"hull", curve.hull}, {"points", points}}.dump(2);
}

}  // namespace hybridpir
