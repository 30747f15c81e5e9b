#include "hybridpir/mds_codebook.hpp"

#include <algorithm>
#include <string>

#include "hybridpir/errors.hpp"

namespace hybridpir {

namespace {

std::vector<FieldElement> default_points(const Field& field, std::size_t databases) {
  if (databases + 1 > field.order()) {
    throw FieldTooSmallError("an (N, K) code with N = " + std::to_string(databases) +
                             " needs more than " + std::to_string(databases) +
                             " field elements; " + field.config().descriptor() + " has " +
                             std::to_string(field.order()));
  }
  return field.nonzero_elements(databases);
}

}  // namespace

MdsCodebook::MdsCodebook(Field field, std::size_t databases, std::size_t dimension)
    : MdsCodebook(field, dimension, default_points(field, databases)) {
  if (dimension > databases) {
    throw ConfigurationError("MDS code needs K <= N, got K = " + std::to_string(dimension) +
                             ", N = " + std::to_string(databases));
  }
}

MdsCodebook::MdsCodebook(Field field, std::size_t dimension, std::vector<FieldElement> points)
    : field_(field), dimension_(dimension), points_(std::move(points)) {
  if (dimension_ == 0) throw ConfigurationError("MDS code needs K >= 1");
  columns_.reserve(points_.size());
  for (const auto& a : points_) {
    FieldVector h;
    h.reserve(dimension_);
    auto power = field_.one();
    for (std::size_t i = 0; i < dimension_; ++i) {
      h.push_back(power);
      power = mul(power, a);
    }
    columns_.push_back(std::move(h));
  }
}

const FieldVector& MdsCodebook::column(std::size_t database) const {
  if (database >= columns_.size()) {
    throw DomainError("database index " + std::to_string(database) + " out of range for N = " +
                      std::to_string(columns_.size()));
  }
  return columns_[database];
}

MdsCodebook MdsCodebook::punctured(std::span<const std::size_t> databases) const {
  std::vector<FieldElement> points;
  points.reserve(databases.size());
  for (auto n : databases) {
    column(n);
    points.push_back(points_[n]);
  }
  if (points.size() < dimension_) {
    throw ConfigurationError("puncturing to fewer than K databases");
  }
  return MdsCodebook(field_, dimension_, std::move(points));
}

MdsCodebook build_codebook(const Field& field, std::size_t databases, std::size_t dimension) {
  return MdsCodebook(field, databases, dimension);
}

FieldElement encode_symbol(const MdsCodebook& cb, std::size_t database, const MessageRow& row) {
  if (row.size() != cb.dimension()) {
    throw ConfigurationError("message row has " + std::to_string(row.size()) +
                             " symbols, code dimension is " + std::to_string(cb.dimension()));
  }
  return dot(cb.column(database), row);
}

FieldElement encode_linear_combination(const MdsCodebook& cb, std::size_t database,
                                       std::span<const MessageRow> rows) {
  const auto& h = cb.column(database);
  if (rows.empty()) return cb.field().zero();
  MessageRow sum = rows.front();
  if (sum.size() != cb.dimension()) {
    throw ConfigurationError("message row length does not match code dimension");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) sum = add(sum, rows[i]);
  return dot(h, sum);
}

MessageRow decode_row(const MdsCodebook& cb, std::span<const Share> shares) {
  const auto k = cb.dimension();
  std::vector<std::size_t> chosen;
  FieldMatrix system;
  FieldVector rhs;
  for (const auto& s : shares) {
    if (chosen.size() == k) break;
    if (std::find(chosen.begin(), chosen.end(), s.database) != chosen.end()) continue;
    chosen.push_back(s.database);
    system.push_back(cb.column(s.database));
    rhs.push_back(s.value);
  }
  if (chosen.size() < k) {
    throw InsufficientSharesError("decoding needs shares from " + std::to_string(k) +
                                  " distinct databases, got " + std::to_string(chosen.size()));
  }
  const auto row = solve_linear(system, rhs);
  for (const auto& s : shares) {
    if (encode_symbol(cb, s.database, row) != s.value) {
      throw CorruptionError("share from database " + std::to_string(s.database + 1) +
                            " is inconsistent with the decoded row");
    }
  }
  return row;
}

bool satisfies_mds_property(const MdsCodebook& cb) {
  const auto n = cb.databases();
  const auto k = cb.dimension();
  std::vector<bool> select(n, false);
  std::fill(select.begin(), select.begin() + static_cast<std::ptrdiff_t>(k), true);
  // prev_permutation over a sorted-descending mask walks every K-subset.
  do {
    FieldMatrix m;
    for (std::size_t i = 0; i < n; ++i) {
      if (select[i]) m.push_back(cb.column(i));
    }
    if (determinant(m).is_zero()) return false;
  } while (std::prev_permutation(select.begin(), select.end()));
  return true;
}

}  // namespace hybridpir
