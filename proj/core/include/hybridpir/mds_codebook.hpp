#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hybridpir/field.hpp"

namespace hybridpir {

// One K-symbol row of a message.
using MessageRow = FieldVector;

// Generator columns h_1..h_N of an (N, K) Vandermonde MDS code. Column n is
// (1, a_n, a_n^2, ..., a_n^(K-1)) with a_n the (n+1)-th nonzero element in
// canonical order, so any K columns form an invertible matrix.
class MdsCodebook {
 public:
  // Throws ConfigurationError for K = 0 or K > N, FieldTooSmallError when
  // N > q - 1.
  MdsCodebook(Field field, std::size_t databases, std::size_t dimension);

  const Field& field() const { return field_; }
  std::size_t databases() const { return columns_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<FieldElement>& evaluation_points() const { return points_; }

  // 0-based database index. Throws DomainError when out of range.
  const FieldVector& column(std::size_t database) const;

  // Codebook restricted to the given databases (in the given order).
  MdsCodebook punctured(std::span<const std::size_t> databases) const;

 private:
  MdsCodebook(Field field, std::size_t dimension, std::vector<FieldElement> points);

  Field field_;
  std::size_t dimension_;
  std::vector<FieldElement> points_;
  std::vector<FieldVector> columns_;
};

MdsCodebook build_codebook(const Field& field, std::size_t databases, std::size_t dimension);

// h_n^T row.
FieldElement encode_symbol(const MdsCodebook& cb, std::size_t database, const MessageRow& row);

// h_n^T (rows[0] + rows[1] + ...); equals the field sum of the individual
// encodings.
FieldElement encode_linear_combination(const MdsCodebook& cb, std::size_t database,
                                       std::span<const MessageRow> rows);

struct Share {
  std::size_t database;
  FieldElement value;
};

// Recovers the row from shares at >= K distinct databases. The first K
// distinct databases are solved for; every further share is checked against
// the solution.
//
// Throws InsufficientSharesError with fewer than K distinct databases and
// CorruptionError when the extra shares disagree.
MessageRow decode_row(const MdsCodebook& cb, std::span<const Share> shares);

// Brute-force check that every K-subset of columns is invertible.
bool satisfies_mds_property(const MdsCodebook& cb);

}  // namespace hybridpir
