#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace hybridpir {

// Descriptor of a finite field: either GF(p) for a prime p, or GF(2^w) with an
// irreducible reduction polynomial (bit i = coefficient of x^i, including the
// leading x^w term).
struct FieldConfig {
  enum class Kind { kPrime, kBinaryExtension };

  Kind kind = Kind::kPrime;
  std::uint32_t prime = 257;       // kPrime only
  std::uint32_t degree = 0;        // kBinaryExtension only
  std::uint32_t polynomial = 0;    // kBinaryExtension only

  static FieldConfig prime_field(std::uint32_t p);
  // Uses a default primitive polynomial for the degree.
  static FieldConfig binary_extension(std::uint32_t degree);
  static FieldConfig binary_extension(std::uint32_t degree, std::uint32_t polynomial);

  // "prime:257", "gf2^8", "gf2^8:0x11d".
  static FieldConfig parse(const std::string& descriptor);
  std::string descriptor() const;

  std::uint64_t order() const;

  // Throws ConfigurationError unless the descriptor names a valid field.
  void validate() const;

  friend bool operator==(const FieldConfig&, const FieldConfig&) = default;
};

namespace detail {
struct FieldTables;
}

class FieldElement;

// Handle to an interned, immutable field. Handles to equal configs compare
// equal and share tables; copying is free.
class Field {
 public:
  // Validates the config. Throws ConfigurationError.
  explicit Field(const FieldConfig& config);
  Field();  // GF(257)

  const FieldConfig& config() const;
  std::uint64_t order() const;

  FieldElement zero() const;
  FieldElement one() const;
  // Throws DomainError unless value < order().
  FieldElement element(std::uint64_t value) const;

  // Elements 1, 2, ..., count in canonical order.
  std::vector<FieldElement> nonzero_elements(std::size_t count) const;

  friend bool operator==(const Field& a, const Field& b) { return a.tables_ == b.tables_; }

 private:
  friend class FieldElement;
  friend FieldElement add(const FieldElement&, const FieldElement&);
  friend FieldElement sub(const FieldElement&, const FieldElement&);
  friend FieldElement neg(const FieldElement&);
  friend FieldElement mul(const FieldElement&, const FieldElement&);
  friend FieldElement inv(const FieldElement&);

  explicit Field(const detail::FieldTables* tables) : tables_(tables) {}

  const detail::FieldTables* tables_;
};

class FieldElement {
 public:
  FieldElement() = default;

  std::uint32_t value() const { return value_; }
  Field field() const { return Field(tables_); }
  bool is_zero() const { return value_ == 0; }

  // Same field and same canonical value.
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.tables_ == b.tables_ && a.value_ == b.value_;
  }

  friend FieldElement add(const FieldElement&, const FieldElement&);
  friend FieldElement sub(const FieldElement&, const FieldElement&);
  friend FieldElement neg(const FieldElement&);
  friend FieldElement mul(const FieldElement&, const FieldElement&);
  friend FieldElement inv(const FieldElement&);

 private:
  friend class Field;
  FieldElement(std::uint32_t value, const detail::FieldTables* tables)
      : value_(value), tables_(tables) {}

  std::uint32_t value_ = 0;
  const detail::FieldTables* tables_ = nullptr;
};

// All binary operations throw ConfigurationError when the operands belong to
// different fields.
FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldElement& a, const FieldElement& b);
FieldElement neg(const FieldElement& a);
FieldElement mul(const FieldElement& a, const FieldElement& b);
// Throws DomainError for zero.
FieldElement inv(const FieldElement& a);
FieldElement div(const FieldElement& a, const FieldElement& b);
FieldElement pow(const FieldElement& a, std::uint64_t exponent);

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) { return add(a, b); }
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return sub(a, b); }
inline FieldElement operator-(const FieldElement& a) { return neg(a); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) { return mul(a, b); }
inline FieldElement operator/(const FieldElement& a, const FieldElement& b) { return div(a, b); }
inline FieldElement& operator+=(FieldElement& a, const FieldElement& b) { return a = add(a, b); }
inline FieldElement& operator-=(FieldElement& a, const FieldElement& b) { return a = sub(a, b); }

using FieldVector = std::vector<FieldElement>;
// Row-major square or rectangular matrix; every row has the same length.
using FieldMatrix = std::vector<FieldVector>;

FieldElement dot(const FieldVector& a, const FieldVector& b);
FieldVector add(const FieldVector& a, const FieldVector& b);
FieldVector sub(const FieldVector& a, const FieldVector& b);
FieldVector mul(const FieldMatrix& a, const FieldVector& x);

// Solves A x = b by Gauss-Jordan elimination. Throws SingularMatrixError if A
// is singular and ConfigurationError if the shapes disagree.
FieldVector solve_linear(const FieldMatrix& a, const FieldVector& b);

FieldElement determinant(const FieldMatrix& a);

}  // namespace hybridpir
