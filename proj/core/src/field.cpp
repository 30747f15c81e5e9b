#include "hybridpir/field.hpp"

#include <array>
#include <charconv>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>

#include "hybridpir/errors.hpp"

namespace hybridpir {

namespace detail {

struct FieldTables {
  FieldConfig config;
  std::uint64_t order = 0;
  // GF(2^w) only: exp_ has 2*(order-1) entries so log sums need no reduction.
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;
};

}  // namespace detail

namespace {

using detail::FieldTables;

constexpr std::uint32_t kMaxBinaryDegree = 16;

// Primitive polynomials over GF(2) for degrees 2..16.
constexpr std::array<std::uint32_t, kMaxBinaryDegree + 1> kDefaultPolynomials = {
    0,      0,      0x7,    0xB,    0x13,   0x25,   0x43,   0x89,   0x11D,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

int poly_degree(std::uint32_t p) {
  int d = -1;
  while (p != 0) {
    ++d;
    p >>= 1;
  }
  return d;
}

std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m) {
  const int dm = poly_degree(m);
  for (int da = poly_degree(a); da >= dm; da = poly_degree(a)) a ^= m << (da - dm);
  return a;
}

bool is_irreducible(std::uint32_t poly) {
  const int degree = poly_degree(poly);
  if (degree < 1) return false;
  for (std::uint32_t divisor = 2; poly_degree(divisor) <= degree / 2; ++divisor) {
    if (poly_mod(poly, divisor) == 0) return false;
  }
  return true;
}

std::uint32_t gf2_mul_slow(std::uint32_t a, std::uint32_t b, std::uint32_t poly,
                           std::uint32_t degree) {
  std::uint32_t out = 0;
  while (b != 0) {
    if (b & 1u) out ^= a;
    b >>= 1;
    a <<= 1;
    if (a & (1u << degree)) a ^= poly;
  }
  return out;
}

void build_binary_tables(FieldTables& t) {
  const auto degree = t.config.degree;
  const auto poly = t.config.polynomial;
  const auto group = static_cast<std::uint32_t>(t.order - 1);
  // The default polynomials are primitive, so x (=2) generates; for other
  // irreducible polynomials search for a generator.
  for (std::uint32_t g = 2; g < t.order; ++g) {
    std::vector<std::uint32_t> exp(2 * static_cast<std::size_t>(group));
    std::vector<std::uint32_t> log(t.order, 0);
    std::uint32_t x = 1;
    bool generator = true;
    for (std::uint32_t i = 0; i < group; ++i) {
      if (i > 0 && x == 1) {
        generator = false;
        break;
      }
      exp[i] = x;
      log[x] = i;
      x = gf2_mul_slow(x, g, poly, degree);
    }
    if (!generator || x != 1) continue;
    for (std::uint32_t i = group; i < 2 * group; ++i) exp[i] = exp[i - group];
    t.exp_ = std::move(exp);
    t.log_ = std::move(log);
    return;
  }
  // GF(2) itself: the multiplicative group is trivial.
  t.exp_ = {1, 1};
  t.log_ = {0, 0};
}

const FieldTables* intern(const FieldConfig& config) {
  static std::mutex mu;
  static std::vector<std::unique_ptr<FieldTables>> registry;

  std::lock_guard lock(mu);
  for (const auto& t : registry) {
    if (t->config == config) return t.get();
  }
  config.validate();
  auto t = std::make_unique<FieldTables>();
  t->config = config;
  t->order = config.order();
  if (config.kind == FieldConfig::Kind::kBinaryExtension) build_binary_tables(*t);
  registry.push_back(std::move(t));
  return registry.back().get();
}

const FieldTables* common(const FieldTables* ta, const FieldTables* tb) {
  if (ta == nullptr || tb == nullptr) {
    throw ConfigurationError("field operation on an element with no field");
  }
  if (ta != tb) {
    throw ConfigurationError("field mismatch: " + ta->config.descriptor() + " vs " +
                             tb->config.descriptor());
  }
  return ta;
}

}  // namespace

FieldConfig FieldConfig::prime_field(std::uint32_t p) {
  FieldConfig c;
  c.kind = Kind::kPrime;
  c.prime = p;
  return c;
}

FieldConfig FieldConfig::binary_extension(std::uint32_t degree) {
  if (degree < 1 || degree > kMaxBinaryDegree) {
    throw ConfigurationError("binary extension degree must be in [1, 16], got " +
                             std::to_string(degree));
  }
  return binary_extension(degree, degree == 1 ? 0x3 : kDefaultPolynomials[degree]);
}

FieldConfig FieldConfig::binary_extension(std::uint32_t degree, std::uint32_t polynomial) {
  FieldConfig c;
  c.kind = Kind::kBinaryExtension;
  c.prime = 0;
  c.degree = degree;
  c.polynomial = polynomial;
  return c;
}

namespace {

std::uint32_t parse_u32(std::string_view text, int base, const std::string& whole) {
  std::uint32_t out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out, base);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigurationError("invalid field descriptor '" + whole + "'");
  }
  return out;
}

}  // namespace

FieldConfig FieldConfig::parse(const std::string& descriptor) {
  std::string_view d(descriptor);
  if (d.starts_with("prime:")) return prime_field(parse_u32(d.substr(6), 10, descriptor));
  if (d.starts_with("gf2^")) {
    auto rest = d.substr(4);
    const auto colon = rest.find(':');
    const auto degree = parse_u32(rest.substr(0, colon), 10, descriptor);
    if (colon == std::string_view::npos) return binary_extension(degree);
    auto poly = rest.substr(colon + 1);
    if (poly.starts_with("0x") || poly.starts_with("0X")) poly.remove_prefix(2);
    return binary_extension(degree, parse_u32(poly, 16, descriptor));
  }
  // Bare integer: a prime modulus.
  return prime_field(parse_u32(d, 10, descriptor));
}

std::string FieldConfig::descriptor() const {
  if (kind == Kind::kPrime) return "prime:" + std::to_string(prime);
  std::ostringstream out;
  out << "gf2^" << degree << ":0x" << std::hex << polynomial;
  return out.str();
}

std::uint64_t FieldConfig::order() const {
  if (kind == Kind::kPrime) return prime;
  return std::uint64_t{1} << degree;
}

void FieldConfig::validate() const {
  if (kind == Kind::kPrime) {
    if (!is_prime(prime)) {
      throw ConfigurationError("field modulus " + std::to_string(prime) + " is not prime");
    }
    return;
  }
  if (degree < 1 || degree > kMaxBinaryDegree) {
    throw ConfigurationError("binary extension degree must be in [1, 16], got " +
                             std::to_string(degree));
  }
  if (poly_degree(polynomial) != static_cast<int>(degree)) {
    throw ConfigurationError("reduction polynomial " + descriptor() +
                             " does not have degree " + std::to_string(degree));
  }
  if (!is_irreducible(polynomial)) {
    throw ConfigurationError("reduction polynomial " + descriptor() + " is reducible");
  }
}

Field::Field(const FieldConfig& config) : tables_(intern(config)) {}

Field::Field() : Field(FieldConfig::prime_field(257)) {}

const FieldConfig& Field::config() const { return tables_->config; }

std::uint64_t Field::order() const { return tables_->order; }

FieldElement Field::zero() const { return FieldElement(0, tables_); }

FieldElement Field::one() const { return FieldElement(1, tables_); }

FieldElement Field::element(std::uint64_t value) const {
  if (value >= tables_->order) {
    throw DomainError("symbol " + std::to_string(value) + " out of range for " +
                      tables_->config.descriptor());
  }
  return FieldElement(static_cast<std::uint32_t>(value), tables_);
}

std::vector<FieldElement> Field::nonzero_elements(std::size_t count) const {
  if (count + 1 > tables_->order) {
    throw DomainError("field " + tables_->config.descriptor() + " has fewer than " +
                      std::to_string(count) + " nonzero elements");
  }
  std::vector<FieldElement> out;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) out.push_back(element(i));
  return out;
}

FieldElement add(const FieldElement& a, const FieldElement& b) {
  const auto* t = common(a.tables_, b.tables_);
  if (t->config.kind == FieldConfig::Kind::kBinaryExtension) {
    return FieldElement(a.value_ ^ b.value_, t);
  }
  const auto sum = std::uint64_t{a.value_} + b.value_;
  return FieldElement(static_cast<std::uint32_t>(sum % t->order), t);
}

FieldElement neg(const FieldElement& a) {
  const auto* t = common(a.tables_, a.tables_);
  if (t->config.kind == FieldConfig::Kind::kBinaryExtension || a.value_ == 0) return a;
  return FieldElement(static_cast<std::uint32_t>(t->order - a.value_), t);
}

FieldElement sub(const FieldElement& a, const FieldElement& b) {
  common(a.tables_, b.tables_);
  return add(a, neg(b));
}

FieldElement mul(const FieldElement& a, const FieldElement& b) {
  const auto* t = common(a.tables_, b.tables_);
  if (a.value_ == 0 || b.value_ == 0) return FieldElement(0, t);
  if (t->config.kind == FieldConfig::Kind::kBinaryExtension) {
    return FieldElement(t->exp_[t->log_[a.value_] + t->log_[b.value_]], t);
  }
  const auto prod = std::uint64_t{a.value_} * b.value_;
  return FieldElement(static_cast<std::uint32_t>(prod % t->order), t);
}

FieldElement inv(const FieldElement& a) {
  const auto* t = common(a.tables_, a.tables_);
  if (a.value_ == 0) throw DomainError("inverse of zero");
  if (t->config.kind == FieldConfig::Kind::kBinaryExtension) {
    const auto group = static_cast<std::uint32_t>(t->order - 1);
    return FieldElement(t->exp_[(group - t->log_[a.value_]) % group], t);
  }
  // Extended Euclid on (value, p).
  std::int64_t r0 = static_cast<std::int64_t>(t->order), r1 = a.value_;
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    const auto q = r0 / r1;
    r0 = std::exchange(r1, r0 - q * r1);
    s0 = std::exchange(s1, s0 - q * s1);
  }
  const auto p = static_cast<std::int64_t>(t->order);
  return FieldElement(static_cast<std::uint32_t>(((s0 % p) + p) % p), t);
}

FieldElement div(const FieldElement& a, const FieldElement& b) { return mul(a, inv(b)); }

FieldElement pow(const FieldElement& a, std::uint64_t exponent) {
  auto result = a.field().one();
  auto base = a;
  while (exponent != 0) {
    if (exponent & 1u) result = mul(result, base);
    base = mul(base, base);
    exponent >>= 1;
  }
  return result;
}

FieldElement dot(const FieldVector& a, const FieldVector& b) {
  if (a.size() != b.size() || a.empty()) {
    throw ConfigurationError("dot product of vectors with lengths " +
                             std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  auto acc = mul(a[0], b[0]);
  for (std::size_t i = 1; i < a.size(); ++i) acc = add(acc, mul(a[i], b[i]));
  return acc;
}

FieldVector add(const FieldVector& a, const FieldVector& b) {
  if (a.size() != b.size()) throw ConfigurationError("vector length mismatch");
  FieldVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = add(a[i], b[i]);
  return out;
}

FieldVector sub(const FieldVector& a, const FieldVector& b) {
  if (a.size() != b.size()) throw ConfigurationError("vector length mismatch");
  FieldVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = sub(a[i], b[i]);
  return out;
}

FieldVector mul(const FieldMatrix& a, const FieldVector& x) {
  FieldVector out;
  out.reserve(a.size());
  for (const auto& row : a) out.push_back(dot(row, x));
  return out;
}

namespace {

void check_square(const FieldMatrix& a) {
  if (a.empty()) throw ConfigurationError("empty matrix");
  for (const auto& row : a) {
    if (row.size() != a.size()) {
      throw ConfigurationError("matrix is not square (" + std::to_string(a.size()) + " rows, a row of " +
                               std::to_string(row.size()) + ")");
    }
  }
}

}  // namespace

FieldVector solve_linear(const FieldMatrix& a, const FieldVector& b) {
  check_square(a);
  const auto n = a.size();
  if (b.size() != n) throw ConfigurationError("right-hand side length does not match matrix");

  // Augmented copy; exact arithmetic so any nonzero pivot will do.
  FieldMatrix m = a;
  for (std::size_t i = 0; i < n; ++i) m[i].push_back(b[i]);

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col].is_zero()) ++pivot;
    if (pivot == n) throw SingularMatrixError("matrix is singular");
    std::swap(m[pivot], m[col]);
    const auto scale = inv(m[col][col]);
    for (auto& v : m[col]) v = mul(v, scale);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const auto factor = m[r][col];
      for (std::size_t c = col; c <= n; ++c) m[r][c] = sub(m[r][c], mul(factor, m[col][c]));
    }
  }
  FieldVector x;
  x.reserve(n);
  for (std::size_t i = 0; i < n; ++i) x.push_back(m[i][n]);
  return x;
}

FieldElement determinant(const FieldMatrix& a) {
  check_square(a);
  const auto n = a.size();
  FieldMatrix m = a;
  auto det = m[0][0].field().one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return det.field().zero();
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = neg(det);
    }
    det = mul(det, m[col][col]);
    const auto pivot_inv = inv(m[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      const auto factor = mul(m[r][col], pivot_inv);
      for (std::size_t c = col; c < n; ++c) m[r][c] = sub(m[r][c], mul(factor, m[col][c]));
    }
  }
  return det;
}

}  // namespace hybridpir
