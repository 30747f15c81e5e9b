#include <gtest/gtest.h>

#include <algorithm>

#include "hybridpir/errors.hpp"
#include "hybridpir/mds_codebook.hpp"
#include "hybridpir/random.hpp"

namespace hybridpir {
namespace {

MessageRow random_row(const Field& f, std::size_t k, Rng& rng) {
  MessageRow row;
  for (std::size_t i = 0; i < k; ++i) row.push_back(f.element(uniform_below(rng, f.order())));
  return row;
}

TEST(MdsCodebook, SixTwoOverGf7EveryPairInvertible) {
  const Field f(FieldConfig::prime_field(7));
  const auto cb = build_codebook(f, 6, 2);
  int pairs = 0;
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = a + 1; b < 6; ++b) {
      FieldMatrix m{cb.column(a), cb.column(b)};
      EXPECT_FALSE(determinant(m).is_zero()) << a << "," << b;
      ++pairs;
    }
  }
  EXPECT_EQ(pairs, 15);
  EXPECT_TRUE(satisfies_mds_property(cb));
}

TEST(MdsCodebook, FieldTooSmall) {
  const Field f(FieldConfig::prime_field(7));
  EXPECT_NO_THROW(build_codebook(f, 6, 3));
  EXPECT_THROW(build_codebook(f, 7, 2), FieldTooSmallError);
  EXPECT_THROW(build_codebook(f, 3, 4), ConfigurationError);
  EXPECT_THROW(build_codebook(f, 3, 0), ConfigurationError);
}

TEST(MdsCodebook, DecodeFromEveryKSubset) {
  const Field f;
  Rng rng(17);
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      const auto cb = build_codebook(f, n, k);
      const auto row = random_row(f, k, rng);
      std::vector<bool> pick(n, false);
      std::fill(pick.begin(), pick.begin() + k, true);
      do {
        std::vector<Share> shares;
        for (std::size_t i = 0; i < n; ++i) {
          if (pick[i]) shares.push_back({i, encode_symbol(cb, i, row)});
        }
        ASSERT_EQ(decode_row(cb, shares), row);
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
  }
}

TEST(MdsCodebook, ShareErrors) {
  const Field f;
  Rng rng(2);
  const auto cb = build_codebook(f, 5, 3);
  const auto row = random_row(f, 3, rng);
  std::vector<Share> shares;
  for (std::size_t i = 0; i < 5; ++i) shares.push_back({i, encode_symbol(cb, i, row)});
  std::vector<Share> too_few{shares[0], shares[1], shares[1]};
  EXPECT_THROW(decode_row(cb, too_few), InsufficientSharesError);
  shares[4].value = shares[4].value + f.one();
  EXPECT_THROW(decode_row(cb, shares), CorruptionError);
}

TEST(MdsCodebook, EncodingIsLinear) {
  const Field f;
  Rng rng(4);
  const auto cb = build_codebook(f, 6, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<MessageRow> rows{random_row(f, 2, rng), random_row(f, 2, rng),
                                 random_row(f, 2, rng)};
    for (std::size_t n = 0; n < 6; ++n) {
      auto expected = f.zero();
      for (const auto& r : rows) expected += encode_symbol(cb, n, r);
      EXPECT_EQ(encode_linear_combination(cb, n, rows), expected);
    }
  }
}

TEST(MdsCodebook, PuncturedKeepsColumns) {
  const Field f;
  const auto cb = build_codebook(f, 6, 2);
  const std::vector<std::size_t> keep{4, 1, 5};
  const auto sub = cb.punctured(keep);
  ASSERT_EQ(sub.databases(), 3u);
  for (std::size_t i = 0; i < keep.size(); ++i) EXPECT_EQ(sub.column(i), cb.column(keep[i]));
  EXPECT_TRUE(satisfies_mds_property(sub));
  EXPECT_THROW(cb.column(6), DomainError);
}

TEST(MdsCodebook, BinaryExtensionCodebook) {
  const Field f(FieldConfig::binary_extension(4));
  const auto cb = build_codebook(f, 15, 4);
  EXPECT_TRUE(satisfies_mds_property(cb));
}

}  // namespace
}  // namespace hybridpir
