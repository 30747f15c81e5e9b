#include <gtest/gtest.h>

#include "hybridpir/errors.hpp"
#include "hybridpir/privacy_audit.hpp"

namespace hybridpir {
namespace {

PrivacyReport run(int n, int m, int t, int k, AuditOptions options) {
  const auto p = plan(n, m, t, k);
  return audit_privacy(p, build_partition_map(p), options);
}

TEST(PrivacyAudit, ExhaustiveSmallInstancesAreExactlyPrivate) {
  AuditOptions o;
  o.mode = AuditMode::kExhaustive;
  for (const auto k : {1, 2}) {
    const auto r = run(3, 2, 2, k, o);
    EXPECT_TRUE(r.pass);
    EXPECT_FALSE(r.pairs.empty());
    for (const auto& pair : r.pairs) {
      ASSERT_TRUE(pair.exact_distance.has_value());
      EXPECT_EQ(*pair.exact_distance, Rational(0));
    }
  }
}

TEST(PrivacyAudit, ExhaustiveDetectsIdentityPermutations) {
  AuditOptions o;
  o.mode = AuditMode::kExhaustive;
  o.disable_permutations = true;
  const auto r = run(3, 2, 2, 1, o);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_distance, 0.1);
}

TEST(PrivacyAudit, SampledGoldenBelowThreshold) {
  AuditOptions o;
  o.trials = 2000;
  o.threshold = 0.1;
  o.seed = 5;
  o.database = 0;
  const auto r = run(6, 2, 5, 2, o);
  EXPECT_TRUE(r.pass) << r.max_distance;
}

TEST(PrivacyAudit, SingleMessageTriviallyPasses) {
  AuditOptions o;
  o.mode = AuditMode::kExhaustive;
  const auto r = run(3, 1, 2, 1, o);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.pairs.empty());
}

TEST(PrivacyAudit, EnumerationBound) {
  AuditOptions o;
  o.mode = AuditMode::kExhaustive;
  o.enumeration_bound = 10;
  EXPECT_THROW(run(6, 2, 5, 2, o), EnumerationBoundError);
  const auto p = plan(3, 2, 2, 1);
  EXPECT_GT(permutation_outcomes(p, build_partition_map(p)), 1u);
}

}  // namespace
}  // namespace hybridpir
