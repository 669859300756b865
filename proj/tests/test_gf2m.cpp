#include <gtest/gtest.h>

#include <set>

#include "cumex/gf2m.hpp"

using namespace cumex::gf2m;

namespace {

// carry-less product followed by polynomial remainder: a second, independent path
std::uint32_t mul_by_remainder(const FieldSpec& f, std::uint32_t a, std::uint32_t b) {
  return poly_mod(clmul(a, b), f.reduction_poly());
}

}  // namespace

TEST(Polynomials, Irreducibility) {
  EXPECT_TRUE(is_irreducible(0x13));
  EXPECT_TRUE(is_irreducible(0x19));
  EXPECT_TRUE(is_irreducible(0x1F));
  EXPECT_FALSE(is_irreducible(0x11));  // (x+1)^4
  EXPECT_FALSE(is_irreducible(0x15));  // (x^2+x+1)^2
  EXPECT_TRUE(is_irreducible(0x11D));
  EXPECT_TRUE(is_irreducible(0x11B));
  EXPECT_FALSE(is_irreducible(0x100));
  EXPECT_FALSE(is_irreducible(0x1));
  int count = 0;
  for (std::uint32_t p = 0x100; p < 0x200; ++p) count += is_irreducible(p);
  EXPECT_EQ(count, 30);
  count = 0;
  for (std::uint32_t p = 0x10; p < 0x20; ++p) count += is_irreducible(p);
  EXPECT_EQ(count, 3);
}

TEST(Polynomials, ClmulAndMod) {
  EXPECT_EQ(clmul(0x3, 0x3), 0x5u);
  EXPECT_EQ(clmul(0x57, 0x83), 0x2B79u);
  EXPECT_EQ(poly_mod(0x2B79, 0x11B), 0xC1u);
  EXPECT_EQ(poly_degree(0), -1);
  EXPECT_EQ(poly_degree(0x11D), 8);
}

TEST(FieldSpec, Validation) {
  EXPECT_THROW(FieldSpec(5, 0x25), std::invalid_argument);
  EXPECT_THROW(FieldSpec(4, 0x11D), std::invalid_argument);
  EXPECT_THROW(FieldSpec(4, 0x11), std::invalid_argument);
  EXPECT_THROW(FieldSpec::by_name("f32"), std::invalid_argument);
  EXPECT_THROW(FieldSpec::by_name("f256", 0x101), std::invalid_argument);
  EXPECT_EQ(FieldSpec::by_name("f256"), FieldSpec::f256());
  EXPECT_EQ(FieldSpec::by_name("f256", 0x11B), FieldSpec::aes());
  EXPECT_EQ(FieldSpec::by_name("f16").order(), 16u);
  EXPECT_EQ(FieldSpec::f256().name(), "f256");
}

TEST(FieldElement, RangeAndFieldChecks) {
  EXPECT_THROW(FieldElement(FieldSpec::f16(), 16), std::out_of_range);
  EXPECT_NO_THROW(FieldElement(FieldSpec::f16(), 15));
  EXPECT_THROW(add(FieldElement(FieldSpec::f16(), 1), FieldElement(FieldSpec::f256(), 1)), std::invalid_argument);
  EXPECT_THROW(mul(FieldElement(FieldSpec::f256(), 1), FieldElement(FieldSpec::aes(), 1)), std::invalid_argument);
}

TEST(Multiplication, KnownProducts) {
  EXPECT_EQ(mul_raw(FieldSpec::aes(), 0x57, 0x83), 0xC1u);
  EXPECT_EQ(mul_raw(FieldSpec::aes(), 0x57, 0x13), 0xFEu);
  EXPECT_EQ(mul_raw(FieldSpec::f16(), 0x2, 0x8), 0x3u);  // x^4 = x + 1
  EXPECT_EQ(mul_raw(FieldSpec::f256(), 0x2, 0x80), 0x1Du);
  EXPECT_EQ(mul(FieldElement(FieldSpec::f16(), 3), FieldElement(FieldSpec::f16(), 7)).value(), 0x9u);
  EXPECT_EQ(add(FieldElement(FieldSpec::f16(), 3), FieldElement(FieldSpec::f16(), 7)).value(), 0x4u);
}

TEST(Multiplication, AgreesWithRemainderPath) {
  for (const auto& f : {FieldSpec::f16(), FieldSpec::f256(), FieldSpec::aes()})
    for (std::uint32_t a = 0; a < f.order(); ++a)
      for (std::uint32_t b = 0; b < f.order(); ++b) ASSERT_EQ(mul_raw(f, a, b), mul_by_remainder(f, a, b));
}

TEST(Multiplication, FieldAxioms) {
  for (const auto& f : {FieldSpec::f16(), FieldSpec::f256()}) {
    const std::uint32_t q = f.order();
    for (std::uint32_t a = 0; a < q; a += (q == 16 ? 1 : 7))
      for (std::uint32_t b = 0; b < q; b += (q == 16 ? 1 : 5))
        for (std::uint32_t c = 0; c < q; c += (q == 16 ? 1 : 11)) {
          ASSERT_EQ(mul_raw(f, a, b ^ c), mul_raw(f, a, b) ^ mul_raw(f, a, c));
          ASSERT_EQ(mul_raw(f, mul_raw(f, a, b), c), mul_raw(f, a, mul_raw(f, b, c)));
        }
    for (std::uint32_t a = 1; a < q; ++a) {
      EXPECT_EQ(pow_raw(f, a, q - 1), 1u);
      std::set<std::uint32_t> row;
      for (std::uint32_t b = 0; b < q; ++b) row.insert(mul_raw(f, a, b));
      EXPECT_EQ(row.size(), q);  // multiplication by a nonzero constant is a bijection
    }
  }
}

TEST(LogTables, MatchReferenceProduct) {
  for (const auto& f : {FieldSpec::f16(), FieldSpec::f256(), FieldSpec::aes()}) {
    const LogTables t(f);
    for (std::uint32_t a = 0; a < f.order(); ++a)
      for (std::uint32_t b = 0; b < f.order(); ++b) ASSERT_EQ(t.mul(a, b), mul_raw(f, a, b));
    for (std::uint32_t a = 1; a < f.order(); ++a) EXPECT_EQ(mul_raw(f, a, t.inverse(a)), 1u);
    EXPECT_THROW(t.inverse(0), std::domain_error);
  }
}

TEST(LogTables, Generators) {
  EXPECT_EQ(LogTables(FieldSpec::f16()).generator(), 2u);
  EXPECT_EQ(LogTables(FieldSpec::f256()).generator(), 2u);
  EXPECT_EQ(LogTables(FieldSpec::aes()).generator(), 3u);  // x is not primitive modulo 0x11B
}

TEST(HammingWeight, Values) {
  EXPECT_EQ(hamming_weight(0u), 0);
  EXPECT_EQ(hamming_weight(0xFFu), 8);
  EXPECT_EQ(hamming_weight(FieldElement(FieldSpec::f16(), 0xB)), 3);
}
