#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "baleq/ring.hpp"

using namespace baleq;

TEST_CASE("ring spec construction and designator") {
    RingSpec z9(3, 2);
    CHECK(z9.p() == 3);
    CHECK(z9.k() == 2);
    CHECK(z9.modulus() == 9);
    CHECK(z9.designator() == "Z/3^2");
    CHECK(RingSpec(5, 1).designator() == "Z/5");
    CHECK(RingSpec::parse("Z/3^2") == z9);
    CHECK(RingSpec::parse("Z/7") == RingSpec(7, 1));
    CHECK_THROWS_AS(RingSpec(4, 1), RingError);    // not prime
    CHECK_THROWS_AS(RingSpec(1, 1), RingError);
    CHECK_THROWS_AS(RingSpec(3, 0), RingError);    // k >= 1
    CHECK_THROWS_AS(RingSpec(2, 63), RingError);   // modulus cap 2^62
    CHECK_THROWS_AS(RingSpec::parse("Z/6"), RingError);
    CHECK_THROWS_AS(RingSpec::parse("nonsense"), RingError);
}

TEST_CASE("pinned arithmetic values") {
    RingSpec z9(3, 2), z4(2, 2), z5(5, 1), z8(2, 3);
    CHECK(add(RingElem(z9, 7), RingElem(z9, 5)).value() == 3);
    CHECK(mul(RingElem(z9, 3), RingElem(z9, 3)).value() == 0);
    CHECK(neg(RingElem(z4, 1)).value() == 3);
    CHECK(sub(RingElem(z5, 1), RingElem(z5, 3)).value() == 3);
    CHECK(inverse(RingElem(z9, 2)).value() == 5);
    CHECK(inverse(RingElem(z5, 4)).value() == 4);
    CHECK_THROWS_AS(inverse(RingElem(z9, 3)), NotAUnit);
    CHECK_THROWS_AS(inverse(RingElem(z9, 0)), NotAUnit);
    CHECK_THROWS_AS(add(RingElem(z9, 1), RingElem(z5, 1)), RingMismatch);

    auto vu = val_unit(RingElem(z9, 6));
    CHECK(vu.valuation == 1);
    REQUIRE(vu.unit_part.has_value());
    CHECK(vu.unit_part->value() == 2);

    auto vz = val_unit(RingElem(z9, 0));
    CHECK(vz.valuation == 2);
    CHECK(!vz.unit_part.has_value());

    auto v8 = val_unit(RingElem(z8, 4));
    CHECK(v8.valuation == 2);
    REQUIRE(v8.unit_part.has_value());
    CHECK(v8.unit_part->value() == 1);
}

TEST_CASE("unit and zero predicates") {
    RingSpec z9(3, 2);
    CHECK(RingElem(z9, 1).is_unit());
    CHECK(RingElem(z9, 8).is_unit());
    CHECK(!RingElem(z9, 3).is_unit());
    CHECK(!RingElem(z9, 6).is_unit());
    CHECK(!RingElem(z9, 0).is_unit());
    CHECK(RingElem(z9, 0).is_zero());
    CHECK(!RingElem(z9, 3).is_zero());
    CHECK(RingElem(z9, 9).is_zero());  // constructor reduces mod 9
}

TEST_CASE("find_unit_avoiding") {
    CHECK(find_unit_avoiding(RingSpec(5, 1), 1).value() == 2);
    CHECK(find_unit_avoiding(RingSpec(3, 2), 2).value() == 1);
    CHECK(find_unit_avoiding(RingSpec(3, 1), 1).value() == 2);
    CHECK_THROWS_AS(find_unit_avoiding(RingSpec(2, 2), 1), ResidueFieldTooSmall);
    CHECK_THROWS_AS(find_unit_avoiding(RingSpec(2, 1), 0), ResidueFieldTooSmall);
}

TEST_CASE("exhaustive ring laws for small moduli") {
    const std::pair<std::uint64_t, unsigned> specs[] = {
        {2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {3, 4}, {5, 1}, {5, 2}, {7, 1}, {97, 2}};
    for (auto [p, k] : specs) {
        RingSpec R(p, k);
        const std::uint64_t m = R.modulus();
        if (m > 10000) continue;
        for (std::uint64_t a = 0; a < m; ++a) {
            RingElem ea(R, a);
            CHECK(add(ea, neg(ea)).is_zero());
            CHECK(mul(ea, RingElem(R, 1)) == ea);
            // units and only units invert; the inverse really inverts
            if (a % p != 0) {
                CHECK(mul(ea, inverse(ea)).value() == 1);
            } else {
                CHECK_THROWS_AS(inverse(ea), NotAUnit);
            }
            // valuation/unit decomposition reconstructs the element
            auto vu = val_unit(ea);
            if (a == 0) {
                CHECK(vu.valuation == R.k());
                CHECK(!vu.unit_part.has_value());
            } else {
                std::uint64_t pw = 1;
                for (unsigned i = 0; i < vu.valuation; ++i) pw *= p;
                REQUIRE(vu.unit_part.has_value());
                CHECK(vu.unit_part->is_unit());
                CHECK(mul(RingElem(R, pw), *vu.unit_part) == ea);
            }
            for (std::uint64_t b = 0; b < m; ++b) {
                RingElem eb(R, b);
                CHECK(add(ea, eb) == add(eb, ea));
                CHECK(mul(ea, eb) == mul(eb, ea));
                CHECK(sub(ea, eb) == add(ea, neg(eb)));
            }
        }
        if (p >= 3) {
            for (std::uint64_t f = 0; f < p && f < 50; ++f) {
                RingElem u = find_unit_avoiding(R, f);
                CHECK(u.is_unit());
                CHECK(u.residue() != f % p);
            }
        }
    }
}
