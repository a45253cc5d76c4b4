#include <gtest/gtest.h>

#include <set>

#include "json.hpp"
#include "regulus/error.hpp"
#include "regulus/identities.hpp"

using namespace regulus;

TEST(IdentityCatalog, IdsAreUnique)
{
    std::set<std::string> ids;
    for (const auto& e : identity_catalog()) {
        EXPECT_TRUE(ids.insert(e.id).second) << e.id;
        EXPECT_FALSE(e.anchor.empty()) << e.id;
    }
}

TEST(IdentityCatalog, RequiredEntriesPass)
{
    for (const char* id : {"e2.0.3.4", "e2.0.3.3", "e0.7", "e0.8", "e0.8.0", "e0.7.0", "e0.2", "e0.2.1", "e0.3",
                           "e0.4", "e1.0", "e1.1", "e1.4", "e50.1", "e10", "e2.0", "e2.5", "e4"}) {
        const auto r = verify_identity(id, 300);
        EXPECT_TRUE(r.passed()) << id << ": " << to_json_line(r);
        EXPECT_EQ(r.checked_upto, 300);
    }
}

TEST(IdentityCatalog, EveryEntryPasses)
{
    for (const auto& e : identity_catalog()) {
        EXPECT_TRUE(verify_identity(e, 300).passed()) << e.id;
    }
}

TEST(IdentityCatalog, DissectionComponents)
{
    for (const char* id : {"e0.7", "e0.8", "e0.8.0", "e0.7.0"}) {
        const auto r = verify_dissection_components(find_identity(id), 300);
        EXPECT_TRUE(r.passed()) << id << ": " << to_json_line(r);
    }
    EXPECT_THROW(verify_dissection_components(find_identity("e0.2"), 300), Error);
}

TEST(IdentityCatalog, CorruptedEntryFailsAtIndexOne)
{
    IdentityEntry bad = find_identity("e0.2");
    bad.rhs.terms.at(0).scalar = 2;
    const auto r = verify_identity(bad, 300);
    EXPECT_FALSE(r.passed());
    ASSERT_TRUE(r.counterexample.has_value());
    // n = 0 of the progression reads T2(1) = 3 against 2.
    EXPECT_EQ(r.counterexample->n, 0);
    EXPECT_EQ(r.counterexample->index, 1);
    EXPECT_EQ(r.counterexample->value, 3);
    EXPECT_EQ(r.counterexample->expected, 2);
}

TEST(IdentityCatalog, Errors)
{
    try {
        find_identity("nope");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownIdentity);
    }
    EXPECT_THROW(verify_identity("e0.7", 15), Error);
}

TEST(IdentityCatalog, JsonExport)
{
    const auto j = nlohmann::json::parse(catalog_json());
    ASSERT_TRUE(j.is_array());
    EXPECT_EQ(j.size(), identity_catalog().size());
    bool saw = false;
    for (const auto& e : j) {
        EXPECT_TRUE(e.contains("lhs") && e.contains("rhs") && e.contains("anchor") && e.contains("modulus"));
        if (e["id"] == "e0.2") {
            saw = true;
            EXPECT_EQ(e["lhs"], "extract_ap(f2^3 / f1^3, 3, 1)");
            EXPECT_EQ(e["rhs"], "3 * f2^4 f3^5 / (f1^8 f6)");
            EXPECT_TRUE(e["modulus"].is_null());
        }
    }
    EXPECT_TRUE(saw);
}

TEST(Evaluate, DissectionWrappers)
{
    Expression e = Expression::of(FQuotient::tuple_regular(2, 3));
    const auto full = evaluate(e, 100);
    e.extract(9, 1);
    const auto part = evaluate(e, 10);
    EXPECT_EQ(part, truncate(extract_ap(full, 9, 1), 10));
    Expression m = Expression::of(FQuotient::tuple_regular(2, 3));
    m.magnified(8).shifted(1);
    EXPECT_EQ(evaluate(m, 41), shift(magnify(truncate(full, 5), 8), 1));
    // A shift past the truncation leaves nothing.
    Expression far = Expression::of(FQuotient(1), 100);
    EXPECT_TRUE(evaluate(far, 50).is_zero());
}
