#include "doctest.h"
#include "semiwave/replay.hpp"

using namespace semiwave;

namespace {
RowResult replay(const char* id) { return verify_row(Catalog::instance().row(id)); }
}  // namespace

TEST_CASE("scopes")
{
    CHECK(scope_rows("T10").size() == 5);
    CHECK(scope_rows("T3.row1").size() == 1);
    std::size_t total = 0;
    for (const std::string& t : Catalog::instance().table_ids()) total += Catalog::instance().list_table(t).size();
    CHECK(scope_rows("all").size() == total);
    CHECK_THROWS_AS(scope_rows("T23"), std::out_of_range);
    CHECK_THROWS_AS(scope_rows("T1.row9"), std::out_of_range);
    CHECK_THROWS_AS(scope_rows("bogus"), std::out_of_range);
}

TEST_CASE("table rows")
{
    for (const RowResult& r : verify_scope("T10")) CHECK(r.ok());
    RowResult boost = replay("T3.row1");
    CHECK(boost.verdict == Verdict::Refuted);
    REQUIRE(boost.corrected);
    CHECK(*boost.corrected == Verdict::ConditionallyVerified);
    CHECK(replay("T8.row2").ok());
    CHECK(replay("T9.row3").ok());
}

TEST_CASE("special power rows")
{
    CHECK(replay("T7.row1").ok());
    CHECK(replay("T20.row2").ok());
    CHECK(replay("T21.row1").ok());
    RowResult energy = replay("T17.row2");
    CHECK(!energy.ok());
    REQUIRE(energy.corrected);
    CHECK(*energy.corrected == Verdict::Verified);
    RowResult dil = replay("T18.row2");
    CHECK(!dil.ok());
    REQUIRE(dil.corrected);
    CHECK(dil.notes.front() == "holds with the extra term scaled by -1/2");
}

TEST_CASE("potential rows")
{
    RowResult r3 = replay("T22.row3");
    CHECK(r3.verdict == Verdict::Refuted);
    REQUIRE(r3.corrected);
    CHECK(*r3.corrected == Verdict::ConditionallyVerified);
    bool surfaced = false;
    for (const auto& n : r3.notes) surfaced = surfaced || n.find("consistent at m = {3}") != std::string::npos;
    CHECK(surfaced);
}

TEST_CASE("deterministic json across job counts")
{
    CHECK(to_json(verify_scope("T1", {}, 1)) == to_json(verify_scope("T1", {}, 4)));
    CHECK(to_json(verify_scope("T11", {}, 1)) == to_json(verify_scope("T11", {}, 3)));
}

TEST_CASE("generator combinations")
{
    VectorField x = generator_combination("NLS", "X_trans + 2*X_scal");
    const auto gens = Catalog::instance().generators("NLS");
    CHECK(x.tau == gens.at("X_trans").tau + gens.at("X_scal").tau.scaled(Coeff(2)));
    CHECK_THROWS_AS(generator_combination("NLS", "X_trans + X_nope"), std::invalid_argument);
    CHECK_THROWS_AS(generator_combination("NLS", "X_trans X_scal"), std::invalid_argument);
}
