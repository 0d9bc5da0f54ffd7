#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include <cleangraph/graph.hpp>
#include <cleangraph/wiener.hpp>

using namespace cleangraph;

namespace {

cpp_int closed(const std::string& spec,
               WienerVariant v = WienerVariant::proof) {
    return wiener_closed_form(parse_ring_spec(spec), v);
}

}  // namespace

TEST_CASE("census closed form matches pinned values") {
    CHECK(closed("15") == 492);
    CHECK(closed("12") == 114);
    CHECK(closed("6") == 23);
    CHECK(closed("2^1*2^1") == 3);        // triangle
    CHECK(closed("2^1*2^1*2^1") == 21);   // complete graph on 7 vertices
    CHECK(closed("30") == 2588);
    CHECK(closed("60") == 10744);
    CHECK(closed("2^1*2^2*3^1") == 606);
}

TEST_CASE("census pair counts at each distance") {
    WienerCensus c30 = wiener_census(3, 8, 4);  // Z30
    CHECK(c30.d1 == 518);
    CHECK(c30.d2 == 996);
    CHECK(c30.d3 == 26);
    CHECK(c30.total() == 2588);
    CHECK(c30.d1 + c30.d2 + c30.d3 == (cpp_int(56) * 55) / 2);

    WienerCensus c15 = wiener_census(2, 8, 4);
    CHECK(c15.d1 == 86);
    CHECK(c15.d2 == 164);
    CHECK(c15.d3 == 26);
    CHECK(c15.total() == 492);
}

TEST_CASE("case labels") {
    CHECK(wiener_case_label(1, 1) == 1);
    CHECK(wiener_case_label(4, 4) == 2);
    CHECK(wiener_case_label(8, 4) == 3);
    FactoredRing z12 = parse_ring_spec("12");
    CHECK(wiener_case_label(z12.phi(), z12.self_inverse_count()) == 2);
    FactoredRing z15 = parse_ring_spec("15");
    CHECK(wiener_case_label(z15.phi(), z15.self_inverse_count()) == 3);
}

TEST_CASE("statement variant reproduces the legacy coefficient values") {
    // case 2 statement form is negative for two-factor rings
    CHECK(wiener_statement_case2(4, 2) == -142);
    CHECK(closed("12", WienerVariant::statement) == -142);
    CHECK(wiener_statement_case2(2, 2) == -41);
    CHECK(closed("6", WienerVariant::statement) == -41);

    // case 3 complement-census form is exact for two factors ...
    CHECK(closed("15", WienerVariant::statement) == 492);
    CHECK(closed("15", WienerVariant::statement) ==
          closed("15", WienerVariant::proof));
    // ... and overshoots for three or more, by
    // phi*(phi-1)*(3^n - 3*2^n + 3)/2; for Z30 that is 8*7*6/2 = 168
    CHECK(closed("30", WienerVariant::statement) == 2756);
    CHECK(closed("30", WienerVariant::proof) == 2588);
    CHECK(closed("30", WienerVariant::statement) -
              closed("30", WienerVariant::proof) ==
          cpp_int(8) * 7 * 6 / 2);

    // case 1 has a single agreed form; the variants coincide
    CHECK(closed("2^1*2^1*2^1", WienerVariant::statement) == 21);
}

TEST_CASE("legacy complement-census forms agree with the census at n = 2") {
    for (int r = 1; r <= 50; ++r) {
        INFO("r = " << r);
        CHECK(wiener_complement_census_case2(r, 2) ==
              wiener_census(2, r, r).total());
    }
    for (int phi = 1; phi <= 40; ++phi) {
        for (int r = phi % 2 ? 1 : 2; r <= phi; r += 2) {
            INFO("phi = " << phi << ", r = " << r);
            CHECK(wiener_complement_census_case3(phi, r, 2) ==
                  wiener_census(2, phi, r).total());
            CHECK(wiener_census(2, phi, r).total() ==
                  (cpp_int(17) * phi * phi - 15 * phi + 4 * r) / 2);
        }
    }
}

TEST_CASE("complement-census case forms coincide when phi equals r") {
    for (std::size_t n = 2; n <= 10; ++n) {
        for (int r = 1; r <= 64; ++r) {
            INFO("n = " << n << ", r = " << r);
            CHECK(wiener_complement_census_case2(r, n) ==
                  wiener_complement_census_case3(r, r, n));
        }
    }
}

TEST_CASE("single-unit rings give the complete-graph value") {
    for (std::size_t n = 2; n <= 10; ++n) {
        cpp_int E = (cpp_int(1) << n) - 1;
        CHECK(wiener_census(n, 1, 1).total() == E * (E - 1) / 2);
    }
}

TEST_CASE("census domain and parity guards") {
    CHECK_THROWS_AS(wiener_census(1, 1, 1), std::domain_error);
    CHECK_THROWS_AS(wiener_closed_form(parse_ring_spec("4")),
                    std::domain_error);
    CHECK_THROWS_AS(wiener_closed_form(parse_ring_spec("2")),
                    std::domain_error);
    // phi - r must be even for any actual ring; sanity-check the guard
    CHECK_THROWS_AS(wiener_census(2, 2, 1), FormulaViolation);
}

TEST_CASE("wiener_zn handles prime powers and composites") {
    CHECK(wiener_zn(8) == std::nullopt);
    CHECK(wiener_zn(49) == std::nullopt);
    CHECK(wiener_zn(2) == std::nullopt);
    REQUIRE(wiener_zn(15).has_value());
    CHECK(*wiener_zn(15) == 492);
    CHECK(*wiener_zn(12) == 114);
    CHECK(*wiener_zn(30, WienerVariant::statement) == 2756);
    CHECK_THROWS_AS(wiener_zn(1), std::invalid_argument);
    CHECK_THROWS_AS(wiener_zn(0), std::invalid_argument);
}

TEST_CASE("oracle agrees with the closed form on small rings") {
    for (std::uint64_t n : {6u, 10u, 12u, 14u, 15u, 20u, 21u, 30u, 36u, 60u,
                            105u, 210u}) {
        CleanGraph g = build_clean_graph(ring_from_integer(n));
        auto oracle = wiener_oracle(g);
        REQUIRE(oracle.has_value());
        INFO("n = " << n);
        CHECK(*oracle == *wiener_zn(n));
    }
    CleanGraph g4 = build_clean_graph(parse_ring_spec("4"));
    CHECK(wiener_oracle(g4) == std::nullopt);
}

TEST_CASE("closed form depends only on the factor multiset") {
    CHECK(wiener_closed_form(parse_ring_spec("5^1*3^1")) ==
          wiener_closed_form(parse_ring_spec("15")));
    CHECK(wiener_closed_form(parse_ring_spec("3^1*2^2")) ==
          wiener_closed_form(parse_ring_spec("12")));
}

TEST_CASE("wiener report reconciles formula and oracle") {
    WienerReport rep = wiener_report(parse_ring_spec("15"));
    CHECK(rep.ring_spec == "15");
    CHECK(rep.case_label == 3);
    REQUIRE(rep.closed_form.has_value());
    CHECK(*rep.closed_form == 492);
    REQUIRE(rep.oracle.has_value());
    CHECK(*rep.oracle == 492);
    CHECK(rep.match);
    CHECK(rep.pairs_at_distance[1] == 86);
    CHECK(rep.pairs_at_distance[2] == 164);
    CHECK(rep.pairs_at_distance[3] == 26);

    nlohmann::ordered_json j = wiener_report_to_json(rep);
    CHECK(j["ring"] == "15");
    CHECK(j["case"] == 3);
    CHECK(j["variant"] == "proof");
    CHECK(j["closed_form"] == "492");
    CHECK(j["oracle"] == "492");
    CHECK(j["match"] == true);
    CHECK(j["pairs_at_distance"]["1"] == "86");
    CHECK(j["pairs_at_distance"]["3"] == "26");
}

TEST_CASE("wiener report on a single local factor") {
    WienerReport rep = wiener_report(parse_ring_spec("4"));
    CHECK(rep.case_label == 0);
    CHECK_FALSE(rep.closed_form.has_value());
    CHECK_FALSE(rep.oracle.has_value());
    CHECK(rep.match);  // both sides are infinite
    nlohmann::ordered_json j = wiener_report_to_json(rep);
    CHECK(j["closed_form"] == "inf");
    CHECK(j["oracle"] == "inf");
    CHECK(j["match"] == true);
}

TEST_CASE("statement variant is reported as a mismatch where it deviates") {
    WienerReport rep =
        wiener_report(parse_ring_spec("30"), WienerVariant::statement);
    CHECK_FALSE(rep.match);
    CHECK(*rep.closed_form == 2756);
    CHECK(*rep.oracle == 2588);

    WienerReport rep12 =
        wiener_report(parse_ring_spec("12"), WienerVariant::statement);
    CHECK_FALSE(rep12.match);
    CHECK(*rep12.closed_form == -142);
}

TEST_CASE("wiener report honors the vertex budget") {
    CHECK_THROWS_AS(wiener_report(parse_ring_spec("15"),
                                  WienerVariant::proof, 10),
                    BudgetError);
}

TEST_CASE("closed form is instant and exact for a huge squarefree ring") {
    FactoredRing big = parse_ring_spec("2*3*5*7*11*13*17*19*23*29");
    CHECK(big.phi() == 1021870080);
    CHECK(big.self_inverse_count() == 512);
    CHECK(big.vertex_count() == cpp_int("1045373091840"));
    CHECK(wiener_closed_form(big).str() == "1063044152405883080556544");
    CHECK(wiener_closed_form(big, WienerVariant::statement).str() ==
          "1092271827083854724153344");
    CHECK(wiener_zn(6469693230ull) == wiener_closed_form(big));
}
