#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <cleangraph/verify.hpp>

using namespace cleangraph;

namespace {

using RecordKey = std::tuple<std::string, std::string, std::string,
                             std::string, std::string, std::string>;

RecordKey stable_fields(const VerificationRecord& r) {
    return {r.ring, r.check, r.formula, r.oracle, r.match, r.erratum};
}

std::vector<RecordKey> stable_fields(
    const std::vector<VerificationRecord>& recs) {
    std::vector<RecordKey> out;
    out.reserve(recs.size());
    for (const auto& r : recs) out.push_back(stable_fields(r));
    return out;
}

const VerificationRecord& find_record(
    const std::vector<VerificationRecord>& recs, const std::string& check) {
    for (const auto& r : recs) {
        if (r.check == check) return r;
    }
    FAIL("no record for check " << check);
    return recs.front();  // unreachable
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path("cleangraph_test_" + name + ".tmp") {
        std::remove(path.c_str());
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("check names round trip") {
    CHECK(all_checks().size() == 7);
    for (CheckKind k : all_checks()) {
        CHECK(parse_check(to_string(k)) == k);
    }
    CHECK(to_string(CheckKind::Wiener) == "wiener");
    CHECK(to_string(CheckKind::SelfInverseCount) == "self-inverse-count");
    CHECK_THROWS_AS(parse_check("bogus"), std::invalid_argument);
}

TEST_CASE("csv format") {
    CHECK(csv_header() ==
          "ring,check,formula,oracle,match,erratum,formula_ms,oracle_ms");
    VerificationRecord r{"15", "wiener", "492", "492", "true", "", 1, 2};
    CHECK(to_csv_row(r) == "15,wiener,492,492,true,,1,2");
    std::ostringstream os;
    write_csv({r}, os);
    CHECK(os.str() == csv_header() + "\n" + to_csv_row(r) + "\n");
}

TEST_CASE("every check verifies on Z15") {
    std::vector<VerificationRecord> recs =
        verify_ring(parse_ring_spec("15"), VerifyOptions{});
    REQUIRE(recs.size() == 7);
    for (const auto& r : recs) {
        INFO(r.check);
        CHECK(r.ring == "15");
        CHECK(r.match == "true");
        CHECK(r.erratum.empty());
    }
    CHECK(find_record(recs, "wiener").formula == "492");
    CHECK(find_record(recs, "wiener").oracle == "492");
    CHECK(find_record(recs, "diameter").formula == "3");
    CHECK(find_record(recs, "connectivity").formula == "true");
    CHECK(find_record(recs, "self-inverse-count").formula == "4");
    CHECK(find_record(recs, "idempotent-count").formula == "3");
    CHECK(find_record(recs, "matching").formula == "12");
    CHECK(find_record(recs, "matching").oracle == "12");
    // sampled distances: both columns hold the same pair-distance sum
    const auto& dist = find_record(recs, "distance");
    CHECK(dist.formula == dist.oracle);
    CHECK(all_acceptable(recs));
}

TEST_CASE("records arrive in requested check order") {
    VerifyOptions opts;
    opts.checks = {CheckKind::Matching, CheckKind::Wiener};
    auto recs = verify_ring(parse_ring_spec("6"), opts);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].check == "matching");
    CHECK(recs[1].check == "wiener");
}

TEST_CASE("statement variant records known formula deviations") {
    VerifyOptions opts;
    opts.variant = WienerVariant::statement;
    opts.checks = {CheckKind::Wiener};

    auto r30 = verify_ring(parse_ring_spec("30"), opts);
    REQUIRE(r30.size() == 1);
    CHECK(r30[0].formula == "2756");
    CHECK(r30[0].oracle == "2588");
    CHECK(r30[0].match == "false");
    CHECK(r30[0].erratum == "statement-form");
    CHECK(all_acceptable(r30));

    auto r12 = verify_ring(parse_ring_spec("12"), opts);
    CHECK(r12[0].formula == "-142");
    CHECK(r12[0].oracle == "114");
    CHECK(r12[0].erratum == "statement-form");

    // two factors, case 3: the legacy form is exact, so no deviation
    auto r15 = verify_ring(parse_ring_spec("15"), opts);
    CHECK(r15[0].match == "true");
    CHECK(r15[0].erratum.empty());
}

TEST_CASE("an untagged mismatch is not acceptable") {
    std::vector<VerificationRecord> recs = {
        {"15", "wiener", "491", "492", "false", "", 0, 0}};
    CHECK_FALSE(all_acceptable(recs));
    recs[0].erratum = "statement-form";
    CHECK(all_acceptable(recs));
    recs[0].erratum.clear();
    recs[0].match = "skip";
    CHECK(all_acceptable(recs));
}

TEST_CASE("single-factor rings follow the disconnected convention") {
    auto recs = verify_ring(parse_ring_spec("4"), VerifyOptions{});
    CHECK(find_record(recs, "wiener").formula == "inf");
    CHECK(find_record(recs, "wiener").oracle == "inf");
    CHECK(find_record(recs, "wiener").match == "true");
    CHECK(find_record(recs, "diameter").match == "true");
    CHECK(find_record(recs, "connectivity").formula == "false");
    CHECK(find_record(recs, "connectivity").oracle == "false");
    CHECK(find_record(recs, "distance").formula == "skip:domain");
    CHECK(find_record(recs, "distance").match == "skip");
    CHECK(find_record(recs, "matching").match == "skip");
    CHECK(find_record(recs, "self-inverse-count").formula == "2");
    CHECK(find_record(recs, "self-inverse-count").match == "true");
    CHECK(find_record(recs, "idempotent-count").formula == "1");
    CHECK(find_record(recs, "idempotent-count").match == "true");
    CHECK(all_acceptable(recs));
}

TEST_CASE("the one-vertex ring deviates and is tagged") {
    auto recs = verify_ring(parse_ring_spec("2"), VerifyOptions{});
    const auto& w = find_record(recs, "wiener");
    CHECK(w.formula == "inf");
    CHECK(w.oracle == "0");
    CHECK(w.match == "false");
    CHECK(w.erratum == "trivial-graph");
    const auto& d = find_record(recs, "diameter");
    CHECK(d.formula == "inf");
    CHECK(d.oracle == "0");
    CHECK(d.erratum == "trivial-graph");
    const auto& c = find_record(recs, "connectivity");
    CHECK(c.formula == "false");
    CHECK(c.oracle == "true");
    CHECK(c.erratum == "trivial-graph");
    CHECK(find_record(recs, "self-inverse-count").match == "true");
    CHECK(find_record(recs, "idempotent-count").match == "true");
    CHECK(all_acceptable(recs));
}

TEST_CASE("budget exhaustion produces skips, not failures") {
    VerifyOptions opts;
    opts.budget = 10;  // Z15 needs 24 vertices
    auto recs = verify_ring(parse_ring_spec("15"), opts);
    const auto& w = find_record(recs, "wiener");
    CHECK(w.formula == "492");  // closed form is still emitted
    CHECK(w.oracle == "skip:budget");
    CHECK(w.match == "skip");
    CHECK(find_record(recs, "distance").oracle == "skip:budget");
    CHECK(find_record(recs, "matching").formula == "12");
    CHECK(find_record(recs, "matching").oracle == "skip:budget");
    // modulus-level oracles do not need the graph
    CHECK(find_record(recs, "self-inverse-count").match == "true");
    CHECK(find_record(recs, "idempotent-count").match == "true");
    CHECK(all_acceptable(recs));

    VerifyOptions mopts;
    mopts.matching_budget = 10;
    auto mrecs = verify_ring(parse_ring_spec("15"), mopts);
    const auto& m = find_record(mrecs, "matching");
    CHECK(m.formula == "12");
    CHECK(m.oracle == "skip:budget");
    CHECK(m.match == "skip");  // construction itself still validated
}

TEST_CASE("verify_range emits rings in ascending order") {
    VerifyOptions opts;
    opts.checks = {CheckKind::Wiener, CheckKind::SelfInverseCount};
    auto recs = verify_range(6, 12, opts);
    REQUIRE(recs.size() == 14);
    std::vector<std::string> rings;
    for (std::size_t i = 0; i < recs.size(); i += 2) {
        CHECK(recs[i].check == "wiener");
        CHECK(recs[i + 1].check == "self-inverse-count");
        CHECK(recs[i].ring == recs[i + 1].ring);
        rings.push_back(recs[i].ring);
    }
    CHECK(rings == std::vector<std::string>{"6", "7", "8", "9", "10", "11",
                                            "12"});
    CHECK(all_acceptable(recs));
}

TEST_CASE("verification output is deterministic") {
    auto a = verify_range(6, 40, VerifyOptions{});
    auto b = verify_range(6, 40, VerifyOptions{});
    CHECK(stable_fields(a) == stable_fields(b));
    CHECK(all_acceptable(a));
}

TEST_CASE("worker pool preserves record order") {
    VerifyOptions serial;
    VerifyOptions pooled;
    pooled.jobs = 3;
    auto a = verify_range(6, 40, serial);
    auto b = verify_range(6, 40, pooled);
    CHECK(stable_fields(a) == stable_fields(b));
}

TEST_CASE("range validation") {
    CHECK_THROWS_AS(rings_in_range(1, 5), std::invalid_argument);
    CHECK_THROWS_AS(rings_in_range(10, 5), std::invalid_argument);
    auto rings = rings_in_range(2, 4);
    REQUIRE(rings.size() == 3);
    CHECK(rings[0].spec_string() == "2");
    CHECK(rings[2].spec_string() == "4");
}

TEST_CASE("cache round trip") {
    TempFile tmp("cache");
    VerifyOptions opts;
    opts.checks = {CheckKind::Wiener, CheckKind::Matching};
    {
        VerifyCache cache(tmp.path);
        opts.cache = &cache;
        auto first = verify_ring(parse_ring_spec("15"), opts);
        CHECK(cache.hit_count() == 0);
        auto second = verify_ring(parse_ring_spec("15"), opts);
        CHECK(cache.hit_count() == 2);
        CHECK(stable_fields(first) == stable_fields(second));
        CHECK(cache.flush() == 2);
    }
    {
        VerifyCache cache(tmp.path);
        CHECK(cache.entry_count() == 2);
        opts.cache = &cache;
        verify_ring(parse_ring_spec("15"), opts);
        CHECK(cache.hit_count() == 2);  // warm from disk

        // a different variant is a different key
        VerifyOptions stmt = opts;
        stmt.variant = WienerVariant::statement;
        stmt.checks = {CheckKind::Wiener};
        auto recs = verify_ring(parse_ring_spec("15"), stmt);
        CHECK(cache.hit_count() == 2);
        CHECK(recs[0].match == "true");
    }
}

TEST_CASE("cache loader skips unreadable lines") {
    TempFile tmp("cache_garbage");
    {
        std::ofstream out(tmp.path);
        out << "this is not json\n";
        out << "{\"spec\":\"15\",\"check\":\"wiener\",\"variant\":\"proof\","
               "\"version\":\"" << kCacheFormatVersion << "\","
               "\"formula\":\"492\",\"oracle\":\"492\",\"match\":\"true\","
               "\"erratum\":\"\",\"formula_ms\":0,\"oracle_ms\":0}\n";
        out << "{\"spec\":\"6\",\"check\":\"wiener\",\"variant\":\"proof\","
               "\"version\":\"0.0.1\",\"formula\":\"23\",\"oracle\":\"23\","
               "\"match\":\"true\",\"erratum\":\"\",\"formula_ms\":0,"
               "\"oracle_ms\":0}\n";
    }
    VerifyCache cache(tmp.path);
    CHECK(cache.entry_count() == 1);  // garbage and stale versions dropped
    CHECK(cache.lookup("15", "wiener", "proof").has_value());
    CHECK_FALSE(cache.lookup("6", "wiener", "proof").has_value());
}

TEST_CASE("modulus-level oracles") {
    CHECK(brute_self_inverse_count(2) == 1);
    CHECK(brute_self_inverse_count(15) == 4);
    CHECK(brute_self_inverse_count(16) == 4);
    CHECK(brute_self_inverse_count(105) == 8);
    CHECK_THROWS_AS(brute_self_inverse_count(1), std::invalid_argument);

    CHECK(residue_idempotent_count(2) == 1);
    CHECK(residue_idempotent_count(12) == 3);   // 1, 4, 9
    CHECK(residue_idempotent_count(30) == 7);
    CHECK(residue_idempotent_count(16) == 1);
    CHECK_THROWS_AS(residue_idempotent_count(1), std::invalid_argument);
}

TEST_CASE("non-decimal specs verify through factor-level oracles") {
    auto recs = verify_ring(parse_ring_spec("3^1*3^1"), VerifyOptions{});
    for (const auto& r : recs) {
        INFO(r.check);
        CHECK(r.ring == "3^1*3^1");
        CHECK((r.match == "true" || r.match == "skip"));
        CHECK(r.erratum.empty());
    }
    CHECK(find_record(recs, "idempotent-count").formula == "3");
    CHECK(find_record(recs, "idempotent-count").oracle == "3");
    CHECK(find_record(recs, "idempotent-count").match == "true");
    CHECK(find_record(recs, "self-inverse-count").formula == "4");
    CHECK(find_record(recs, "self-inverse-count").match == "true");
}
