#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "support/fixtures.hpp"
#include "synthbench/code_map.hpp"
#include "synthbench/demographics.hpp"
#include "synthbench/error.hpp"
#include "synthbench/events.hpp"

using namespace synthbench;

namespace {

EventTable parse(const std::string& csv, const CsvSchema& schema = {},
                 CodeSystem system = CodeSystem::Icd9) {
    std::istringstream in(csv);
    return parse_events(in, schema, system);
}

}  // namespace

TEST_CASE("parse_events basic mapping") {
    CsvSchema schema;
    schema.patient_col = "pid";
    const EventTable t = parse("pid,code\np1,4010\n", schema);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].patient_id == "p1");
    CHECK(t.rows[0].code == "4010");
    CHECK(t.rows[0].system == CodeSystem::Icd9);
    CHECK(t.patients == std::vector<std::string>{"p1"});
}

TEST_CASE("parse_events drops blank codes and counts them") {
    const EventTable t = parse("patient_id,code\np1,\np1,A\n");
    CHECK(t.rows.size() == 1);
    CHECK(t.dropped_empty_code == 1);
    CHECK(t.patients.size() == 1);  // patient survives the dropped row
}

TEST_CASE("parse_events keeps duplicate rows (dedup happens at aggregation)") {
    const EventTable t = parse("patient_id,code\np1,4010\np1,4010\np2,4010\n");
    CHECK(t.rows.size() == 3);
}

TEST_CASE("parse_events error paths") {
    CHECK_THROWS_AS(parse("patient_id,code\np1,A,extra\n"), ParseError);
    CHECK_THROWS_AS(parse("patient_id\np1\n"), ConfigError);  // configured column missing
    CsvSchema schema;
    schema.system_col = "sys";
    CHECK_THROWS_AS(parse("patient_id,code,sys\np1,A,martian\n", schema), ConfigError);
    try {
        parse("patient_id,code\np1,A\nbroken\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("parse_events quoted fields and per-row system override") {
    CsvSchema schema;
    schema.system_col = "sys";
    schema.time_col = "when";
    const EventTable t = parse(
        "patient_id,code,sys,when\n"
        "p1,\"A,B\",icd10,2019-01-01T00:00:00\n"
        "p2,C,,\n",
        schema, CodeSystem::Icd9);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].code == "A,B");
    CHECK(t.rows[0].system == CodeSystem::Icd10);
    CHECK(t.rows[0].time == "2019-01-01T00:00:00");
    CHECK(t.rows[1].system == CodeSystem::Icd9);
}

TEST_CASE("map_codes expansions and drops") {
    CodeMap map(CodeSystem::Icd9, CodeSystem::Icd10);
    map.add("4010", "I10");
    map.add("25000", "E119");
    map.add("25000", "E118");

    EventTable events;
    events.patients = {"p1", "p2", "p3"};
    events.rows = {{"p1", "4010", CodeSystem::Icd9, ""},
                   {"p2", "25000", CodeSystem::Icd9, ""},
                   {"p3", "9999", CodeSystem::Icd9, ""}};

    const MapResult result = map_codes(events, {map});
    REQUIRE(result.events.rows.size() == 3);  // 1 + 2 + 0
    CHECK(result.events.rows[0].code == "I10");
    CHECK(result.events.rows[1].code == "E119");
    CHECK(result.events.rows[2].code == "E118");
    CHECK(result.events.rows[0].system == CodeSystem::Icd10);
    CHECK(result.events.patients.size() == 3);  // p3 kept in the roster

    REQUIRE(result.stages.size() == 1);
    const MapStageReport& stage = result.stages[0];
    CHECK(stage.events_in == 3);
    CHECK(stage.events_out == 3);
    CHECK(stage.events_dropped == 1);
    REQUIRE(stage.unmapped.count("9999") == 1);
    CHECK(stage.unmapped.at("9999") == 1);
}

TEST_CASE("map_codes conserves provenance: out = sum of target list sizes") {
    Rng rng(31);
    CodeMap map(CodeSystem::Icd9, CodeSystem::Icd10);
    std::vector<std::string> keys;
    std::vector<std::size_t> fanout;
    for (int i = 0; i < 20; ++i) {
        const std::string key = "S" + std::to_string(i);
        const std::size_t n_targets = 1 + rng.below(3);
        for (std::size_t t = 0; t < n_targets; ++t) {
            map.add(key, "T" + std::to_string(i) + "_" + std::to_string(t));
        }
        keys.push_back(key);
        fanout.push_back(n_targets);
    }
    EventTable events;
    std::size_t expected_out = 0, expected_dropped = 0;
    for (int e = 0; e < 200; ++e) {
        const std::string pid = "p" + std::to_string(e % 17);
        if (rng.next_double() < 0.2) {
            events.rows.push_back({pid, "absent" + std::to_string(e), CodeSystem::Icd9, ""});
            ++expected_dropped;
        } else {
            const std::size_t pick = rng.below(keys.size());
            events.rows.push_back({pid, keys[pick], CodeSystem::Icd9, ""});
            expected_out += fanout[pick];
        }
    }
    for (int i = 0; i < 17; ++i) events.patients.push_back("p" + std::to_string(i));

    const MapResult result = map_codes(events, {map});
    CHECK(result.events.rows.size() == expected_out);
    CHECK(result.stages[0].events_dropped == expected_dropped);
    std::size_t reported = 0;
    for (const auto& [code, count] : result.stages[0].unmapped) reported += count;
    CHECK(reported == expected_dropped);
}

TEST_CASE("map_codes rejects wrong-system events") {
    CodeMap map(CodeSystem::Icd10, CodeSystem::PhecodeX);
    EventTable events;
    events.patients = {"p1"};
    events.rows = {{"p1", "4010", CodeSystem::Icd9, ""}};
    CHECK_THROWS_AS(map_codes(events, {map}), DataError);
}

TEST_CASE("truncate_to_parent") {
    CHECK(truncate_to_parent("CV_401.1") == "CV_401");
    CHECK(truncate_to_parent("EM_202") == "EM_202");
    CHECK(truncate_to_parent("MB_286.21") == "MB_286");

    // idempotent and never lengthens
    Rng rng(7);
    const std::string alphabet = "ABC_.0123456789";
    for (int trial = 0; trial < 200; ++trial) {
        std::string code;
        const std::size_t len = 1 + rng.below(12);
        for (std::size_t i = 0; i < len; ++i) code += alphabet[rng.below(alphabet.size())];
        const std::string once = truncate_to_parent(code);
        CHECK(once.size() <= code.size());
        CHECK(truncate_to_parent(once) == once);
    }
}

TEST_CASE("aggregate from data") {
    EventTable events;
    events.patients = {"p1", "p2"};
    events.rows = {{"p1", "A", CodeSystem::PhecodeX, ""},
                   {"p1", "A", CodeSystem::PhecodeX, ""},
                   {"p1", "B", CodeSystem::PhecodeX, ""},
                   {"p2", "B", CodeSystem::PhecodeX, ""}};
    AggregateOptions opts;

    const PhenotypeMatrix m = aggregate(events, opts);
    REQUIRE(m.n_rows() == 2);
    REQUIRE(m.n_cols() == 2);
    CHECK(m.vocab().codes() == std::vector<std::string>{"A", "B"});
    CHECK(m.row(0) == PhenotypeMatrix::Row{0, 1});
    CHECK(m.row(1) == PhenotypeMatrix::Row{1});
    CHECK(m.patient_ids() == std::vector<std::string>{"p1", "p2"});

    opts.min_patients = 2;
    const PhenotypeMatrix m2 = aggregate(events, opts);
    CHECK(m2.vocab().codes() == std::vector<std::string>{"B"});
    CHECK(m2.row(0) == PhenotypeMatrix::Row{0});
    CHECK(m2.row(1) == PhenotypeMatrix::Row{0});
}

TEST_CASE("aggregate of an empty table") {
    const PhenotypeMatrix m = aggregate(EventTable{}, AggregateOptions{});
    CHECK(m.n_rows() == 0);
    CHECK(m.n_cols() == 0);
}

TEST_CASE("aggregate rejects mixed coding systems") {
    EventTable events;
    events.patients = {"p1"};
    events.rows = {{"p1", "A", CodeSystem::Icd9, ""}, {"p1", "A", CodeSystem::Icd10, ""}};
    CHECK_THROWS_AS(aggregate(events, AggregateOptions{}), DataError);
}

TEST_CASE("aggregate with fixed vocabulary ignores unknown codes") {
    EventTable events;
    events.patients = {"p1"};
    events.rows = {{"p1", "A", CodeSystem::PhecodeX, ""}, {"p1", "Z", CodeSystem::PhecodeX, ""}};
    AggregateOptions opts;
    opts.policy = VocabPolicy::Fixed;
    opts.fixed_vocab = Vocabulary({"A", "B"});
    const PhenotypeMatrix m = aggregate(events, opts);
    CHECK(m.n_cols() == 2);
    CHECK(m.row(0) == PhenotypeMatrix::Row{0});

    AggregateOptions empty;
    empty.policy = VocabPolicy::Fixed;
    CHECK_THROWS_AS(aggregate(events, empty), ConfigError);
}

TEST_CASE("patients with zero mapped events keep an all-zero row") {
    CodeMap map(CodeSystem::Icd9, CodeSystem::Icd10);
    map.add("4010", "I10");
    EventTable events;
    events.patients = {"p1", "p2"};
    events.rows = {{"p1", "4010", CodeSystem::Icd9, ""}, {"p2", "unmappable", CodeSystem::Icd9, ""}};
    const MapResult mapped = map_codes(events, {map});
    const PhenotypeMatrix m = aggregate(mapped.events, AggregateOptions{});
    REQUIRE(m.n_rows() == 2);
    CHECK(m.row(0).size() == 1);
    CHECK(m.row(1).empty());
}

TEST_CASE("aggregation idempotence: re-expanding the matrix reproduces it") {
    const PhenotypeMatrix m = fixtures::random_matrix(11, 40, 12);
    const EventTable events = expand_to_events(m, CodeSystem::PhecodeX);
    const PhenotypeMatrix again = aggregate(events, AggregateOptions{});
    REQUIRE(again.n_rows() == m.n_rows());
    REQUIRE(again.vocab() == m.vocab());  // fixture codes are already lexicographic
    for (std::size_t i = 0; i < m.n_rows(); ++i) CHECK(again.row(i) == m.row(i));
}

TEST_CASE("FROM_DATA with min_patients=0 lists every event code exactly once") {
    EventTable events;
    events.patients = {"p1", "p2"};
    events.rows = {{"p1", "X", CodeSystem::PhecodeX, ""},
                   {"p2", "X", CodeSystem::PhecodeX, ""},
                   {"p2", "Y", CodeSystem::PhecodeX, ""}};
    const PhenotypeMatrix m = aggregate(events, AggregateOptions{});
    CHECK(m.vocab().codes() == std::vector<std::string>{"X", "Y"});
}

TEST_CASE("filter_cohort") {
    Demographics demo;
    demo.add("p1", {30, Gender::Female, "White"});
    demo.add("p2", {60, Gender::Male, "Asian"});
    const PhenotypeMatrix m(Vocabulary({"A", "B"}), {{0}, {1}}, {"p1", "p2"});

    const PhenotypeMatrix older = filter_cohort(m, demo, CohortPredicate::parse("age>50"));
    REQUIRE(older.n_rows() == 1);
    CHECK(older.patient_ids()[0] == "p2");
    CHECK(older.n_cols() == 2);

    const PhenotypeMatrix nobody = filter_cohort(m, demo, CohortPredicate::parse("age>99"));
    CHECK(nobody.n_rows() == 0);
    CHECK(nobody.n_cols() == 2);

    Demographics incomplete;
    incomplete.add("p1", {30, Gender::Female, "White"});
    CHECK_THROWS_AS(filter_cohort(m, incomplete, CohortPredicate::all()), DataError);
}

TEST_CASE("filter_cohort preserves row order among survivors") {
    Demographics demo;
    demo.add("f1", {40, Gender::Female, "x"});
    demo.add("f2", {41, Gender::Female, "x"});
    demo.add("f3", {42, Gender::Female, "x"});
    demo.add("m1", {40, Gender::Male, "x"});
    demo.add("m2", {41, Gender::Male, "x"});
    const PhenotypeMatrix m(Vocabulary({"A"}), {{0}, {}, {0}, {}, {0}}, {"f1", "m1", "f2", "m2", "f3"});
    const PhenotypeMatrix f = filter_cohort(m, demo, CohortPredicate::parse("gender==Female"));
    REQUIRE(f.n_rows() == 3);
    CHECK(f.patient_ids() == std::vector<std::string>{"f1", "f2", "f3"});
}

TEST_CASE("prevalence") {
    const PhenotypeMatrix m = fixtures::from_dense({{1, 0}, {1, 1}});
    CHECK(prevalence(m) == std::vector<double>{1.0, 0.5});

    const PhenotypeMatrix zeros = fixtures::from_dense({{0, 0}, {0, 0}});
    CHECK(prevalence(zeros) == std::vector<double>{0.0, 0.0});

    const PhenotypeMatrix single = fixtures::from_dense({{1, 0, 1}});
    CHECK(prevalence(single) == std::vector<double>{1.0, 0.0, 1.0});

    const PhenotypeMatrix empty(Vocabulary({"A"}), {});
    CHECK_THROWS_AS(prevalence(empty), DataError);
}

TEST_CASE("prevalence is invariant under an all-true cohort filter") {
    const PhenotypeMatrix m0 = fixtures::random_matrix(5, 30, 8);
    std::vector<std::string> ids;
    Demographics demo;
    for (std::size_t i = 0; i < m0.n_rows(); ++i) {
        ids.push_back("p" + std::to_string(i));
        demo.add(ids.back(), {static_cast<int>(20 + i), Gender::Female, "x"});
    }
    const PhenotypeMatrix m(m0.vocab(), m0.rows(), ids);
    const PhenotypeMatrix filtered = filter_cohort(m, demo, CohortPredicate::all());
    CHECK(prevalence(filtered) == prevalence(m));
}

TEST_CASE("sparse serialization round-trips") {
    const PhenotypeMatrix m = fixtures::random_matrix(17, 25, 9);
    const PhenotypeMatrix with_ids(m.vocab(), m.rows(), [&] {
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < m.n_rows(); ++i) ids.push_back("pt" + std::to_string(i));
        return ids;
    }());
    std::stringstream buf;
    with_ids.write_sparse(buf);
    const PhenotypeMatrix back = PhenotypeMatrix::read_sparse(buf);
    CHECK(back == with_ids);
}

TEST_CASE("dense CSV export shape") {
    const PhenotypeMatrix m = fixtures::from_dense({{1, 0}, {0, 1}});
    std::ostringstream out;
    m.write_dense_csv(out);
    CHECK(out.str() == "patient_id,C0000,C0001\nr0,1,0\nr1,0,1\n");
}

TEST_CASE("vocabulary alignment to intersection") {
    const PhenotypeMatrix real(Vocabulary({"A", "B", "C"}), {{0, 1, 2}}, {"p1"});
    const PhenotypeMatrix syn(Vocabulary({"B", "C", "D"}), {{0, 2}}, {"s1"});
    const VocabularyAlignment a = align_to_intersection(real, syn);
    CHECK(a.real.vocab().codes() == std::vector<std::string>{"B", "C"});
    CHECK(a.dropped_real == std::vector<std::string>{"A"});
    CHECK(a.dropped_syn == std::vector<std::string>{"D"});
    CHECK(a.real.row(0) == PhenotypeMatrix::Row{0, 1});
    CHECK(a.syn.row(0) == PhenotypeMatrix::Row{0});
    // |intersection| + |dropped_real| = K_real
    CHECK(a.real.n_cols() + a.dropped_real.size() == real.n_cols());
}
