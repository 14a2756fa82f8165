#include <catch2/catch.hpp>

#include "duterm/mock_backend.hpp"
#include "duterm/postedit.hpp"

using namespace duterm;

namespace {

TermDictionary proper_db() {
    TermDictionary dict({"en", "de"});
    dict.add({"cloud", "Wolke", 0, TermOrigin::dev_file});
    dict.add({"cloud service", "Wolkendienst", 0, TermOrigin::dev_file});
    dict.add({"server", "Rechner", 0, TermOrigin::dev_file});
    return dict;
}

TermDictionary random_db() {
    TermDictionary dict({"en", "de"});
    dict.add({"spare alpha", "Ersatzalpha", 0, TermOrigin::dev_file});
    dict.add({"spare beta", "Ersatzbeta", 0, TermOrigin::dev_file});
    dict.add({"spare gamma", "Ersatzgamma", 0, TermOrigin::dev_file});
    return dict;
}

TranslationRecord record(std::uint64_t id, TerminologyMode mode, const std::string& source,
                         std::vector<TermPair> terms) {
    TranslationRecord rec;
    rec.segment_id = id;
    rec.direction = {"en", "de"};
    rec.mode = mode;
    rec.source = source;
    rec.draft = source; // pass-through pseudo-draft
    rec.required_terms = std::move(terms);
    return rec;
}

} // namespace

TEST_CASE("resolve_terms follows the mode contract", "[postedit]") {
    TermDictionary proper = proper_db();
    TermDictionary random = random_db();

    SECTION("noterm resolves to nothing") {
        CHECK(resolve_terms("the cloud server", TerminologyMode::noterm, proper, random, 1)
                  .empty());
    }
    SECTION("proper returns every matching dictionary pair") {
        auto terms = resolve_terms("the cloud and the server", TerminologyMode::proper, proper,
                                   random, 1);
        REQUIRE(terms.size() == 2);
        CHECK(terms[0].source_term == "server"); // longer term first
        CHECK(terms[1].source_term == "cloud");
    }
    SECTION("random draws deterministically under the seed") {
        auto a = resolve_terms("the cloud and the server", TerminologyMode::random, proper,
                               random, 77);
        auto b = resolve_terms("the cloud and the server", TerminologyMode::random, proper,
                               random, 77);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].same_pair(b[i]));
        for (const auto& t : a) CHECK(random.has_pair(t.source_term, t.target_term));
        CHECK_FALSE(a.empty());
    }
}

TEST_CASE("post-edit prompts render both template variants", "[postedit]") {
    TranslationRecord with_terms =
        record(1, TerminologyMode::proper, "the cloud",
               {{"cloud", "Wolke", 0, TermOrigin::dev_file},
                {"server", "Rechner", 0, TermOrigin::dev_file}});
    std::string prompt = build_postedit_prompt(with_terms);
    CHECK(prompt.find("REQUIRED TERMINOLOGY (English: German): \"cloud\": \"Wolke\", "
                      "\"server\": \"Rechner\"") != std::string::npos);
    CHECK(prompt.find("1. Ensure all required terminology is correctly used") !=
          std::string::npos);
    CHECK(prompt.find("SOURCE (English): the cloud") != std::string::npos);

    TranslationRecord no_terms = record(2, TerminologyMode::noterm, "plain text", {});
    std::string quality = build_postedit_prompt(no_terms);
    CHECK(quality.find("There may be important terminology") != std::string::npos);
    CHECK(quality.find("1. Enhance the translation for fluency and accuracy") !=
          std::string::npos);
    CHECK(quality.find("REQUIRED TERMINOLOGY") == std::string::npos);

    // placeholder round-trip recovers source and draft
    auto extracted = prompts::extract(prompts::kPosteditTermTemplate, prompt);
    REQUIRE(extracted.has_value());
    CHECK(extracted->at("source") == "the cloud");
    CHECK(extracted->at("translation") == "the cloud");

    TranslationRecord empty_draft = record(3, TerminologyMode::noterm, "x", {});
    empty_draft.draft = "";
    CHECK_THROWS_AS(build_postedit_prompt(empty_draft), std::invalid_argument);
}

TEST_CASE("postedit_batch accepts constraint-satisfying hypotheses", "[postedit]") {
    MockBackend backend(5);
    std::vector<TranslationRecord> records = {
        record(1, TerminologyMode::proper, "the cloud is busy",
               {{"cloud", "Wolke", 0, TermOrigin::dev_file}}),
        record(2, TerminologyMode::proper, "a server and a cloud service",
               {{"cloud service", "Wolkendienst", 0, TermOrigin::dev_file},
                {"server", "Rechner", 0, TermOrigin::dev_file}}),
        record(3, TerminologyMode::noterm, "nothing to enforce", {})};
    PosteditOutcome out = postedit_batch(backend, records, 0.3, 2);
    CHECK(out.rejected.empty());
    REQUIRE(out.accepted.size() == 3);
    CHECK(satisfies_constraint(out.accepted[0].hypothesis, "Wolke"));
    CHECK(satisfies_constraint(out.accepted[1].hypothesis, "Wolkendienst"));
    CHECK(satisfies_constraint(out.accepted[1].hypothesis, "Rechner"));
    CHECK(out.accepted[2].hypothesis == records[2].draft); // quality-only edit on the mock
    // order preserved
    CHECK(out.accepted[0].segment_id == 1);
    CHECK(out.accepted[1].segment_id == 2);
    CHECK(out.accepted[2].segment_id == 3);
}

TEST_CASE("postedit_batch rejects with reasons and retries once", "[postedit]") {
    SECTION("forced term omission") {
        MockBackend backend(5);
        backend.refuse_terms = {"Wolke"};
        std::vector<TranslationRecord> records = {
            record(1, TerminologyMode::proper, "the cloud is busy",
                   {{"cloud", "Wolke", 0, TermOrigin::dev_file}})};
        PosteditOutcome out = postedit_batch(backend, records, 0.3, 1);
        CHECK(out.accepted.empty());
        REQUIRE(out.rejected.size() == 1);
        REQUIRE(out.rejected[0].reasons.size() == 1);
        CHECK(out.rejected[0].reasons[0] == "missing-term: Wolke");
        CHECK(backend.calls() == 2); // one retry before rejection
    }
    SECTION("empty completion") {
        MockBackend backend(5);
        backend.empty_completion_requests = {1};
        std::vector<TranslationRecord> records = {
            record(1, TerminologyMode::noterm, "whatever text", {})};
        PosteditOutcome out = postedit_batch(backend, records, 0.3, 1);
        REQUIRE(out.rejected.size() == 1);
        CHECK(out.rejected[0].reasons[0] == "empty-hypothesis");
    }
    SECTION("partition: accepted plus rejected covers the input in order") {
        MockBackend backend(5);
        backend.refuse_terms = {"Rechner"};
        std::vector<TranslationRecord> records = {
            record(1, TerminologyMode::proper, "the cloud",
                   {{"cloud", "Wolke", 0, TermOrigin::dev_file}}),
            record(2, TerminologyMode::proper, "the server",
                   {{"server", "Rechner", 0, TermOrigin::dev_file}}),
            record(3, TerminologyMode::noterm, "free text", {})};
        PosteditOutcome out = postedit_batch(backend, records, 0.3, 3);
        REQUIRE(out.accepted.size() == 2);
        REQUIRE(out.rejected.size() == 1);
        CHECK(out.accepted[0].segment_id == 1);
        CHECK(out.accepted[1].segment_id == 3);
        CHECK(out.rejected[0].record.segment_id == 2);
    }
}
