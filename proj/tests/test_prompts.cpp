#include "support/support.hpp"

#include "ragloop/prompts/registry.hpp"

#include <catch_amalgamated.hpp>

using namespace ragloop;
using namespace ragloop::prompts;

TEST_CASE("builtin registry holds every template") {
    const auto& reg = PromptRegistry::builtin();
    CHECK(reg.list().size() == kAllTemplates.size());
    for (auto id : kAllTemplates) {
        const auto& t = reg.get(id);
        CHECK(t.id == id);
        CHECK(placeholders(t.body) == t.required_slots);
        CHECK(parse_template_id(to_string(id)) == id);
    }
    CHECK(reg.get(TemplateId::extract_short_answer).shot_style == ShotStyle::few_shot);
    CHECK(reg.get(TemplateId::gpt_score).shot_style == ShotStyle::zero_shot);
    CHECK(reg.get(TemplateId::train_solve).required_slots.empty());
}

TEST_CASE("render substitutes once and ignores extra bindings") {
    const auto& reg = PromptRegistry::builtin();
    const auto out = reg.render(TemplateId::train_final_answer,
                                {{"question", "Q {{evidence}}"}, {"evidence", "E"}, {"unused", "x"}});
    CHECK(out.find("Question: Q {{evidence}}") != std::string::npos);
    CHECK(out.find("Gathered evidence:\nE") != std::string::npos);
    CHECK(reg.render("train_final_answer", {{"question", "a"}, {"evidence", "b"}}) ==
          reg.render(TemplateId::train_final_answer, {{"question", "a"}, {"evidence", "b"}}));
}

TEST_CASE("missing slot names the slot") {
    try {
        PromptRegistry::builtin().render(TemplateId::solution, {{"question", "q"}});
        FAIL("expected MissingSlot");
    } catch (const MissingSlot& e) {
        CHECK(e.slot() == "history");
    }
    CHECK_THROWS_AS(PromptRegistry::builtin().render("no_such_template", {}), UnknownTemplate);
}

TEST_CASE("template files must declare the slots they use") {
    CHECK_NOTHROW(parse_template_file("---\nid: gpt_score\nslots: a, b\nshot_style: zero_shot\n---\n{{a}} {{b}}", "x"));
    CHECK_THROWS_AS(parse_template_file("---\nid: gpt_score\nslots: a\n---\n{{a}} {{b}}", "x"), PromptError);
    CHECK_THROWS_AS(parse_template_file("---\nid: gpt_score\nslots: a, b\n---\n{{a}}", "x"), PromptError);
    CHECK_THROWS_AS(parse_template_file("---\nid: nope\nslots:\n---\nbody", "x"), PromptError);
    CHECK_THROWS_AS(parse_template_file("no front matter", "x"), PromptError);
}

TEST_CASE("directory overrides replace builtin templates") {
    testing::TempDir dir;
    testing::write_file(dir / "score.prompt",
                        "---\nid: gpt_score\nslots: question, reference_answer, predicted_answer\nshot_style: zero_shot\n---\n"
                        "Q={{question}} R={{reference_answer}} P={{predicted_answer}}");
    auto reg = PromptRegistry::load(dir.path());
    CHECK(reg.render(TemplateId::gpt_score,
                     {{"question", "q"}, {"reference_answer", "r"}, {"predicted_answer", "p"}}) == "Q=q R=r P=p");
    CHECK(reg.get(TemplateId::solution).body == PromptRegistry::builtin().get(TemplateId::solution).body);
}
