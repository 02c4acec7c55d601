#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "alphaseq/tasks.hpp"

using namespace alphaseq;

TEST_CASE("registry: 21 tasks in 5 categories") {
    const auto& tasks = list_tasks();
    CHECK(tasks.size() == 21);
    std::set<std::string> categories;
    std::set<std::string> names;
    for (const TaskSpec& t : tasks) {
        categories.insert(t.category);
        names.insert(t.name);
    }
    CHECK(categories.size() == 5);
    CHECK(names.size() == 21);  // unique names
}

TEST_CASE("registry: category row counts 1 + 4 + 6 + 5 + 5") {
    std::map<std::string, int> counts;
    for (const TaskSpec& t : list_tasks()) counts[t.category] += 1;
    CHECK(counts["Text-to-Image"] == 1);
    CHECK(counts["Layer-Conditioned Completion"] == 4);
    CHECK(counts["Image Matting"] == 6);
    CHECK(counts["Object Removal"] == 5);
    CHECK(counts["Layer Decomposition"] == 5);
}

TEST_CASE("registry: the five conditioning variants exist per conditioned category") {
    for (const std::string& cat : {std::string("Image Matting"), std::string("Object Removal"),
                                   std::string("Layer Decomposition")}) {
        std::set<std::string> prefixes;
        for (const TaskSpec& t : list_tasks()) {
            if (t.category != cat) continue;
            for (const char* p : {"Automatic (Mask-Free)", "Alpha-Conditioned", "Trimap-Conditioned",
                                  "Precise Mask-Conditioned", "Rough Mask-Conditioned"}) {
                if (t.name.rfind(p, 0) == 0) prefixes.insert(p);
            }
        }
        CHECK(prefixes.size() == 5);
    }
}

TEST_CASE("registry: text-to-image row signature") {
    const TaskSpec& t = find_task("Text-to-Image Generation");
    REQUIRE(t.inputs.size() == 1);
    CHECK(t.inputs[0].symbol == "T_fg");
    CHECK(t.inputs[0].kind == SlotKind::Text);
    REQUIRE(t.outputs.size() == 1);
    CHECK(t.outputs[0].symbol == "I_fg");
    CHECK(t.outputs[0].kind == SlotKind::RgbaImage);
}

TEST_CASE("registry: symbol universe is exactly the ten slot symbols") {
    const std::set<std::string> universe{"I_fg",      "I_bg",      "I_comp",   "alpha_fg",
                                         "M_trimap",  "M_precise", "M_rough",  "T_fg",
                                         "T_bg",      "T_comp"};
    std::set<std::string> used;
    for (const TaskSpec& t : list_tasks()) {
        for (const Slot& s : t.inputs) used.insert(s.symbol);
        for (const Slot& s : t.outputs) used.insert(s.symbol);
    }
    CHECK(used == universe);
}

TEST_CASE("registry: automatic decomposition emits many foregrounds plus one background") {
    const TaskSpec& t = find_task("Automatic (Mask-Free) Layer Decomposition");
    REQUIRE(t.outputs.size() == 2);
    CHECK(t.outputs[0].symbol == "I_fg");
    CHECK(t.outputs[0].arity == Arity::Many);
    CHECK(t.outputs[1].symbol == "I_bg");
    CHECK(t.outputs[1].arity == Arity::One);
}

TEST_CASE("registry: every task has instruction templates") {
    for (const TaskSpec& t : list_tasks()) {
        CHECK(t.instruction_templates.size() >= 2);
        const std::string a = instruction_for(t, 1);
        const std::string b = instruction_for(t, 1);
        CHECK(a == b);  // seeded choice is deterministic
    }
}

TEST_CASE("find_task: unknown name throws") {
    CHECK_THROWS_AS(find_task("Nonexistent Task"), UnknownTask);
}

TEST_CASE("validate: trimap matting instance missing its trimap") {
    const TaskSpec& spec = find_task("Trimap-Conditioned Matting");
    TaskInstance inst;
    inst.task = spec.name;
    inst.bindings["I_comp"] = {"comp.png"};
    const auto violations = validate_instance(spec, inst);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == "missing slot M_trimap");
}

TEST_CASE("validate: conforming text-to-image instance") {
    const TaskSpec& spec = find_task("Text-to-Image Generation");
    TaskInstance inst;
    inst.task = spec.name;
    inst.bindings["T_fg"] = {"a glass vase with a flower"};
    CHECK(validate_instance(spec, inst).empty());
}

TEST_CASE("validate: foreground-to-background arity and extras") {
    const TaskSpec& spec = find_task("Foreground-to-Background Generation");
    TaskInstance inst;
    inst.task = spec.name;
    inst.bindings["I_fg"] = {};  // zero foregrounds violates n >= 1
    inst.bindings["T_bg"] = {"a quiet street"};
    auto violations = validate_instance(spec, inst);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == "missing slot I_fg");

    inst.bindings["I_fg"] = {"fg1.png", "fg2.png"};  // many is allowed
    CHECK(validate_instance(spec, inst).empty());

    inst.bindings["M_rough"] = {"rough.png"};
    violations = validate_instance(spec, inst);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == "unexpected slot M_rough");
}

TEST_CASE("validate: kind mismatch is reported") {
    const TaskSpec& spec = find_task("Alpha-Conditioned Matting");
    TaskInstance inst;
    inst.task = spec.name;
    inst.bindings["I_comp"]   = {"comp.png"};
    inst.bindings["alpha_fg"] = {"not a file path"};
    const auto violations = validate_instance(spec, inst);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("alpha_fg") != std::string::npos);
}

TEST_CASE("validate: single-arity slot rejects multiple bindings") {
    const TaskSpec& spec = find_task("Background-Conditioned Completion");
    TaskInstance inst;
    inst.task = spec.name;
    inst.bindings["I_bg"]   = {"bg1.png", "bg2.png"};
    inst.bindings["T_comp"] = {"a busy cafe"};
    const auto violations = validate_instance(spec, inst);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("exactly one binding") != std::string::npos);
}

#ifdef ALPHASEQ_SOURCE_DIR
TEST_CASE("registry: serialization matches the shipped asset") {
    std::ifstream in(std::string(ALPHASEQ_SOURCE_DIR) + "/assets/task_registry.json",
                     std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(registry_to_json() == buf.str());
}
#endif
