#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "causalprompt/program.hpp"

using namespace causalprompt;

namespace {

AbductiveInstance make_abductive() {
  AbductiveInstance inst;
  inst.id = "ab-1";
  inst.premise = normalize_event("It was a gorgeous day out.", Role::Premise);
  inst.ending = normalize_event("She asked him to be her boyfriend.", Role::Ending);
  return inst;
}

CounterfactualInstance make_counterfactual() {
  CounterfactualInstance inst;
  inst.id = "cf-1";
  inst.premise = normalize_event("My grandpa loved to fish.", Role::Premise);
  inst.initial_context = normalize_event("He would always take me.", Role::Hypothesis);
  inst.original_ending = normalize_event("He set up my pole.", Role::Ending);
  inst.counterfactual_context =
      normalize_event("He never had time to take me.", Role::CounterfactualHypothesis);
  return inst;
}

std::vector<std::string> display_structure(const ProgramIR& ir) {
  std::vector<std::string> names;
  for (const auto& id : ir.structure_ids()) names.push_back(ir.find(id)->display_name);
  return names;
}

}  // namespace

TEST_CASE("abductive program puts the open hypothesis last") {
  ProgramIR ir = build_program(make_abductive());
  REQUIRE(ir.structure.size() == 2);
  CHECK(ir.structure[0].kind == Statement::Kind::Call);
  CHECK(ir.structure[0].callee == "premise");
  REQUIRE(ir.structure[1].arms.size() == 1);
  CHECK(ir.structure[1].arms[0].condition == "hypothesis");
  CHECK(ir.structure[1].arms[0].body == "ending");
  REQUIRE(ir.functions.size() == 3);
  CHECK(ir.functions.back().id == "hypothesis");
  CHECK(ir.functions.back().open);
  CHECK(ir.functions.back().text.empty());
  CHECK(ir.instruction.has_value());
}

TEST_CASE("counterfactual program branches if/elif with the rewrite open") {
  ProgramIR ir = build_program(make_counterfactual());
  REQUIRE(ir.structure.size() == 2);
  REQUIRE(ir.structure[1].arms.size() == 2);
  CHECK(ir.structure[1].arms[0].condition == "hypothesis");
  CHECK(ir.structure[1].arms[0].body == "ending");
  CHECK(ir.structure[1].arms[1].condition == "counterfactual_hypothesis");
  CHECK(ir.structure[1].arms[1].body == "counterfactual_ending");
  REQUIRE(ir.functions.size() == 5);
  CHECK(ir.functions.back().id == "counterfactual_ending");
  CHECK(ir.functions.back().open);
}

TEST_CASE("validate_spec rejects conflicting and unsupported combinations") {
  PromptSpec spec;
  spec.interventions.sequential_structure = true;
  spec.interventions.disruption = true;
  try {
    validate_spec(spec);
    FAIL("expected InterventionConflict");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InterventionConflict);
  }

  PromptSpec class_java;
  class_java.format = Format::Class;
  class_java.dialect = Dialect::Java;
  try {
    validate_spec(class_java);
    FAIL("expected UnsupportedCombination");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnsupportedCombination);
  }

  PromptSpec text_with_iv;
  text_with_iv.style = Style::Text;
  text_with_iv.interventions.no_instruction = true;
  CHECK_THROWS_AS(validate_spec(text_with_iv), Error);
}

TEST_CASE("no_instruction drops only the instruction") {
  PromptSpec spec;
  spec.interventions.no_instruction = true;
  ProgramIR out = apply_interventions(build_program(make_abductive()), spec);
  CHECK_FALSE(out.instruction.has_value());
  CHECK(out.structure_ids() == std::vector<std::string>{"premise", "hypothesis", "ending"});
}

TEST_CASE("function renaming follows first appearance in the structure") {
  PromptSpec spec;
  spec.interventions.function_name_perturbation = true;

  ProgramIR ab = apply_interventions(build_program(make_abductive()), spec);
  CHECK(ab.find("premise")->display_name == "functionA");
  CHECK(ab.find("hypothesis")->display_name == "functionB");
  CHECK(ab.find("ending")->display_name == "functionC");
  // event texts untouched
  CHECK(ab.find("premise")->text == "It was a gorgeous day out.");

  ProgramIR cf = apply_interventions(build_program(make_counterfactual()), spec);
  CHECK(cf.find("premise")->display_name == "functionA");
  CHECK(cf.find("hypothesis")->display_name == "functionB");
  CHECK(cf.find("ending")->display_name == "functionC");
  CHECK(cf.find("counterfactual_hypothesis")->display_name == "functionD");
  CHECK(cf.find("counterfactual_ending")->display_name == "functionE");
}

TEST_CASE("sequential structure flattens to chronological calls") {
  PromptSpec spec;
  spec.interventions.sequential_structure = true;

  ProgramIR ab = apply_interventions(build_program(make_abductive()), spec);
  for (const auto& st : ab.structure) CHECK(st.kind == Statement::Kind::Call);
  CHECK(ab.structure_ids() == std::vector<std::string>{"premise", "hypothesis", "ending"});

  ProgramIR cf = apply_interventions(build_program(make_counterfactual()), spec);
  CHECK(cf.structure_ids() ==
        std::vector<std::string>{"premise", "hypothesis", "ending", "counterfactual_hypothesis",
                                 "counterfactual_ending"});
}

TEST_CASE("disruption permutes branch slots and keeps the premise call fixed") {
  PromptSpec spec;
  spec.interventions.disruption = true;
  spec.seed = 11;

  ProgramIR base = build_program(make_abductive());
  ProgramIR out = apply_interventions(base, spec);
  // First statement is still the plain premise call.
  CHECK(out.structure[0].kind == Statement::Kind::Call);
  CHECK(out.structure[0].callee == "premise");
  // The two branch slots swapped (only non-identity option with 2 slots).
  CHECK(out.structure[1].arms[0].condition == "ending");
  CHECK(out.structure[1].arms[0].body == "hypothesis");
  // Disruption implies renaming.
  CHECK(out.find("ending")->display_name == "functionC");
  CHECK(display_structure(out) ==
        std::vector<std::string>{"functionA", "functionC", "functionB"});
}

TEST_CASE("disruption is deterministic per seed and never the identity") {
  ProgramIR base = build_program(make_counterfactual());
  std::vector<std::string> original = base.structure_ids();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    PromptSpec spec;
    spec.interventions.disruption = true;
    spec.seed = seed;
    ProgramIR a = apply_interventions(base, spec);
    ProgramIR b = apply_interventions(base, spec);
    CHECK(a.structure_ids() == b.structure_ids());
    CHECK(a.structure_ids() != original);
    // Same multiset of ids, just rearranged.
    auto sorted_a = a.structure_ids();
    auto sorted_o = original;
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_o.begin(), sorted_o.end());
    CHECK(sorted_a == sorted_o);
  }
}

TEST_CASE("intervention slugs canonicalize and parse back") {
  InterventionSet none;
  CHECK(none.slug() == "none");
  InterventionSet dis;
  dis.disruption = true;
  CHECK(dis.slug() == "funcnames+disruption");
  InterventionSet all_info;
  all_info.no_instruction = true;
  all_info.sequential_structure = true;
  CHECK(all_info.slug() == "noinstruction+sequential");

  CHECK(interventions_from_slug("funcnames+disruption")->disruption);
  CHECK(interventions_from_slug("no-instruction")->no_instruction);
  CHECK(interventions_from_slug("none")->empty());
  CHECK_FALSE(interventions_from_slug("bogus").has_value());
}

TEST_CASE("prompt specs serialize to json and back") {
  PromptSpec spec;
  spec.task = Task::Counterfactual;
  spec.format = Format::Print;
  spec.dialect = Dialect::Java;
  spec.interventions.no_instruction = true;
  spec.shots = 2;
  spec.seed = 99;
  PromptSpec back = spec_from_json(spec_to_json(spec));
  CHECK(back == spec);
  CHECK(spec.slug() == "counterfactual__code__print__java__noinstruction");
}
