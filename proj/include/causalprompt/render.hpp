#pragma once

// Source-text emission: turns a ProgramIR plus a PromptSpec into the exact
// prompt string sent to a completion model, together with the stop sequences
// and the rule for extracting the generated event text afterwards.
//
// Layout contract (golden files depend on every byte):
//   * instruction comment, blank line, then the program;
//   * one blank line between function definitions;
//   * the open target function is always the last definition and the prompt
//     ends mid-body with no trailing newline (comment marker or opened string
//     literal, never a trailing space);
//   * counterfactual comment formats close the original ending with an
//     "end" marker comment line, and the model is expected to produce the
//     same marker, which doubles as the stop sequence.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "causalprompt/error.hpp"
#include "causalprompt/ir.hpp"
#include "causalprompt/program.hpp"
#include "causalprompt/text.hpp"

namespace causalprompt {

enum class ExtractionKind {
  CommentLineUntilNewline,
  CommentBlockUntilEndMarker,
  StringLiteral,
  TextContinuation,
};

inline const char* extraction_kind_name(ExtractionKind k) {
  switch (k) {
    case ExtractionKind::CommentLineUntilNewline: return "comment_line";
    case ExtractionKind::CommentBlockUntilEndMarker: return "comment_block";
    case ExtractionKind::StringLiteral: return "string_literal";
    case ExtractionKind::TextContinuation: return "text_continuation";
  }
  return "unknown";
}

struct ExtractionRule {
  ExtractionKind kind = ExtractionKind::CommentLineUntilNewline;
  std::string comment_marker = "#";
  std::string end_marker = "end";
  bool strict = false;  // reject stray non-comment lines inside comment blocks

  bool operator==(const ExtractionRule&) const = default;
};

struct RenderedPrompt {
  std::string text;
  std::vector<std::string> stop_sequences;
  ExtractionRule extraction;
  PromptSpec spec;
};

namespace detail {

struct DialectRules {
  std::string marker;       // comment marker
  std::string def_indent;   // indentation of a function definition line
  std::string body_indent;  // indentation of statements inside a function
};

inline DialectRules dialect_rules(const PromptSpec& spec) {
  if (spec.dialect == Dialect::Python)
    return spec.format == Format::Class ? DialectRules{"#", "    ", "        "}
                                        : DialectRules{"#", "", "    "};
  if (spec.dialect == Dialect::Java) return DialectRules{"//", "    ", "        "};
  return DialectRules{"//", "", "    "};
}

// The original ending keeps an explicit terminator comment in counterfactual
// comment formats; the open counterfactual ending is expected to emit the
// same marker, which is also the stop sequence.
inline bool wants_end_marker(const ProgramIR& ir, const PromptSpec& spec,
                             const ProgramFunction& f) {
  return ir.task == Task::Counterfactual &&
         (spec.format == Format::Plain || spec.format == Format::Class) && f.id == "ending";
}

inline const std::string& display(const ProgramIR& ir, const std::string& id) {
  const ProgramFunction* f = ir.find(id);
  if (!f) fail(Errc::ConfigError, "structure references unknown function '" + id + "'");
  return f->display_name;
}

// ---- python ----------------------------------------------------------------

inline std::vector<std::string> emit_python(const ProgramIR& ir, const PromptSpec& spec) {
  const bool cls = spec.format == Format::Class;
  const DialectRules d = dialect_rules(spec);
  const std::string self = cls ? "self." : "";
  std::vector<std::string> lines;

  if (ir.instruction) {
    lines.push_back("# " + *ir.instruction);
    lines.push_back("");
  }
  if (cls) {
    lines.push_back("class Story:");
    lines.push_back("    def __init__(self):");
  } else {
    lines.push_back("def main():");
  }
  for (const auto& st : ir.structure) {
    if (st.kind == Statement::Kind::Call) {
      lines.push_back(d.body_indent + self + display(ir, st.callee) + "()");
    } else {
      bool first = true;
      for (const auto& arm : st.arms) {
        lines.push_back(d.body_indent + (first ? "if " : "elif ") + self +
                        display(ir, arm.condition) + "():");
        lines.push_back(d.body_indent + "    " + self + display(ir, arm.body) + "()");
        first = false;
      }
    }
  }
  for (const auto& f : ir.functions) {
    lines.push_back("");
    lines.push_back(d.def_indent + "def " + f.display_name + (cls ? "(self):" : "():"));
    if (f.open) {
      switch (spec.format) {
        case Format::Plain:
        case Format::Class: lines.push_back(d.body_indent + "#"); break;
        case Format::Print: lines.push_back(d.body_indent + "print(\""); break;
        case Format::Return: lines.push_back(d.body_indent + "return \""); break;
      }
      break;  // open function is last by construction
    }
    switch (spec.format) {
      case Format::Plain:
      case Format::Class:
        lines.push_back(d.body_indent + "# " + f.text);
        if (wants_end_marker(ir, spec, f)) lines.push_back(d.body_indent + "# end");
        break;
      case Format::Print:
        lines.push_back(d.body_indent + "print(\"" + escape_double_quoted(f.text) + "\")");
        break;
      case Format::Return:
        lines.push_back(d.body_indent + "return \"" + escape_double_quoted(f.text) + "\"");
        break;
    }
  }
  return lines;
}

// ---- java / c --------------------------------------------------------------

// Branch guards get condition-like types; in Return format every function
// yields the string type of the dialect instead.
inline std::string braced_signature(const ProgramIR& ir, const PromptSpec& spec,
                                    const ProgramFunction& f) {
  const bool condition = is_condition_slot_id(ir, f.id);
  if (spec.dialect == Dialect::Java) {
    std::string type = spec.format == Format::Return ? "String" : (condition ? "boolean" : "void");
    return "    static " + type + " " + f.display_name + "() {";
  }
  std::string type =
      spec.format == Format::Return ? "const char *" : (condition ? "int " : "void ");
  return type + f.display_name + "() {";
}

inline std::vector<std::string> emit_braced(const ProgramIR& ir, const PromptSpec& spec) {
  const bool java = spec.dialect == Dialect::Java;
  const DialectRules d = dialect_rules(spec);
  const std::string stmt_indent = java ? "        " : "    ";
  std::vector<std::string> lines;

  if (ir.instruction) {
    lines.push_back("// " + *ir.instruction);
    lines.push_back("");
  }
  if (java) {
    lines.push_back("public class Main {");
    lines.push_back("    public static void main(String[] args) {");
  } else {
    lines.push_back("int main() {");
  }
  for (const auto& st : ir.structure) {
    if (st.kind == Statement::Kind::Call) {
      lines.push_back(stmt_indent + display(ir, st.callee) + "();");
    } else {
      bool first = true;
      for (const auto& arm : st.arms) {
        lines.push_back(stmt_indent + (first ? std::string("if (") : std::string("} else if (")) +
                        display(ir, arm.condition) + "()) {");
        lines.push_back(stmt_indent + "    " + display(ir, arm.body) + "();");
        first = false;
      }
      lines.push_back(stmt_indent + "}");
    }
  }
  if (java) lines.push_back("    }");
  else lines.push_back("}");

  for (const auto& f : ir.functions) {
    lines.push_back("");
    lines.push_back(braced_signature(ir, spec, f));
    const std::string print_open = java ? "System.out.println(\"" : "printf(\"";
    if (f.open) {
      switch (spec.format) {
        case Format::Plain:
        case Format::Class: lines.push_back(d.body_indent + "//"); break;
        case Format::Print: lines.push_back(d.body_indent + print_open); break;
        case Format::Return: lines.push_back(d.body_indent + "return \""); break;
      }
      break;
    }
    switch (spec.format) {
      case Format::Plain:
      case Format::Class:
        lines.push_back(d.body_indent + "// " + f.text);
        if (wants_end_marker(ir, spec, f)) lines.push_back(d.body_indent + "// end");
        break;
      case Format::Print:
        lines.push_back(d.body_indent + print_open + escape_double_quoted(f.text) + "\");");
        break;
      case Format::Return:
        lines.push_back(d.body_indent + "return \"" + escape_double_quoted(f.text) + "\";");
        break;
    }
    lines.push_back(d.def_indent + "}");
  }
  return lines;
}

inline std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

inline std::vector<std::string> stop_sequences_for(const PromptSpec& spec) {
  if (spec.style == Style::Text) return {"\n\n"};
  const std::string marker = dialect_rules(spec).marker;
  switch (spec.format) {
    case Format::Plain:
    case Format::Class:
      return spec.task == Task::Abductive ? std::vector<std::string>{"\n"}
                                          : std::vector<std::string>{marker + " end"};
    case Format::Print:
      return spec.dialect == Dialect::Python ? std::vector<std::string>{"\")"}
                                             : std::vector<std::string>{"\");"};
    case Format::Return:
      return spec.dialect == Dialect::Python ? std::vector<std::string>{"\""}
                                             : std::vector<std::string>{"\";"};
  }
  return {"\n"};
}

inline ExtractionRule extraction_rule_for(const PromptSpec& spec) {
  ExtractionRule rule;
  rule.comment_marker = spec.style == Style::Text ? "#" : dialect_rules(spec).marker;
  if (spec.style == Style::Text) {
    rule.kind = ExtractionKind::TextContinuation;
    return rule;
  }
  switch (spec.format) {
    case Format::Plain:
    case Format::Class:
      rule.kind = spec.task == Task::Abductive ? ExtractionKind::CommentLineUntilNewline
                                               : ExtractionKind::CommentBlockUntilEndMarker;
      break;
    case Format::Print:
    case Format::Return:
      rule.kind = ExtractionKind::StringLiteral;
      break;
  }
  return rule;
}

}  // namespace detail

// Renders code-style prompts. The interventions in `spec` are assumed to have
// been applied to the IR already (see render_prompt for the one-call path).
inline RenderedPrompt emit(const ProgramIR& ir, const PromptSpec& spec) {
  validate_spec(spec);
  if (spec.style != Style::Code)
    fail(Errc::UnsupportedCombination, "emit handles code style; use render_text_prompt");
  if (spec.task != ir.task) fail(Errc::ConfigError, "spec task does not match program task");
  std::vector<std::string> lines = spec.dialect == Dialect::Python
                                       ? detail::emit_python(ir, spec)
                                       : detail::emit_braced(ir, spec);
  RenderedPrompt rp;
  rp.text = detail::join_lines(lines);
  rp.stop_sequences = detail::stop_sequences_for(spec);
  rp.extraction = detail::extraction_rule_for(spec);
  rp.spec = spec;
  return rp;
}

// Natural-language baseline: labeled lines, ending with the open label.
inline RenderedPrompt render_text_prompt(const AbductiveInstance& inst,
                                         std::optional<std::string> instruction = std::nullopt) {
  validate_instance(inst);
  RenderedPrompt rp;
  rp.spec.task = Task::Abductive;
  rp.spec.style = Style::Text;
  rp.text = (instruction ? *instruction : default_instruction(Task::Abductive)) + "\n\n" +
            "Premise: " + inst.premise.text + "\n" + "Ending: " + inst.ending.text + "\n" +
            "Hypothesis:";
  rp.stop_sequences = {"\n\n"};
  rp.extraction.kind = ExtractionKind::TextContinuation;
  return rp;
}

inline RenderedPrompt render_text_prompt(const CounterfactualInstance& inst,
                                         std::optional<std::string> instruction = std::nullopt) {
  validate_instance(inst);
  RenderedPrompt rp;
  rp.spec.task = Task::Counterfactual;
  rp.spec.style = Style::Text;
  rp.text = (instruction ? *instruction : default_instruction(Task::Counterfactual)) + "\n\n" +
            "Premise: " + inst.premise.text + "\n" + "Initial context: " +
            inst.initial_context.text + "\n" + "Original ending: " + inst.original_ending.text +
            "\n" + "Counterfactual context: " + inst.counterfactual_context.text + "\n" +
            "Counterfactual ending:";
  rp.stop_sequences = {"\n\n"};
  rp.extraction.kind = ExtractionKind::TextContinuation;
  return rp;
}

// One-call path from instance to prompt.
inline RenderedPrompt render_prompt(const AbductiveInstance& inst, const PromptSpec& spec,
                                    std::optional<std::string> instruction = std::nullopt) {
  validate_spec(spec);
  if (spec.task != Task::Abductive)
    fail(Errc::ConfigError, "spec task does not match abductive instance");
  if (spec.style == Style::Text) return render_text_prompt(inst, std::move(instruction));
  ProgramIR ir = build_program(inst, std::move(instruction));
  return emit(apply_interventions(ir, spec), spec);
}

inline RenderedPrompt render_prompt(const CounterfactualInstance& inst, const PromptSpec& spec,
                                    std::optional<std::string> instruction = std::nullopt) {
  validate_spec(spec);
  if (spec.task != Task::Counterfactual)
    fail(Errc::ConfigError, "spec task does not match counterfactual instance");
  if (spec.style == Style::Text) return render_text_prompt(inst, std::move(instruction));
  ProgramIR ir = build_program(inst, std::move(instruction));
  return emit(apply_interventions(ir, spec), spec);
}

// Appends target_text to an open prompt exactly the way a cooperative model
// would complete it, closing literals, end markers and braces as the format
// demands. Inverse of extraction; also used to build closed few-shot demos.
inline std::string complete_rendering(const RenderedPrompt& rp, std::string_view target_text) {
  const std::string gold = normalize_whitespace(target_text);
  if (gold.empty()) fail(Errc::EmptyText, "completion target text is empty");
  const PromptSpec& spec = rp.spec;
  std::string out = rp.text;
  if (spec.style == Style::Text) return out + " " + gold;

  const detail::DialectRules d = detail::dialect_rules(spec);
  std::string closers;
  if (spec.dialect == Dialect::Java) closers = "\n    }\n}";
  else if (spec.dialect == Dialect::C) closers = "\n}";

  switch (spec.format) {
    case Format::Plain:
    case Format::Class:
      out += " " + gold;
      if (spec.task == Task::Counterfactual) out += "\n" + d.body_indent + d.marker + " end";
      break;
    case Format::Print:
      out += escape_double_quoted(gold);
      out += spec.dialect == Dialect::Python ? "\")" : "\");";
      break;
    case Format::Return:
      out += escape_double_quoted(gold);
      out += spec.dialect == Dialect::Python ? "\"" : "\";";
      break;
  }
  return out + closers;
}

// One few-shot demonstration: a task instance plus its gold target text.
struct ShotExample {
  std::variant<AbductiveInstance, CounterfactualInstance> instance;
  std::string target_text;
};

// Builds a k-shot prompt: each demo is rendered under the same spec as the
// target, completed with its gold text, and the segments (every one a
// self-contained program or labeled block) are joined ahead of the open
// target prompt.
inline RenderedPrompt assemble_shots(const std::vector<ShotExample>& demos,
                                     const RenderedPrompt& target, const PromptSpec& spec) {
  validate_spec(spec);
  if (static_cast<std::size_t>(spec.shots) != demos.size())
    fail(Errc::ShotMismatch, "spec.shots=" + std::to_string(spec.shots) + " but " +
                                 std::to_string(demos.size()) + " demos given");
  const std::string separator = spec.style == Style::Text ? "\n\n" : "\n\n\n";
  std::string text;
  for (const auto& demo : demos) {
    const bool demo_abductive = std::holds_alternative<AbductiveInstance>(demo.instance);
    if (demo_abductive != (spec.task == Task::Abductive))
      fail(Errc::ShotMismatch, "demo task does not match target task");
    RenderedPrompt rendered =
        demo_abductive ? render_prompt(std::get<AbductiveInstance>(demo.instance), spec)
                       : render_prompt(std::get<CounterfactualInstance>(demo.instance), spec);
    text += complete_rendering(rendered, demo.target_text);
    text += separator;
  }
  RenderedPrompt out = target;
  out.text = text + target.text;
  out.spec = spec;
  return out;
}

}  // namespace causalprompt
