#include "adgpt/corpora/templates.hpp"

#include <algorithm>
#include <set>

#include <toml.hpp>

#include "adgpt/error.hpp"

namespace adgpt::corpora {
namespace {

struct FieldRules {
  std::set<std::string_view> instruction;
  std::set<std::string_view> output;
  std::set<std::string_view> output_negative;
  std::set<std::string_view> required_instruction;
  std::set<std::string_view> required_output;
};

const FieldRules& rules_for(TaskLabel task) {
  static const FieldRules kTask1{{"gene", "attribute"},
                                 {"gene", "attribute", "value"},
                                 {"gene", "attribute", "value"},
                                 {"gene"},
                                 {"value"}};
  static const FieldRules kTask2{{"gene", "region", "kind"},
                                 {"gene", "region", "kind"},
                                 {"gene", "region", "kind"},
                                 {"gene", "region", "kind"},
                                 {}};
  static const FieldRules kTask3{{"gene"}, {"gene", "reasoning"}, {"gene"}, {"gene"}, {"reasoning"}};
  static const FieldRules kTask4{{"gene", "region"},
                                 {"gene", "region"},
                                 {"gene", "region"},
                                 {"gene", "region"},
                                 {}};
  switch (task) {
    case TaskLabel::kTask1: return kTask1;
    case TaskLabel::kTask2: return kTask2;
    case TaskLabel::kTask3: return kTask3;
    case TaskLabel::kTask4: return kTask4;
  }
  return kTask1;
}

void check_field(const Template& t, std::string_view field, std::string_view pattern,
                 const std::set<std::string_view>& allowed,
                 const std::set<std::string_view>& required) {
  const auto names = placeholders(pattern);
  for (const auto& n : names) {
    if (!allowed.contains(n)) {
      throw Error(ErrorCode::kTemplateError, "template " + t.id + ": placeholder {" + n +
                                                 "} is not fillable in " + std::string(field) +
                                                 " for " + std::string(task_name(t.task)));
    }
  }
  for (auto r : required) {
    if (std::find(names.begin(), names.end(), r) == names.end()) {
      throw Error(ErrorCode::kTemplateError, "template " + t.id + ": " + std::string(field) +
                                                 " must contain {" + std::string(r) + "}");
    }
  }
}

Template make(std::string id, TaskLabel task, std::optional<GeneAttribute> attribute,
              std::string instruction, std::string output, std::string output_negative = {}) {
  return Template{std::move(id), task, attribute, std::move(instruction), std::move(output),
                  std::move(output_negative)};
}

std::vector<Template> default_templates() {
  using enum GeneAttribute;
  constexpr auto T1 = TaskLabel::kTask1;
  constexpr auto T2 = TaskLabel::kTask2;
  constexpr auto T3 = TaskLabel::kTask3;
  constexpr auto T4 = TaskLabel::kTask4;

  const std::string chrom_out = "{gene} is located on chromosome {value}.";
  const std::string start_out = "The start position of {gene} is {value}.";
  const std::string end_out = "The end position of {gene} is {value}.";
  const std::string strand_out = "{gene} is on the {value} strand.";
  const std::string loc_out = "{gene} is located at {value}.";

  const std::string yes = "Yes.";
  const std::string no = "No.";
  const std::string t3_yes = "Yes, there is a potential relation based on the {reasoning}.";
  const std::string t3_no =
      "No, the molecular genetics summary does not support a relation to Alzheimer's disease.";
  const std::string t4_yes =
      "Both relationships are established, so the {region} is related to AD with regard to "
      "gene {gene}.";
  const std::string t4_no =
      "At least one relationship is not established, so the {region} is not shown to be related "
      "to AD with regard to gene {gene}.";

  return {
      make("t1_chromosome_1", T1, kChromosome, "What is the chromosome location of gene {gene}?", chrom_out),
      make("t1_chromosome_2", T1, kChromosome, "On which chromosome is {gene} located?", chrom_out),
      make("t1_chromosome_3", T1, kChromosome, "Which chromosome carries the gene {gene}?", chrom_out),
      make("t1_start_1", T1, kStart, "What is the start position of {gene}?", start_out),
      make("t1_start_2", T1, kStart, "Where does the gene {gene} start?", start_out),
      make("t1_start_3", T1, kStart, "Give the start coordinate of {gene}.", start_out),
      make("t1_end_1", T1, kEnd, "What is the end position of {gene}?", end_out),
      make("t1_end_2", T1, kEnd, "Where does the gene {gene} end?", end_out),
      make("t1_end_3", T1, kEnd, "Give the end coordinate of {gene}.", end_out),
      make("t1_strand_1", T1, kStrand, "What is the strand orientation of {gene}?", strand_out),
      make("t1_strand_2", T1, kStrand, "On which strand is {gene} encoded?", strand_out),
      make("t1_strand_3", T1, kStrand, "Is {gene} on the plus or minus strand?", strand_out),
      make("t1_location_1", T1, kLocationSummary, "What is the genomic location of {gene}?", loc_out),
      make("t1_location_2", T1, kLocationSummary, "Where is {gene} located in the genome?", loc_out),
      make("t1_location_3", T1, kLocationSummary, "Give the full genomic coordinates of {gene}.", loc_out),

      make("t2_1", T2, std::nullopt,
           "Does the gene {gene} contain variants in the {region} that significantly influence {kind}?",
           yes, no),
      make("t2_2", T2, std::nullopt,
           "Are there variants significantly affecting {kind} of {gene} in the {region}?", yes, no),
      make("t2_3", T2, std::nullopt,
           "In the {region}, does {gene} harbor significant variants that influence {kind}?", yes, no),

      make("t3_1", T3, std::nullopt,
           "Determine if {gene} has a potential role in Alzheimer's disease based on the molecular "
           "genetics summary.",
           t3_yes, t3_no),
      make("t3_2", T3, std::nullopt,
           "Based on its molecular genetics summary, is {gene} potentially involved in Alzheimer's "
           "disease?",
           t3_yes, t3_no),
      make("t3_3", T3, std::nullopt,
           "Does the molecular genetics evidence suggest that {gene} plays a role in Alzheimer's "
           "disease?",
           t3_yes, t3_no),

      make("t4_1", T4, std::nullopt, "Is the {region} related to AD with regard to gene {gene}?",
           t4_yes, t4_no),
      make("t4_2", T4, std::nullopt,
           "Considering gene {gene}, is the {region} implicated in Alzheimer's disease?", t4_yes,
           t4_no),
      make("t4_3", T4, std::nullopt,
           "Through gene {gene}, is there a link between the {region} and AD?", t4_yes, t4_no),
  };
}

}  // namespace

TemplateSet::TemplateSet(std::vector<Template> templates) : templates_(std::move(templates)) {
  std::set<std::string_view> ids;
  std::set<std::tuple<TaskLabel, std::optional<GeneAttribute>, std::string_view>> instructions;
  for (const auto& t : templates_) {
    if (t.id.empty()) throw Error(ErrorCode::kTemplateError, "template with empty id");
    if (!ids.insert(t.id).second) {
      throw Error(ErrorCode::kTemplateError, "duplicate template id " + t.id);
    }
    if (t.task == TaskLabel::kTask1 && !t.attribute) {
      throw Error(ErrorCode::kTemplateError, "template " + t.id + ": Task1 needs an attribute");
    }
    if (t.task != TaskLabel::kTask1 && t.attribute) {
      throw Error(ErrorCode::kTemplateError,
                  "template " + t.id + ": attribute is only meaningful for Task1");
    }
    if (t.output.empty()) throw Error(ErrorCode::kTemplateError, "template " + t.id + ": empty output");
    if (t.task != TaskLabel::kTask1 && t.output_negative.empty()) {
      throw Error(ErrorCode::kTemplateError, "template " + t.id + ": missing output_negative");
    }
    if (!instructions.emplace(t.task, t.attribute, t.instruction).second) {
      throw Error(ErrorCode::kTemplateError, "template " + t.id + ": duplicate instruction pattern");
    }
    const auto& r = rules_for(t.task);
    check_field(t, "instruction", t.instruction, r.instruction, r.required_instruction);
    check_field(t, "output", t.output, r.output, r.required_output);
    check_field(t, "output_negative", t.output_negative, r.output_negative, {});
  }
}

const TemplateSet& TemplateSet::defaults() {
  static const TemplateSet set(default_templates());
  return set;
}

TemplateSet TemplateSet::load(const std::filesystem::path& path) {
  toml::table root;
  try {
    root = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::kTemplateError,
                "templates " + path.string() + ": " + std::string(e.description()));
  }
  std::vector<Template> out;
  const auto* arr = root["template"].as_array();
  if (!arr) return TemplateSet{};
  for (const auto& node : *arr) {
    const auto* tbl = node.as_table();
    if (!tbl) throw Error(ErrorCode::kTemplateError, "templates: [[template]] entry is not a table");
    Template t;
    t.id = (*tbl)["id"].value_or(std::string{});
    const auto task_num = (*tbl)["task"].value<int64_t>();
    const auto task = task_num ? task_from_number(static_cast<int>(*task_num)) : std::nullopt;
    if (!task) throw Error(ErrorCode::kTemplateError, "template " + t.id + ": task must be 1..4");
    t.task = *task;
    if (auto attr = (*tbl)["attribute"].value<std::string>()) {
      t.attribute = parse_attribute(*attr);
      if (!t.attribute) {
        throw Error(ErrorCode::kTemplateError, "template " + t.id + ": unknown attribute " + *attr);
      }
    }
    t.instruction = (*tbl)["instruction"].value_or(std::string{});
    t.output = (*tbl)["output"].value_or(std::string{});
    t.output_negative = (*tbl)["output_negative"].value_or(std::string{});
    out.push_back(std::move(t));
  }
  return TemplateSet(std::move(out));
}

std::vector<const Template*> TemplateSet::for_task(TaskLabel task) const {
  std::vector<const Template*> out;
  for (const auto& t : templates_) {
    if (t.task == task) out.push_back(&t);
  }
  return out;
}

std::vector<std::string> placeholders(std::string_view pattern) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = pattern.find('{', pos)) != std::string_view::npos) {
    const auto close = pattern.find('}', pos);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::kTemplateError, "unterminated placeholder in '" + std::string(pattern) + "'");
    }
    out.emplace_back(pattern.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
  return out;
}

std::string fill(std::string_view pattern, const Bindings& bindings) {
  std::string out;
  out.reserve(pattern.size() + 32);
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    const auto open = pattern.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(pattern.substr(pos));
      break;
    }
    out.append(pattern.substr(pos, open - pos));
    const auto close = pattern.find('}', open);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::kTemplateError, "unterminated placeholder in '" + std::string(pattern) + "'");
    }
    const auto name = pattern.substr(open + 1, close - open - 1);
    auto it = bindings.find(name);
    if (it == bindings.end()) {
      throw Error(ErrorCode::kTemplateError, "unbound placeholder {" + std::string(name) + "}");
    }
    out.append(it->second);
    pos = close + 1;
  }
  return out;
}

std::string_view attribute_phrase(GeneAttribute attribute) {
  switch (attribute) {
    case GeneAttribute::kChromosome: return "chromosome";
    case GeneAttribute::kStart: return "start position";
    case GeneAttribute::kEnd: return "end position";
    case GeneAttribute::kStrand: return "strand";
    case GeneAttribute::kLocationSummary: return "genomic location";
  }
  return "";
}

}  // namespace adgpt::corpora
