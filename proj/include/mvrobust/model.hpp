#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mvrobust {

// Isolation levels, totally ordered RC < SI < SSI.
enum class IsolationLevel : std::uint8_t { RC = 0, SI = 1, SSI = 2 };

const char* to_string(IsolationLevel l);
std::optional<IsolationLevel> parse_isolation_level(std::string_view s);

// Attribute sets are bitmasks over a relation's attribute list (max 64).
using AttrSet = std::uint64_t;

struct ModelError : std::runtime_error {
  std::string code;
  ModelError(std::string c, const std::string& msg)
      : std::runtime_error(msg), code(std::move(c)) {}
};

struct Relation {
  std::string name;
  std::vector<std::string> attributes;
  AttrSet read_only = 0;  // keys and other never-written columns
  bool workload_read_only = false;

  int attr_index(std::string_view a) const;
  std::vector<std::string> attr_names(AttrSet s) const;

  bool operator==(const Relation&) const = default;
};

struct Schema {
  std::vector<Relation> relations;
  int relation_index(std::string_view name) const;
  bool operator==(const Schema&) const = default;
};

enum class OpKind : std::uint8_t { Read, Write, Update };
const char* to_string(OpKind k);

struct Variable {
  std::string name;
  int relation = -1;
  bool operator==(const Variable&) const = default;
};

struct TemplateOperation {
  OpKind kind = OpKind::Read;
  int variable = -1;  // index into the owning template's variable table
  int relation = -1;
  AttrSet read_set = 0;
  AttrSet write_set = 0;

  bool is_read() const { return kind != OpKind::Write; }
  bool is_write() const { return kind != OpKind::Read; }

  bool operator==(const TemplateOperation&) const = default;
};

struct Template {
  std::string name;
  std::vector<Variable> variables;  // ordered by first appearance
  std::vector<TemplateOperation> operations;

  int variable_index(std::string_view name) const;
  // Short label used in promotion-choice names: uppercase letters when the
  // name has at least two of them, else the first three characters.
  std::string short_name() const;

  bool operator==(const Template&) const = default;
};

// Validated, immutable schema + template set. Everything downstream reads it
// through const references; safe to share across analysis workers.
class Model {
 public:
  Model() = default;

  // Checks all structural invariants and freezes declaration order.
  // Throws ModelError with codes UnknownRelation, AttributeNotInRelation,
  // WriteToReadOnlyAttribute, DuplicateName, VariableTypeMismatch,
  // InvalidOperation, TooManyAttributes.
  static Model validate(Schema schema, std::vector<Template> templates);

  const Schema& schema() const { return schema_; }
  const std::vector<Template>& templates() const { return templates_; }
  int template_index(std::string_view name) const;

  // Dense operation ids over all templates (template-major).
  int op_count() const { return total_ops_; }
  int op_id(int t, int op) const { return op_base_[t] + op; }
  std::pair<int, int> op_ref(int id) const;
  const TemplateOperation& op(int id) const;

  bool operator==(const Model& o) const {
    return schema_ == o.schema_ && templates_ == o.templates_;
  }

 private:
  Schema schema_;
  std::vector<Template> templates_;
  std::vector<int> op_base_;
  int total_ops_ = 0;
};

struct DomainMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Total map template index -> isolation level.
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::vector<IsolationLevel> levels)
      : levels_(std::move(levels)) {}
  static Allocation uniform(const Model& m, IsolationLevel l) {
    return Allocation(std::vector<IsolationLevel>(m.templates().size(), l));
  }

  IsolationLevel operator[](int t) const { return levels_.at(t); }
  void set(int t, IsolationLevel l) { levels_.at(t) = l; }
  std::size_t size() const { return levels_.size(); }
  const std::vector<IsolationLevel>& levels() const { return levels_; }

  bool operator==(const Allocation&) const = default;

 private:
  std::vector<IsolationLevel> levels_;
};

// Pointwise order on allocations over the same template set.
bool allocation_leq(const Allocation& a, const Allocation& b);
bool allocation_lt(const Allocation& a, const Allocation& b);

}  // namespace mvrobust
