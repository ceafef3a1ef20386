#include "mvrobust/model.hpp"

#include <cctype>
#include <set>

namespace mvrobust {

const char* to_string(IsolationLevel l) {
  switch (l) {
    case IsolationLevel::RC:
      return "RC";
    case IsolationLevel::SI:
      return "SI";
    case IsolationLevel::SSI:
      return "SSI";
  }
  return "?";
}

std::optional<IsolationLevel> parse_isolation_level(std::string_view s) {
  std::string u;
  for (char c : s) u.push_back(static_cast<char>(std::toupper(c)));
  if (u == "RC") return IsolationLevel::RC;
  if (u == "SI") return IsolationLevel::SI;
  if (u == "SSI") return IsolationLevel::SSI;
  return std::nullopt;
}

const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::Read:
      return "R";
    case OpKind::Write:
      return "W";
    case OpKind::Update:
      return "U";
  }
  return "?";
}

int Relation::attr_index(std::string_view a) const {
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i] == a) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> Relation::attr_names(AttrSet s) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (s & (AttrSet(1) << i)) out.push_back(attributes[i]);
  return out;
}

int Schema::relation_index(std::string_view name) const {
  for (std::size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == name) return static_cast<int>(i);
  return -1;
}

int Template::variable_index(std::string_view n) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == n) return static_cast<int>(i);
  return -1;
}

std::string Template::short_name() const {
  std::string caps;
  for (char c : name)
    if (std::isupper(static_cast<unsigned char>(c))) caps.push_back(c);
  if (caps.size() >= 2) return caps;
  return name.substr(0, 3);
}

Model Model::validate(Schema schema, std::vector<Template> templates) {
  std::set<std::string> rel_names;
  for (const auto& rel : schema.relations) {
    if (!rel_names.insert(rel.name).second)
      throw ModelError("DuplicateName", "duplicate relation name: " + rel.name);
    if (rel.attributes.size() > 64)
      throw ModelError("TooManyAttributes",
                       "relation " + rel.name + " has more than 64 attributes");
    std::set<std::string> attr_names;
    for (const auto& a : rel.attributes)
      if (!attr_names.insert(a).second)
        throw ModelError("DuplicateName",
                         "duplicate attribute " + a + " in relation " + rel.name);
    AttrSet all = rel.attributes.empty()
                      ? 0
                      : (rel.attributes.size() == 64
                             ? ~AttrSet(0)
                             : (AttrSet(1) << rel.attributes.size()) - 1);
    if (rel.read_only & ~all)
      throw ModelError("AttributeNotInRelation",
                       "read-only set of " + rel.name +
                           " references attributes outside the relation");
  }

  std::set<std::string> tmpl_names;
  for (const auto& t : templates) {
    if (!tmpl_names.insert(t.name).second)
      throw ModelError("DuplicateName", "duplicate template name: " + t.name);
    std::set<std::string> var_names;
    for (const auto& v : t.variables) {
      if (!var_names.insert(v.name).second)
        throw ModelError("VariableTypeMismatch",
                         "variable " + v.name + " declared twice in template " +
                             t.name);
      if (v.relation < 0 ||
          v.relation >= static_cast<int>(schema.relations.size()))
        throw ModelError("UnknownRelation", "variable " + v.name +
                                                " of template " + t.name +
                                                " has no declared relation");
    }
    for (std::size_t i = 0; i < t.operations.size(); ++i) {
      const auto& op = t.operations[i];
      const std::string where =
          t.name + "[" + std::to_string(i + 1) + "]";
      if (op.variable < 0 || op.variable >= static_cast<int>(t.variables.size()))
        throw ModelError("InvalidOperation",
                         where + ": operation references no variable");
      const Variable& var = t.variables[op.variable];
      if (op.relation != var.relation)
        throw ModelError("VariableTypeMismatch",
                         where + ": variable " + var.name +
                             " used with a different relation type");
      const Relation& rel = schema.relations[op.relation];
      AttrSet all = rel.attributes.empty()
                        ? 0
                        : (rel.attributes.size() == 64
                               ? ~AttrSet(0)
                               : (AttrSet(1) << rel.attributes.size()) - 1);
      if ((op.read_set | op.write_set) & ~all)
        throw ModelError("AttributeNotInRelation",
                         where + ": attribute set not contained in relation " +
                             rel.name);
      if (op.kind == OpKind::Read && op.write_set != 0)
        throw ModelError("InvalidOperation",
                         where + ": R operation with nonempty write set");
      if (op.kind == OpKind::Write && op.read_set != 0)
        throw ModelError("InvalidOperation",
                         where + ": W operation with nonempty read set");
      if (op.write_set & rel.read_only) {
        auto names = rel.attr_names(op.write_set & rel.read_only);
        throw ModelError("WriteToReadOnlyAttribute",
                         where + ": writes read-only attribute " + names.front() +
                             " of relation " + rel.name);
      }
    }
  }

  Model m;
  m.schema_ = std::move(schema);
  m.templates_ = std::move(templates);
  m.op_base_.reserve(m.templates_.size());
  for (const auto& t : m.templates_) {
    m.op_base_.push_back(m.total_ops_);
    m.total_ops_ += static_cast<int>(t.operations.size());
  }
  return m;
}

int Model::template_index(std::string_view name) const {
  for (std::size_t i = 0; i < templates_.size(); ++i)
    if (templates_[i].name == name) return static_cast<int>(i);
  return -1;
}

std::pair<int, int> Model::op_ref(int id) const {
  int t = static_cast<int>(op_base_.size()) - 1;
  while (t > 0 && op_base_[t] > id) --t;
  return {t, id - op_base_[t]};
}

const TemplateOperation& Model::op(int id) const {
  auto [t, o] = op_ref(id);
  return templates_[t].operations[o];
}

bool allocation_leq(const Allocation& a, const Allocation& b) {
  if (a.size() != b.size())
    throw DomainMismatch("allocations range over different template sets");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[static_cast<int>(i)] > b[static_cast<int>(i)]) return false;
  return true;
}

bool allocation_lt(const Allocation& a, const Allocation& b) {
  return allocation_leq(a, b) && !(a == b);
}

}  // namespace mvrobust
