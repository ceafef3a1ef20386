#include "mvrobust/dsl.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace mvrobust {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;
  int line;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c))
      throw ParseError(line, std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && ident_char(s[pos])) ++pos;
    if (pos == start) throw ParseError(line, "expected identifier");
    return std::string(s.substr(start, pos - start));
  }
};

// {a, b, c} -> attribute bitmask
AttrSet parse_attr_set(Cursor& c, const Relation& rel) {
  c.expect('{');
  AttrSet set = 0;
  if (!c.consume('}')) {
    while (true) {
      std::string a = c.ident();
      int idx = rel.attr_index(a);
      if (idx < 0)
        throw ParseError(c.line, "attribute " + a + " not in relation " +
                                     rel.name);
      set |= AttrSet(1) << idx;
      if (c.consume('}')) break;
      c.expect(',');
    }
  }
  return set;
}

}  // namespace

Model parse_model(std::string_view text) {
  Schema schema;
  std::vector<Template> templates;
  Template* open_template = nullptr;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view raw =
        text.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                         : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    std::string_view lv = raw.substr(0, raw.find('#'));
    Cursor c{lv, 0, line_no};
    if (c.done()) continue;

    if (open_template) {
      if (c.peek() == '}') {
        c.expect('}');
        if (!c.done()) throw ParseError(line_no, "trailing input after '}'");
        open_template = nullptr;
        continue;
      }
      std::string kind_tok = c.ident();
      OpKind kind;
      if (kind_tok == "R")
        kind = OpKind::Read;
      else if (kind_tok == "W")
        kind = OpKind::Write;
      else if (kind_tok == "U")
        kind = OpKind::Update;
      else
        throw ParseError(line_no, "expected operation kind R, W or U, got " +
                                      kind_tok);
      std::string var = c.ident();
      c.expect(':');
      std::string rel_name = c.ident();
      int rel = schema.relation_index(rel_name);
      if (rel < 0)
        throw ParseError(line_no, "unknown relation " + rel_name);

      int var_idx = open_template->variable_index(var);
      if (var_idx < 0) {
        var_idx = static_cast<int>(open_template->variables.size());
        open_template->variables.push_back({var, rel});
      } else if (open_template->variables[var_idx].relation != rel) {
        throw ParseError(line_no, "variable " + var +
                                      " already bound to relation " +
                                      schema.relations[open_template
                                                           ->variables[var_idx]
                                                           .relation]
                                          .name);
      }

      TemplateOperation op;
      op.kind = kind;
      op.variable = var_idx;
      op.relation = rel;
      AttrSet first = parse_attr_set(c, schema.relations[rel]);
      if (kind == OpKind::Read) {
        op.read_set = first;
      } else if (kind == OpKind::Write) {
        op.write_set = first;
      } else {
        op.read_set = first;
        op.write_set = parse_attr_set(c, schema.relations[rel]);
      }
      if (!c.done()) throw ParseError(line_no, "trailing input after operation");
      open_template->operations.push_back(op);
      continue;
    }

    std::string head = c.ident();
    if (head == "relation") {
      Relation rel;
      rel.name = c.ident();
      c.expect('(');
      if (!c.consume(')')) {
        while (true) {
          std::string attr = c.ident();
          rel.attributes.push_back(attr);
          c.skip_ws();
          // optional per-attribute 'readonly'
          std::size_t save = c.pos;
          if (c.pos < c.s.size() && ident_char(c.s[c.pos])) {
            std::string mod = c.ident();
            if (mod == "readonly")
              rel.read_only |= AttrSet(1) << (rel.attributes.size() - 1);
            else
              c.pos = save, throw ParseError(line_no, "unexpected token " + mod);
          }
          if (c.consume(')')) break;
          c.expect(',');
        }
      }
      if (!c.done()) {
        std::string mod = c.ident();
        if (mod != "workload_readonly")
          throw ParseError(line_no, "unexpected token " + mod);
        rel.workload_read_only = true;
        if (!c.done()) throw ParseError(line_no, "trailing input");
      }
      schema.relations.push_back(std::move(rel));
    } else if (head == "template") {
      Template t;
      t.name = c.ident();
      c.expect('{');
      if (!c.done()) throw ParseError(line_no, "trailing input after '{'");
      templates.push_back(std::move(t));
      open_template = &templates.back();
    } else {
      throw ParseError(line_no, "expected 'relation' or 'template', got " + head);
    }
  }
  if (open_template)
    throw ParseError(line_no, "unterminated template " + open_template->name);

  return Model::validate(std::move(schema), std::move(templates));
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

Allocation parse_allocation(const Model& m, std::string_view spec) {
  auto alloc = Allocation::uniform(m, IsolationLevel::SSI);
  std::vector<bool> seen(m.templates().size(), false);
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t comma = spec.find(',', pos);
    std::string_view item = spec.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos
                                             : comma - pos);
    pos = comma == std::string_view::npos ? spec.size() : comma + 1;

    std::size_t b = item.find_first_not_of(" \t");
    std::size_t e = item.find_last_not_of(" \t");
    if (b == std::string_view::npos) continue;
    item = item.substr(b, e - b + 1);

    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(0, "allocation entry missing '=': " +
                              std::string(item));
    std::string name(item.substr(0, eq));
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t'))
      name.pop_back();
    std::string_view level_sv = item.substr(eq + 1);
    std::size_t lb = level_sv.find_first_not_of(" \t");
    if (lb != std::string_view::npos) level_sv = level_sv.substr(lb);

    int t = m.template_index(name);
    if (t < 0) throw ParseError(0, "unknown template in allocation: " + name);
    if (seen[t])
      throw ParseError(0, "template allocated twice: " + name);
    auto level = parse_isolation_level(level_sv);
    if (!level)
      throw ParseError(0, "unknown isolation level: " + std::string(level_sv));
    alloc.set(t, *level);
    seen[t] = true;
  }
  return alloc;
}

}  // namespace mvrobust
