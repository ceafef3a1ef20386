#include "random_models.hpp"

#include <string>
#include <vector>

namespace mvrobust::testsupport {

namespace {

int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

AttrSet random_nonempty_subset(std::mt19937_64& rng, AttrSet pool) {
  std::vector<int> bits;
  for (int i = 0; i < 64; ++i)
    if (pool & (AttrSet(1) << i)) bits.push_back(i);
  if (bits.empty()) return 0;
  AttrSet out = 0;
  for (int b : bits)
    if (pick(rng, 0, 1)) out |= AttrSet(1) << b;
  if (!out) out |= AttrSet(1) << bits[pick(rng, 0, (int)bits.size() - 1)];
  return out;
}

}  // namespace

Model random_model(std::mt19937_64& rng) {
  Schema schema;
  for (int r = 0; r < 2; ++r) {
    Relation rel;
    rel.name = "R" + std::to_string(r);
    int attrs = pick(rng, 1, 3);
    for (int a = 0; a < attrs; ++a)
      rel.attributes.push_back("a" + std::to_string(a));
    // occasionally mark a prefix of attributes read-only, never all of them
    if (attrs > 1 && pick(rng, 0, 2) == 0) rel.read_only = 1;
    schema.relations.push_back(rel);
  }

  int template_count = pick(rng, 1, 3);
  std::vector<Template> templates;
  for (int t = 0; t < template_count; ++t) {
    Template tmpl;
    tmpl.name = "T" + std::to_string(t);
    int var_count = pick(rng, 1, 3);
    for (int v = 0; v < var_count; ++v)
      tmpl.variables.push_back({"V" + std::to_string(v), pick(rng, 0, 1)});
    int ops = pick(rng, 1, 4);
    for (int o = 0; o < ops; ++o) {
      TemplateOperation op;
      op.variable = pick(rng, 0, var_count - 1);
      op.relation = tmpl.variables[op.variable].relation;
      const Relation& rel = schema.relations[op.relation];
      AttrSet all = (AttrSet(1) << rel.attributes.size()) - 1;
      AttrSet writable = all & ~rel.read_only;
      int kind = pick(rng, 0, 9);
      if (kind < 4 || !writable) {
        op.kind = OpKind::Read;
        op.read_set = random_nonempty_subset(rng, all);
      } else if (kind < 6) {
        op.kind = OpKind::Write;
        op.write_set = random_nonempty_subset(rng, writable);
      } else {
        op.kind = OpKind::Update;
        op.read_set = random_nonempty_subset(rng, all);
        op.write_set = random_nonempty_subset(rng, writable);
      }
      tmpl.operations.push_back(op);
    }
    templates.push_back(std::move(tmpl));
  }
  return Model::validate(std::move(schema), std::move(templates));
}

Allocation random_allocation(std::mt19937_64& rng, const Model& m) {
  std::vector<IsolationLevel> levels;
  for (std::size_t t = 0; t < m.templates().size(); ++t)
    levels.push_back(static_cast<IsolationLevel>(pick(rng, 0, 2)));
  return Allocation(levels);
}

Allocation random_raise(std::mt19937_64& rng, const Allocation& a) {
  Allocation out = a;
  for (int t = 0; t < static_cast<int>(a.size()); ++t) {
    int lo = static_cast<int>(a[t]);
    out.set(t, static_cast<IsolationLevel>(pick(rng, lo, 2)));
  }
  return out;
}

}  // namespace mvrobust::testsupport
