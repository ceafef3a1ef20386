#include "mvrobust/promotion.hpp"

#include <algorithm>

#include "mvrobust/optimizer.hpp"

namespace mvrobust {

std::vector<PromotableRead> promotable_reads(const Model& m) {
  std::vector<PromotableRead> out;
  const auto& templates = m.templates();
  for (int t = 0; t < static_cast<int>(templates.size()); ++t)
    for (int op = 0; op < static_cast<int>(templates[t].operations.size());
         ++op) {
      const TemplateOperation& o = templates[t].operations[op];
      if (o.kind != OpKind::Read) continue;
      const Relation& rel = m.schema().relations[o.relation];
      if (rel.workload_read_only) continue;
      if ((o.read_set & ~rel.read_only) == 0) continue;
      out.push_back({t, op});
    }
  return out;
}

Model apply_promotion(const Model& m, const PromotionChoice& choice) {
  auto candidates = promotable_reads(m);
  Schema schema = m.schema();
  std::vector<Template> templates = m.templates();
  for (const auto& p : choice.promoted) {
    if (std::find(candidates.begin(), candidates.end(), p) == candidates.end())
      throw NotPromotable("operation " + std::to_string(p.op + 1) +
                          " of template " +
                          (p.template_idx >= 0 &&
                                   p.template_idx <
                                       static_cast<int>(templates.size())
                               ? templates[p.template_idx].name
                               : std::string("?")) +
                          " is not a promotable read");
    TemplateOperation& op = templates[p.template_idx].operations[p.op];
    const Relation& rel = schema.relations[op.relation];
    op.kind = OpKind::Update;
    op.write_set = op.read_set & ~rel.read_only;
  }
  return Model::validate(std::move(schema), std::move(templates));
}

std::string choice_label(const Model& m, const PromotionChoice& choice) {
  if (choice.promoted.empty()) return "no promotion";
  auto sorted = choice.promoted;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.template_idx != b.template_idx ? a.template_idx < b.template_idx
                                            : a.op < b.op;
  });
  std::string out;
  int current = -1;
  for (const auto& p : sorted) {
    const Template& t = m.templates()[p.template_idx];
    const Relation& rel =
        m.schema().relations[t.operations[p.op].relation];
    if (p.template_idx != current) {
      if (!out.empty()) out += ", ";
      out += t.short_name() + ": ";
      current = p.template_idx;
    } else {
      out += ",";
    }
    out += rel.name.substr(0, 1);
  }
  return out;
}

std::vector<ExploreRow> explore(const Model& m, RunMode mode) {
  auto candidates = promotable_reads(m);
  int k = static_cast<int>(candidates.size());
  int rows = 1 << k;
  std::vector<ExploreRow> out(rows);

  // Rows are independent; the lowest-allocation computation inside each row
  // stays serial so the two parallel levels do not nest.
  bool parallel = mode == RunMode::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int mask = 0; mask < rows; ++mask) {
    PromotionChoice choice;
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) choice.promoted.push_back(candidates[i]);
    Model promoted = apply_promotion(m, choice);
    ExploreRow row;
    row.label = choice_label(m, choice);
    row.lowest = lowest_allocation(
        promoted, parallel ? RunMode::Serial : mode);
    row.choice = std::move(choice);
    out[mask] = std::move(row);
  }
  (void)parallel;
  return out;
}

std::vector<std::vector<int>> group_rows(const std::vector<ExploreRow>& rows) {
  std::vector<std::vector<int>> groups;
  std::vector<Allocation> reps;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    bool placed = false;
    for (std::size_t g = 0; g < reps.size(); ++g)
      if (reps[g] == rows[i].lowest) {
        groups[g].push_back(i);
        placed = true;
        break;
      }
    if (!placed) {
      reps.push_back(rows[i].lowest);
      groups.push_back({i});
    }
  }
  return groups;
}

}  // namespace mvrobust
