#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mvrobust/model.hpp"
#include "mvrobust/oracle.hpp"

namespace mvrobust {

struct NotPromotable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PromotableRead {
  int template_idx = -1;
  int op = -1;
  bool operator==(const PromotableRead&) const = default;
};

// R-operations over relations that the workload writes, reading at least one
// attribute that is not read-only. Deterministic template-major order.
std::vector<PromotableRead> promotable_reads(const Model& m);

struct PromotionChoice {
  std::vector<PromotableRead> promoted;
  bool operator==(const PromotionChoice&) const = default;
};

// Replaces each promoted read in place by an identity update: same position,
// variable and read set; the write set is the read set minus the relation's
// read-only attributes.
Model apply_promotion(const Model& m, const PromotionChoice& choice);

// 'Bal: S,C, WC: S' style label; "no promotion" for the empty choice.
std::string choice_label(const Model& m, const PromotionChoice& choice);

struct ExploreRow {
  PromotionChoice choice;
  std::string label;
  Allocation lowest;
};

// One row per subset of the promotable reads (2^k rows, subset-mask order),
// each carrying the lowest robust allocation of the promoted template set.
std::vector<ExploreRow> explore(const Model& m,
                                RunMode mode = RunMode::Parallel);

// Partition of row indices by identical allocation, groups ordered by first
// appearance.
std::vector<std::vector<int>> group_rows(const std::vector<ExploreRow>& rows);

}  // namespace mvrobust
