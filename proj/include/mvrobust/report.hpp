#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "mvrobust/checker.hpp"
#include "mvrobust/model.hpp"
#include "mvrobust/oracle.hpp"
#include "mvrobust/promotion.hpp"

namespace mvrobust {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json model_to_json(const Model& m);
Model model_from_json(const nlohmann::json& j);

nlohmann::json allocation_to_json(const Model& m, const Allocation& a);
Allocation allocation_from_json(const Model& m, const nlohmann::json& j);

nlohmann::json sequence_to_json(const Model& m, const Sequence& seq);
Sequence sequence_from_json(const Model& m, const nlohmann::json& j);

// Witness files embed the model so oracle verification needs no re-analysis.
nlohmann::json witness_to_json(const Model& m, const Witness& w);
struct LoadedWitness {
  Model model;
  Witness witness;
};
LoadedWitness witness_from_json(const nlohmann::json& j);

nlohmann::json schedule_to_json(const Model& m, const MVSchedule& s);
MVSchedule schedule_from_json(const Model& m, const nlohmann::json& j);

// Command reports. All payloads are deterministic: keys are sorted and no
// timestamps are embedded.
nlohmann::json check_report(const Model& m, const Allocation& alloc,
                            const Verdict& verdict);
nlohmann::json lowest_report(const Model& m, const Allocation& lowest);
nlohmann::json promotions_report(const Model& m,
                                 const std::vector<ExploreRow>& rows);
nlohmann::json oracle_verify_report(const Model& m, const Allocation& alloc,
                                    const Witness& w);
nlohmann::json oracle_search_report(const Model& m, const Allocation& alloc,
                                    int bound,
                                    const std::optional<SearchHit>& hit);

std::string render_text(const nlohmann::json& report, const Model& m);

}  // namespace mvrobust
