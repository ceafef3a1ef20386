#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mvrobust/conflict.hpp"
#include "mvrobust/model.hpp"
#include "mvrobust/oracle.hpp"
#include "mvrobust/util.hpp"

namespace mvrobust {

// Connect labels: a node's variable is connected to var(o1) (O), to var(p1)
// (P), or to neither (N) in the sequence under construction.
enum class Label : std::uint8_t { O = 0, P = 1, N = 2 };
const char* to_string(Label l);
std::optional<Label> parse_label(std::string_view s);

enum class NodeDir : std::uint8_t { Out = 0, In = 1 };

struct CheckerParams {
  int tau1 = -1;
  int o1 = -1;  // operation index within tau1
  int p1 = -1;
  int h = 2;  // 1 assumes var(o1) and var(p1) connected, 2 assumes not
  bool operator==(const CheckerParams&) const = default;
};

// pt-conflict-graph(o1, p1, tau1, h, P): nodes (template, op, label, in/out)
// filtered by the label conditions, edges propagating connectedness across
// potential conflicts (out->in, equal labels) and within templates (in->out,
// restricted label transitions).
class PtConflictGraph {
 public:
  PtConflictGraph(const Model& m, const ConflictIndex& pc, CheckerParams params);

  int node_id(int gop, Label c, NodeDir k) const {
    return (gop * 3 + static_cast<int>(c)) * 2 + static_cast<int>(k);
  }
  int node_count() const { return node_count_; }
  bool node_valid(int gop, Label c) const {
    return valid_[gop * 3 + static_cast<int>(c)];
  }
  bool has_edge(int from, int to) const { return adj_[from].test(to); }
  const DynBitset& adjacency(int node) const { return adj_[node]; }
  const DynBitset& closure_row(int node) const { return closure_[node]; }

  // Reflexive-free transitive closure plus the per-label-pair projection used
  // by the length>3 reachability case.
  void ensure_closure();
  // True iff some closure edge runs from an in-node (a, c, in) with a in
  // from_ops to an out-node (b, c2, out) with b in to_ops.
  bool closure_links(Label c, Label c2, const DynBitset& from_ops,
                     const DynBitset& to_ops) const;

  const CheckerParams& params() const { return params_; }

 private:
  const Model& model_;
  CheckerParams params_;
  int node_count_;
  std::vector<bool> valid_;         // per (gop, label)
  std::vector<DynBitset> adj_;      // per node id
  std::vector<DynBitset> closure_;  // per node id, filled by ensure_closure
  bool closed_ = false;
  // reach_[c][c2] row per op a: ops b with a closure in->out edge
  std::vector<DynBitset> reach_[3][3];
};

PtConflictGraph build_pt_conflict_graph(const Model& m, const ConflictIndex& pc,
                                        CheckerParams params);

struct Endpoints {
  int tau2 = -1, o2 = -1, p2 = -1;
  Label c_o2 = Label::N;
  int taun = -1, on = -1, pn = -1;
  Label c_pn = Label::N;
  bool operator==(const Endpoints&) const = default;
};

// Reachability of the (taun, pn) endpoint from the (tau2, o2) endpoint:
// either the sequence closes with two quadruples, with three, or through a
// closure edge of the pt-conflict-graph.
bool reachable(const PtConflictGraph& g, const Model& m,
               const ConflictIndex& pc, const Endpoints& ep);

// Existence conditions (2)-(8) for the split schedule, with connectedness
// between tau1 variables and tau2/taun variables decided from the endpoint
// labels. The closing-dependency escape requires o1 strictly before p1.
bool valid_schedule(const Model& m, const ConflictIndex& pc,
                    const CheckerParams& params, const Endpoints& ep,
                    const Allocation& alloc);

struct Witness {
  Sequence sequence;
  CheckerParams params;
  Endpoints endpoints;
  bool o1_p1_connected = false;  // exact connectedness in the sequence
  // Exact connect label per occurrence (1-based) and template variable.
  std::vector<std::vector<Label>> occurrence_labels;
  bool operator==(const Witness&) const = default;
};

struct Verdict {
  bool robust = true;
  std::optional<Witness> witness;
};

struct InternalInconsistency : std::logic_error {
  using std::logic_error::logic_error;
};

// Rebuilds the minimal quadruple sequence behind a firing combination and
// recomputes exact labels. Re-validates the sequence against the split
// schedule conditions and the oracle; throws InternalInconsistency if either
// rejects it.
Witness extract_witness(const Model& m, const ConflictIndex& pc,
                        PtConflictGraph& g, const CheckerParams& params,
                        const Endpoints& ep, const Allocation& alloc);

// Decides template robustness. Serial and parallel modes return identical
// verdicts and witnesses: the parallel kernel evaluates (tau1, o1, p1, h)
// combinations concurrently and keeps the firing with the lowest
// deterministic index.
Verdict is_robust(const Model& m, const Allocation& alloc,
                  RunMode mode = RunMode::Parallel);

}  // namespace mvrobust
