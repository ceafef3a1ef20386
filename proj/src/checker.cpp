#include "mvrobust/checker.hpp"

#include <algorithm>
#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mvrobust {

const char* to_string(Label l) {
  switch (l) {
    case Label::O:
      return "O";
    case Label::P:
      return "P";
    case Label::N:
      return "N";
  }
  return "?";
}

std::optional<Label> parse_label(std::string_view s) {
  if (s == "O") return Label::O;
  if (s == "P") return Label::P;
  if (s == "N") return Label::N;
  return std::nullopt;
}

PtConflictGraph::PtConflictGraph(const Model& m, const ConflictIndex& pc,
                                 CheckerParams params)
    : model_(m), params_(params), node_count_(m.op_count() * 6) {
  const auto& templates = m.templates();
  const Template& t1 = templates[params.tau1];
  int var_o1 = t1.operations[params.o1].variable;
  int var_p1 = t1.operations[params.p1].variable;

  // Per template and variable: does some tau1 operation over var(o1)
  // (respectively var(p1)) potentially conflict with an operation of the
  // template over that variable?
  auto conflicts_from = [&](int tau1_var) {
    std::vector<std::vector<bool>> hit(templates.size());
    for (std::size_t t = 0; t < templates.size(); ++t)
      hit[t].assign(templates[t].variables.size(), false);
    for (int a = 0; a < static_cast<int>(t1.operations.size()); ++a) {
      if (t1.operations[a].variable != tau1_var) continue;
      int ga = m.op_id(params.tau1, a);
      for (std::size_t t = 0; t < templates.size(); ++t)
        for (int b = 0; b < static_cast<int>(templates[t].operations.size());
             ++b)
          if (pc.any(ga, m.op_id(static_cast<int>(t), b)))
            hit[t][templates[t].operations[b].variable] = true;
    }
    return hit;
  };
  auto hit_o1 = conflicts_from(var_o1);
  auto hit_p1 = conflicts_from(var_p1);

  valid_.assign(m.op_count() * 3, false);
  for (std::size_t t = 0; t < templates.size(); ++t)
    for (int b = 0; b < static_cast<int>(templates[t].operations.size()); ++b) {
      int g = m.op_id(static_cast<int>(t), b);
      int var = templates[t].operations[b].variable;
      valid_[g * 3 + static_cast<int>(Label::O)] = !hit_o1[t][var];
      valid_[g * 3 + static_cast<int>(Label::P)] = !hit_p1[t][var];
      valid_[g * 3 + static_cast<int>(Label::N)] = true;
    }

  adj_.assign(node_count_, DynBitset(node_count_));
  static constexpr Label kLabels[3] = {Label::O, Label::P, Label::N};

  for (std::size_t t = 0; t < templates.size(); ++t) {
    int ops = static_cast<int>(templates[t].operations.size());
    for (int b = 0; b < ops; ++b) {
      int g = m.op_id(static_cast<int>(t), b);
      int var = templates[t].operations[b].variable;
      for (Label c : kLabels) {
        if (!node_valid(g, c)) continue;
        // out -> in, equal labels, potentially conflicting operations
        int from_out = node_id(g, c, NodeDir::Out);
        for (std::size_t t2 = 0; t2 < templates.size(); ++t2)
          for (int b2 = 0;
               b2 < static_cast<int>(templates[t2].operations.size()); ++b2) {
            int g2 = m.op_id(static_cast<int>(t2), b2);
            if (node_valid(g2, c) && pc.any(g, g2))
              adj_[from_out].set(node_id(g2, c, NodeDir::In));
          }
        // in -> out within the same template
        int from_in = node_id(g, c, NodeDir::In);
        for (int b2 = 0; b2 < ops; ++b2) {
          int g2 = m.op_id(static_cast<int>(t), b2);
          int var2 = templates[t].operations[b2].variable;
          for (Label c2 : kLabels) {
            if (!node_valid(g2, c2)) continue;
            bool edge;
            if (var != var2)
              edge = (c == Label::O &&
                      (c2 == Label::P || c2 == Label::N)) ||
                     (c == Label::N && (c2 == Label::N || c2 == Label::P));
            else
              edge = c == c2 ||
                     (params.h == 1 && c == Label::O && c2 == Label::P);
            if (edge) adj_[from_in].set(node_id(g2, c2, NodeDir::Out));
          }
        }
      }
    }
  }
}

void PtConflictGraph::ensure_closure() {
  if (closed_) return;
  closure_ = adj_;
  for (int k = 0; k < node_count_; ++k)
    for (int i = 0; i < node_count_; ++i)
      if (closure_[i].test(k)) closure_[i] |= closure_[k];

  int ops = model_.op_count();
  for (int c = 0; c < 3; ++c)
    for (int c2 = 0; c2 < 3; ++c2)
      reach_[c][c2].assign(ops, DynBitset(ops));
  for (int a = 0; a < ops; ++a)
    for (int c = 0; c < 3; ++c) {
      if (!node_valid(a, static_cast<Label>(c))) continue;
      const DynBitset& row =
          closure_[node_id(a, static_cast<Label>(c), NodeDir::In)];
      for (int b = 0; b < ops; ++b)
        for (int c2 = 0; c2 < 3; ++c2)
          if (node_valid(b, static_cast<Label>(c2)) &&
              row.test(node_id(b, static_cast<Label>(c2), NodeDir::Out)))
            reach_[c][c2][a].set(b);
    }
  closed_ = true;
}

bool PtConflictGraph::closure_links(Label c, Label c2,
                                    const DynBitset& from_ops,
                                    const DynBitset& to_ops) const {
  const auto& rows = reach_[static_cast<int>(c)][static_cast<int>(c2)];
  for (std::size_t a = 0; a < from_ops.size(); ++a)
    if (from_ops.test(a) && rows[a].intersects(to_ops)) return true;
  return false;
}

PtConflictGraph build_pt_conflict_graph(const Model& m, const ConflictIndex& pc,
                                        CheckerParams params) {
  return PtConflictGraph(m, pc, params);
}

bool reachable(const PtConflictGraph& g, const Model& m,
               const ConflictIndex& pc, const Endpoints& ep) {
  int h = g.params().h;
  // Two quadruples: the middle occurrence is shared, so o2 must carry the
  // P label and p2 (= pn) the O label, or the h = 1 crossover.
  if (ep.tau2 == ep.taun && ep.o2 == ep.on && ep.p2 == ep.pn) {
    if (ep.c_o2 == Label::P && ep.c_pn == Label::O) return true;
    if (h == 1 && ep.c_o2 == Label::O && ep.c_pn == Label::P) return true;
  }
  // Three quadruples: o2 conflicts directly into pn.
  int g_o2 = m.op_id(ep.tau2, ep.o2);
  int g_pn = m.op_id(ep.taun, ep.pn);
  if (pc.any(g_o2, g_pn)) {
    if (ep.c_o2 == ep.c_pn) return true;
    if (h == 1 && ep.c_o2 == Label::O && ep.c_pn == Label::P) return true;
  }
  // Longer sequences: a closure edge from an in-node conflicting with o2 to
  // an out-node conflicting with pn, labels matching.
  return g.closure_links(ep.c_o2, ep.c_pn, pc.row(g_o2), pc.row(g_pn));
}

namespace {

struct LabelRule {
  int var_o1, var_p1, h;
  int var_o2, var_p2, var_on, var_pn;
  Label c_o2, c_pn;

  bool sim_o1(int v) const { return v == var_o1 || (h == 1 && v == var_p1); }
  bool sim_p1(int v) const { return v == var_p1 || (h == 1 && v == var_o1); }

  // Connection between a tau1 variable v and a tau2 variable x.
  bool conn_tau2(int v, int x) const {
    if (x == var_p2 && sim_o1(v)) return true;
    if (x == var_o2) {
      if (c_o2 == Label::O && sim_o1(v)) return true;
      if (c_o2 == Label::P && sim_p1(v)) return true;
    }
    return false;
  }
  // Connection between a tau1 variable v and a taun variable x.
  bool conn_taun(int v, int x) const {
    if (x == var_on && sim_p1(v)) return true;
    if (x == var_pn) {
      if (c_pn == Label::O && sim_o1(v)) return true;
      if (c_pn == Label::P && sim_p1(v)) return true;
    }
    return false;
  }
};

}  // namespace

bool valid_schedule(const Model& m, const ConflictIndex& pc,
                    const CheckerParams& params, const Endpoints& ep,
                    const Allocation& alloc) {
  const auto& t1_ops = m.templates()[params.tau1].operations;
  const auto& t2_ops = m.templates()[ep.tau2].operations;
  const auto& tn_ops = m.templates()[ep.taun].operations;

  LabelRule rule{t1_ops[params.o1].variable,
                 t1_ops[params.p1].variable,
                 params.h,
                 t2_ops[ep.o2].variable,
                 t2_ops[ep.p2].variable,
                 tn_ops[ep.on].variable,
                 tn_ops[ep.pn].variable,
                 ep.c_o2,
                 ep.c_pn};

  // (2): prefix writes must not ww-conflict into tau2 or taun over connected
  // variables; (3): the same for postfix writes unless tau1 runs at RC.
  bool tau1_rc = alloc[params.tau1] == IsolationLevel::RC;
  for (int a = 0; a < static_cast<int>(t1_ops.size()); ++a) {
    if (!t1_ops[a].is_write()) continue;
    if (a > params.o1 && tau1_rc) continue;
    int ga = m.op_id(params.tau1, a);
    for (int b = 0; b < static_cast<int>(t2_ops.size()); ++b)
      if (t2_ops[b].is_write() && pc.ww(ga, m.op_id(ep.tau2, b)) &&
          rule.conn_tau2(t1_ops[a].variable, t2_ops[b].variable))
        return false;
    for (int b = 0; b < static_cast<int>(tn_ops.size()); ++b)
      if (tn_ops[b].is_write() && pc.ww(ga, m.op_id(ep.taun, b)) &&
          rule.conn_taun(t1_ops[a].variable, tn_ops[b].variable))
        return false;
  }

  // (4)
  if (!pc.rw(m.op_id(params.tau1, params.o1), m.op_id(ep.tau2, ep.p2)))
    return false;

  // (5): without a closing rw-conflict, tau1 must run at RC and read p1
  // strictly after the split point o1.
  if (!pc.rw(m.op_id(ep.taun, ep.on), m.op_id(params.tau1, params.p1))) {
    if (!tau1_rc || !(params.o1 < params.p1)) return false;
  }

  // (6)
  bool t1_ssi = alloc[params.tau1] == IsolationLevel::SSI;
  bool t2_ssi = alloc[ep.tau2] == IsolationLevel::SSI;
  bool tn_ssi = alloc[ep.taun] == IsolationLevel::SSI;
  if (t1_ssi && t2_ssi && tn_ssi) return false;

  // (7)
  if (t1_ssi && t2_ssi)
    for (int a = 0; a < static_cast<int>(t1_ops.size()); ++a) {
      int ga = m.op_id(params.tau1, a);
      for (int b = 0; b < static_cast<int>(t2_ops.size()); ++b)
        if (pc.wr(ga, m.op_id(ep.tau2, b)) &&
            rule.conn_tau2(t1_ops[a].variable, t2_ops[b].variable))
          return false;
    }

  // (8)
  if (t1_ssi && tn_ssi)
    for (int a = 0; a < static_cast<int>(t1_ops.size()); ++a) {
      int ga = m.op_id(params.tau1, a);
      for (int b = 0; b < static_cast<int>(tn_ops.size()); ++b)
        if (pc.rw(ga, m.op_id(ep.taun, b)) &&
            rule.conn_taun(t1_ops[a].variable, tn_ops[b].variable))
          return false;
    }

  return true;
}

namespace {

// Deterministic inner search of one (tau1, o1, p1, h) combination. Label
// set orders follow the algorithm text: {O} or {N, P} for o2, {P} or {N, O}
// for pn.
std::optional<Endpoints> search_combination(const Model& m,
                                            const ConflictIndex& pc,
                                            PtConflictGraph& g,
                                            const CheckerParams& params,
                                            const Allocation& alloc) {
  const auto& templates = m.templates();
  int g_o1 = m.op_id(params.tau1, params.o1);
  int g_p1 = m.op_id(params.tau1, params.p1);

  for (int tau2 = 0; tau2 < static_cast<int>(templates.size()); ++tau2) {
    const auto& t2_ops = templates[tau2].operations;
    for (int o2 = 0; o2 < static_cast<int>(t2_ops.size()); ++o2)
      for (int p2 = 0; p2 < static_cast<int>(t2_ops.size()); ++p2) {
        if (!pc.any(g_o1, m.op_id(tau2, p2))) continue;
        for (int taun = 0; taun < static_cast<int>(templates.size()); ++taun) {
          const auto& tn_ops = templates[taun].operations;
          for (int on = 0; on < static_cast<int>(tn_ops.size()); ++on) {
            if (!pc.any(m.op_id(taun, on), g_p1)) continue;
            for (int pn = 0; pn < static_cast<int>(tn_ops.size()); ++pn) {
              Label set_o2[2];
              int n_o2;
              if (t2_ops[o2].variable == t2_ops[p2].variable)
                set_o2[0] = Label::O, n_o2 = 1;
              else
                set_o2[0] = Label::N, set_o2[1] = Label::P, n_o2 = 2;
              Label set_pn[2];
              int n_pn;
              if (tn_ops[on].variable == tn_ops[pn].variable)
                set_pn[0] = Label::P, n_pn = 1;
              else
                set_pn[0] = Label::N, set_pn[1] = Label::O, n_pn = 2;

              for (int i = 0; i < n_o2; ++i)
                for (int j = 0; j < n_pn; ++j) {
                  Endpoints ep{tau2, o2,        p2, set_o2[i],
                               taun, on,        pn, set_pn[j]};
                  if (reachable(g, m, pc, ep) &&
                      valid_schedule(m, pc, params, ep, alloc))
                    return ep;
                }
            }
          }
        }
      }
  }
  return std::nullopt;
}

std::vector<CheckerParams> enumerate_combinations(const Model& m) {
  std::vector<CheckerParams> out;
  const auto& templates = m.templates();
  for (int t = 0; t < static_cast<int>(templates.size()); ++t) {
    int ops = static_cast<int>(templates[t].operations.size());
    for (int o1 = 0; o1 < ops; ++o1)
      for (int p1 = 0; p1 < ops; ++p1) {
        bool same_var = templates[t].operations[o1].variable ==
                        templates[t].operations[p1].variable;
        out.push_back({t, o1, p1, 1});
        if (!same_var) out.push_back({t, o1, p1, 2});
      }
  }
  return out;
}

}  // namespace

Witness extract_witness(const Model& m, const ConflictIndex& pc,
                        PtConflictGraph& g, const CheckerParams& params,
                        const Endpoints& ep, const Allocation& alloc) {
  Sequence seq;
  Quadruple first{params.tau1, params.o1, ep.p2, ep.tau2};
  Quadruple last{ep.taun, ep.on, params.p1, params.tau1};

  bool n2 = ep.tau2 == ep.taun && ep.o2 == ep.on && ep.p2 == ep.pn &&
            ((ep.c_o2 == Label::P && ep.c_pn == Label::O) ||
             (params.h == 1 && ep.c_o2 == Label::O && ep.c_pn == Label::P));
  int g_o2 = m.op_id(ep.tau2, ep.o2);
  int g_pn = m.op_id(ep.taun, ep.pn);
  bool n3 = pc.any(g_o2, g_pn) &&
            (ep.c_o2 == ep.c_pn ||
             (params.h == 1 && ep.c_o2 == Label::O && ep.c_pn == Label::P));

  if (n2) {
    seq.quads = {first, {ep.tau2, ep.o2, params.p1, params.tau1}};
  } else if (n3) {
    seq.quads = {first, {ep.tau2, ep.o2, ep.pn, ep.taun}, last};
  } else {
    // Shortest path between an in-node conflicting with o2 and an out-node
    // conflicting with pn, over the original edges. BFS in ascending node
    // order keeps parents, and thereby the witness, deterministic.
    g.ensure_closure();
    int nodes = g.node_count();
    std::vector<int> dist(nodes, -1), parent(nodes, -1);
    std::vector<int> queue;
    for (int a = 0; a < pc.op_count(); ++a)
      if (pc.any(a, g_o2) && g.node_valid(a, ep.c_o2)) {
        int nid = g.node_id(a, ep.c_o2, NodeDir::In);
        dist[nid] = 0;
        queue.push_back(nid);
      }
    std::sort(queue.begin(), queue.end());
    std::size_t head = 0;
    while (head < queue.size()) {
      int u = queue[head++];
      for (int v = 0; v < nodes; ++v)
        if (g.has_edge(u, v) && dist[v] < 0) {
          dist[v] = dist[u] + 1;
          parent[v] = u;
          queue.push_back(v);
        }
    }
    int target = -1;
    for (int b = 0; b < pc.op_count(); ++b) {
      if (!pc.any(b, g_pn) || !g.node_valid(b, ep.c_pn)) continue;
      int nid = g.node_id(b, ep.c_pn, NodeDir::Out);
      if (dist[nid] <= 0) continue;  // a path needs at least one edge
      if (target < 0 || dist[nid] < dist[target] ||
          (dist[nid] == dist[target] && nid < target))
        target = nid;
    }
    if (target < 0)
      throw InternalInconsistency(
          "reachability fired but no closure path found");

    std::vector<int> path;
    for (int v = target; v >= 0; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());

    auto node_op = [&](int nid) { return nid / 6; };
    auto node_dir = [&](int nid) {
      return static_cast<NodeDir>(nid & 1);
    };
    if (node_dir(path.front()) != NodeDir::In ||
        node_dir(path.back()) != NodeDir::Out)
      throw InternalInconsistency("closure path has wrong endpoints");

    seq.quads.push_back(first);
    auto [pt, pop] = m.op_ref(node_op(path.front()));
    seq.quads.push_back({ep.tau2, ep.o2, pop, pt});
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      if (node_dir(path[i]) != NodeDir::Out ||
          node_dir(path[i + 1]) != NodeDir::In)
        continue;
      auto [ot, oop] = m.op_ref(node_op(path[i]));
      auto [it, iop] = m.op_ref(node_op(path[i + 1]));
      seq.quads.push_back({ot, oop, iop, it});
    }
    auto [lt, lop] = m.op_ref(node_op(path.back()));
    seq.quads.push_back({lt, lop, ep.pn, ep.taun});
    seq.quads.push_back(last);
  }

  Witness w;
  w.sequence = seq;
  w.params = params;
  w.endpoints = ep;

  SequenceConnectivity conn(m, seq);
  const Template& t1 = m.templates()[params.tau1];
  int var_o1 = t1.operations[params.o1].variable;
  int var_p1 = t1.operations[params.p1].variable;
  int cls_o1 = conn.find(1, var_o1);
  int cls_p1 = conn.find(1, var_p1);
  w.o1_p1_connected = cls_o1 == cls_p1;
  for (int occ = 1; occ <= seq.length(); ++occ) {
    const Template& t = m.templates()[seq.occurrence_template(occ)];
    std::vector<Label> labels(t.variables.size(), Label::N);
    for (int v = 0; v < static_cast<int>(t.variables.size()); ++v) {
      int cls = conn.find(occ, v);
      if (cls == cls_o1)
        labels[v] = Label::O;
      else if (cls == cls_p1)
        labels[v] = Label::P;
    }
    w.occurrence_labels.push_back(std::move(labels));
  }

  std::string why;
  if (!sequence_admits_split_schedule(m, alloc, seq, &why))
    throw InternalInconsistency("extracted witness rejected: " + why);
  if (!verify_sequence(m, alloc, seq).ok())
    throw InternalInconsistency(
        "extracted witness schedule failed oracle verification");
  return w;
}

Verdict is_robust(const Model& m, const Allocation& alloc, RunMode mode) {
  if (alloc.size() != m.templates().size())
    throw DomainMismatch("allocation does not cover the template set");

  ConflictIndex pc(m);
  auto combos = enumerate_combinations(m);

  auto combo_alive = [&](const CheckerParams& c) {
    // Dead combinations: o1 conflicts with nothing, or nothing conflicts
    // with p1; the inner gates can then never pass.
    return pc.row(m.op_id(c.tau1, c.o1)).any() &&
           pc.row(m.op_id(c.tau1, c.p1)).any();
  };

  int fired = -1;
  Endpoints fired_ep;

  if (mode == RunMode::Serial) {
    for (int i = 0; i < static_cast<int>(combos.size()); ++i) {
      if (!combo_alive(combos[i])) continue;
      PtConflictGraph g(m, pc, combos[i]);
      g.ensure_closure();
      if (auto ep = search_combination(m, pc, g, combos[i], alloc)) {
        fired = i;
        fired_ep = *ep;
        break;
      }
    }
  } else {
    int count = static_cast<int>(combos.size());
    std::vector<std::optional<Endpoints>> results(count);
    std::atomic<int> best{count};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < count; ++i) {
      if (i > best.load(std::memory_order_relaxed)) continue;
      if (!combo_alive(combos[i])) continue;
      PtConflictGraph g(m, pc, combos[i]);
      g.ensure_closure();
      if (auto ep = search_combination(m, pc, g, combos[i], alloc)) {
        results[i] = *ep;
        int prev = best.load(std::memory_order_relaxed);
        while (i < prev && !best.compare_exchange_weak(
                               prev, i, std::memory_order_relaxed))
          ;
      }
    }
    for (int i = 0; i < count; ++i)
      if (results[i]) {
        fired = i;
        fired_ep = *results[i];
        break;
      }
  }

  if (fired < 0) return {true, std::nullopt};
  PtConflictGraph g(m, pc, combos[fired]);
  g.ensure_closure();
  return {false, extract_witness(m, pc, g, combos[fired], fired_ep, alloc)};
}

}  // namespace mvrobust
