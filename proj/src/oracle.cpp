#include "mvrobust/oracle.hpp"

#include <algorithm>
#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mvrobust {

const char* to_string(DepKind k) {
  switch (k) {
    case DepKind::WW:
      return "ww";
    case DepKind::WR:
      return "wr";
    case DepKind::RWAnti:
      return "rw";
  }
  return "?";
}

int MVSchedule::commit_pos(int txn) const {
  for (int i = 0; i < static_cast<int>(ops.size()); ++i)
    if (ops[i].txn == txn && ops[i].kind == SchedKind::Commit) return i;
  return -1;
}

int MVSchedule::first_pos(int txn) const {
  for (int i = 0; i < static_cast<int>(ops.size()); ++i)
    if (ops[i].txn == txn) return i;
  return -1;
}

bool MVSchedule::txn_read_only(int txn) const {
  for (const auto& op : ops)
    if (op.txn == txn && op.is_write() && op.kind != SchedKind::Commit)
      return false;
  return true;
}

const TupleVersions* MVSchedule::versions_of(int relation, int tuple) const {
  for (const auto& tv : version_order)
    if (tv.relation == relation && tv.tuple == tuple) return &tv;
  return nullptr;
}

int MVSchedule::version_rank(int op_idx) const {
  if (op_idx < 0) return -1;  // op0
  const SchedOp& op = ops[op_idx];
  const TupleVersions* tv = versions_of(op.relation, op.tuple);
  if (!tv) return -1;
  for (int r = 0; r < static_cast<int>(tv->writes.size()); ++r)
    if (tv->writes[r] == op_idx) return r;
  return -1;
}

void MVSchedule::check_well_formed() const {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("malformed schedule: " + msg);
  };
  std::vector<int> commit(txn_count, -1);
  std::vector<int> last_op(txn_count, -1);
  for (int i = 0; i < static_cast<int>(ops.size()); ++i) {
    const SchedOp& op = ops[i];
    if (op.txn < 0 || op.txn >= txn_count) fail("operation with bad txn id");
    if (op.kind == SchedKind::Commit) {
      if (commit[op.txn] >= 0) fail("transaction commits twice");
      commit[op.txn] = i;
    } else {
      if (commit[op.txn] >= 0) fail("operation after commit");
      last_op[op.txn] = i;
    }
  }
  for (int t = 0; t < txn_count; ++t)
    if (commit[t] < 0) fail("transaction without commit");

  std::vector<bool> in_version_order(ops.size(), false);
  for (const auto& tv : version_order)
    for (int w : tv.writes) {
      if (w < 0 || w >= static_cast<int>(ops.size())) fail("bad version entry");
      const SchedOp& op = ops[w];
      if (!op.is_write() || op.kind == SchedKind::Commit)
        fail("version order entry is not a write");
      if (op.relation != tv.relation || op.tuple != tv.tuple)
        fail("version order entry on the wrong tuple");
      if (in_version_order[w]) fail("write listed twice in version order");
      in_version_order[w] = true;
    }
  for (int i = 0; i < static_cast<int>(ops.size()); ++i)
    if (ops[i].kind != SchedKind::Commit && ops[i].is_write() &&
        !in_version_order[i])
      fail("write missing from version order");

  if (version_fn.size() != ops.size()) fail("version function size mismatch");
  for (int i = 0; i < static_cast<int>(ops.size()); ++i) {
    const SchedOp& op = ops[i];
    bool reads = op.kind != SchedKind::Commit && op.is_read();
    if (!reads) {
      if (version_fn[i] != -2) fail("version function set on a non-read");
      continue;
    }
    int v = version_fn[i];
    if (v == -1) continue;  // op0
    if (v < 0 || v >= static_cast<int>(ops.size()) || v == i)
      fail("bad version function target");
    const SchedOp& w = ops[v];
    if (!w.is_write() || w.kind == SchedKind::Commit)
      fail("version function target is not a write");
    if (w.relation != op.relation || w.tuple != op.tuple)
      fail("version function target on a different tuple");
    if (v >= i) fail("read observes a later operation");
  }
}

std::vector<ConcreteTxn> instantiate_canonical(const Model& m,
                                               const Sequence& seq) {
  SequenceConnectivity conn(m, seq);
  int n = seq.length();
  int tau1 = seq.occurrence_template(1);
  const Template& t1 = m.templates()[tau1];
  int var_o1 = t1.operations[seq.out_op(1)].variable;
  int var_p1 = t1.operations[seq.in_op(1)].variable;
  int cls_o1 = conn.find(1, var_o1);
  int cls_p1 = conn.find(1, var_p1);

  std::vector<ConcreteTxn> out;
  out.reserve(n);
  for (int occ = 1; occ <= n; ++occ) {
    int ti = seq.occurrence_template(occ);
    const Template& t = m.templates()[ti];
    ConcreteTxn txn;
    txn.source_template = ti;
    txn.occurrence = occ;
    txn.tuple_of_var.resize(t.variables.size());
    for (int v = 0; v < static_cast<int>(t.variables.size()); ++v) {
      int cls = conn.find(occ, v);
      int tuple;
      if (cls == cls_o1)
        tuple = 1;
      else if (cls == cls_p1)
        tuple = 2;
      else
        tuple = occ == 1 ? 4 : 3;
      txn.tuple_of_var[v] = tuple;
    }
    out.push_back(std::move(txn));
  }
  return out;
}

std::vector<IsolationLevel> canonical_txn_levels(const Model& m,
                                                 const Sequence& seq,
                                                 const Allocation& alloc) {
  (void)m;
  std::vector<IsolationLevel> levels;
  levels.reserve(seq.length());
  for (int occ = 1; occ <= seq.length(); ++occ)
    levels.push_back(alloc[seq.occurrence_template(occ)]);
  return levels;
}

MVSchedule build_split_schedule(const Model& m, const Sequence& seq,
                                const Allocation& alloc) {
  MVSchedule s;
  s.txns = instantiate_canonical(m, seq);
  int n = seq.length();
  s.txn_count = n;
  auto levels = canonical_txn_levels(m, seq, alloc);

  auto emit = [&](int occ, int op_idx) {
    int ti = seq.occurrence_template(occ);
    const TemplateOperation& top = m.templates()[ti].operations[op_idx];
    SchedOp op;
    op.txn = occ - 1;
    op.kind = top.kind == OpKind::Read    ? SchedKind::Read
              : top.kind == OpKind::Write ? SchedKind::Write
                                          : SchedKind::Update;
    op.relation = top.relation;
    op.tuple = s.txns[occ - 1].tuple_of_var[top.variable];
    op.read_set = top.read_set;
    op.write_set = top.write_set;
    op.source_op = op_idx;
    s.ops.push_back(op);
  };
  auto emit_commit = [&](int occ) {
    SchedOp c;
    c.txn = occ - 1;
    c.kind = SchedKind::Commit;
    s.ops.push_back(c);
  };

  int tau1 = seq.occurrence_template(1);
  int o1 = seq.out_op(1);
  int tau1_ops = static_cast<int>(m.templates()[tau1].operations.size());
  for (int i = 0; i <= o1; ++i) emit(1, i);
  for (int occ = 2; occ <= n; ++occ) {
    int ops = static_cast<int>(
        m.templates()[seq.occurrence_template(occ)].operations.size());
    for (int i = 0; i < ops; ++i) emit(occ, i);
    emit_commit(occ);
  }
  for (int i = o1 + 1; i < tau1_ops; ++i) emit(1, i);
  emit_commit(1);

  // Version order = commit order; same-transaction writes keep program order.
  std::vector<int> commit_pos(n);
  std::vector<int> first_pos(n, -1);
  for (int i = 0; i < static_cast<int>(s.ops.size()); ++i) {
    if (s.ops[i].kind == SchedKind::Commit) commit_pos[s.ops[i].txn] = i;
    if (first_pos[s.ops[i].txn] < 0) first_pos[s.ops[i].txn] = i;
  }
  for (int i = 0; i < static_cast<int>(s.ops.size()); ++i) {
    const SchedOp& op = s.ops[i];
    if (op.kind == SchedKind::Commit || !op.is_write()) continue;
    TupleVersions* tv = nullptr;
    for (auto& existing : s.version_order)
      if (existing.relation == op.relation && existing.tuple == op.tuple)
        tv = &existing;
    if (!tv) {
      s.version_order.push_back({op.relation, op.tuple, {}});
      tv = &s.version_order.back();
    }
    tv->writes.push_back(i);
  }
  for (auto& tv : s.version_order)
    std::sort(tv.writes.begin(), tv.writes.end(), [&](int a, int b) {
      int ca = commit_pos[s.ops[a].txn], cb = commit_pos[s.ops[b].txn];
      if (ca != cb) return ca < cb;
      return a < b;
    });

  // Reads observe the last version committed before their anchor.
  s.version_fn.assign(s.ops.size(), -2);
  for (int i = 0; i < static_cast<int>(s.ops.size()); ++i) {
    const SchedOp& op = s.ops[i];
    if (op.kind == SchedKind::Commit || !op.is_read()) continue;
    int anchor = levels[op.txn] == IsolationLevel::RC ? i : first_pos[op.txn];
    int observed = -1;
    const TupleVersions* tv = s.versions_of(op.relation, op.tuple);
    if (tv)
      for (int w : tv->writes)
        if (s.ops[w].txn != op.txn && commit_pos[s.ops[w].txn] < anchor)
          observed = w;  // writes are in version order, keep the last
    s.version_fn[i] = observed;
  }
  return s;
}

std::vector<DependencyEdge> dependencies(const MVSchedule& s) {
  std::vector<DependencyEdge> out;
  int count = static_cast<int>(s.ops.size());
  for (int b = 0; b < count; ++b) {
    const SchedOp& ob = s.ops[b];
    if (ob.kind == SchedKind::Commit) continue;
    for (int a = 0; a < count; ++a) {
      if (a == b) continue;
      const SchedOp& oa = s.ops[a];
      if (oa.kind == SchedKind::Commit || oa.txn == ob.txn) continue;
      if (oa.relation != ob.relation || oa.tuple != ob.tuple) continue;
      if (ob.is_write() && oa.is_write() && (ob.write_set & oa.write_set) &&
          s.version_rank(b) < s.version_rank(a))
        out.push_back({b, a, DepKind::WW});
      if (ob.is_write() && oa.is_read() && (ob.write_set & oa.read_set)) {
        int v = s.version_fn[a];
        if (v == b || (v >= 0 && s.version_rank(b) < s.version_rank(v)))
          out.push_back({b, a, DepKind::WR});
      }
      if (ob.is_read() && oa.is_write() && (ob.read_set & oa.write_set)) {
        int v = s.version_fn[b];
        if (s.version_rank(v) < s.version_rank(a))
          out.push_back({b, a, DepKind::RWAnti});
      }
    }
  }
  return out;
}

std::vector<std::vector<int>> serialization_graph(const MVSchedule& s) {
  std::vector<std::vector<int>> adj(s.txn_count);
  for (const auto& e : dependencies(s)) {
    int from = s.ops[e.from_op].txn, to = s.ops[e.to_op].txn;
    auto& row = adj[from];
    if (std::find(row.begin(), row.end(), to) == row.end()) row.push_back(to);
  }
  return adj;
}

bool is_conflict_serializable(const MVSchedule& s) {
  auto adj = serialization_graph(s);
  int n = s.txn_count;
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<std::pair<int, std::size_t>> stack;
  for (int start = 0; start < n; ++start) {
    if (state[start]) continue;
    stack.push_back({start, 0});
    state[start] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < adj[v].size()) {
        int w = adj[v][next++];
        if (state[w] == 1) return false;
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

bool concurrent(const MVSchedule& s, int t1, int t2) {
  return s.first_pos(t1) < s.commit_pos(t2) &&
         s.first_pos(t2) < s.commit_pos(t1);
}

bool respects_commit_order(const MVSchedule& s, int txn) {
  int cj = s.commit_pos(txn);
  for (int j = 0; j < static_cast<int>(s.ops.size()); ++j) {
    const SchedOp& oj = s.ops[j];
    if (oj.txn != txn || oj.kind == SchedKind::Commit || !oj.is_write())
      continue;
    for (int i = 0; i < static_cast<int>(s.ops.size()); ++i) {
      const SchedOp& oi = s.ops[i];
      if (oi.txn == txn || oi.kind == SchedKind::Commit || !oi.is_write())
        continue;
      if (oi.relation != oj.relation || oi.tuple != oj.tuple) continue;
      bool version_before = s.version_rank(j) < s.version_rank(i);
      bool commit_before = cj < s.commit_pos(oi.txn);
      if (version_before != commit_before) return false;
    }
  }
  return true;
}

bool read_last_committed_relative_to(const MVSchedule& s, int read_op,
                                     int anchor_op) {
  const SchedOp& r = s.ops[read_op];
  int v = s.version_fn[read_op];
  if (v != -1 && !(s.commit_pos(s.ops[v].txn) < anchor_op)) return false;
  int v_rank = s.version_rank(v);
  const TupleVersions* tv = s.versions_of(r.relation, r.tuple);
  if (tv)
    for (int w : tv->writes)
      if (s.commit_pos(s.ops[w].txn) < anchor_op && v_rank < s.version_rank(w))
        return false;
  return true;
}

bool reads_last_committed(const MVSchedule& s, int txn,
                          bool relative_to_first) {
  int first = s.first_pos(txn);
  for (int i = 0; i < static_cast<int>(s.ops.size()); ++i) {
    const SchedOp& op = s.ops[i];
    if (op.txn != txn || op.kind == SchedKind::Commit || !op.is_read())
      continue;
    if (!read_last_committed_relative_to(s, i, relative_to_first ? first : i))
      return false;
  }
  return true;
}

bool exhibits_dirty_write(const MVSchedule& s, int txn) {
  for (int a = 0; a < static_cast<int>(s.ops.size()); ++a) {
    const SchedOp& oa = s.ops[a];
    if (oa.txn != txn || oa.kind == SchedKind::Commit || !oa.is_write())
      continue;
    for (int b = 0; b < a; ++b) {
      const SchedOp& ob = s.ops[b];
      if (ob.txn == txn || ob.kind == SchedKind::Commit || !ob.is_write())
        continue;
      if (ob.relation != oa.relation || ob.tuple != oa.tuple) continue;
      if (a < s.commit_pos(ob.txn)) return true;
    }
  }
  return false;
}

bool exhibits_concurrent_write(const MVSchedule& s, int txn) {
  int first = s.first_pos(txn);
  for (int a = 0; a < static_cast<int>(s.ops.size()); ++a) {
    const SchedOp& oa = s.ops[a];
    if (oa.txn != txn || oa.kind == SchedKind::Commit || !oa.is_write())
      continue;
    for (int b = 0; b < a; ++b) {
      const SchedOp& ob = s.ops[b];
      if (ob.txn == txn || ob.kind == SchedKind::Commit || !ob.is_write())
        continue;
      if (ob.relation != oa.relation || ob.tuple != oa.tuple) continue;
      if (first < s.commit_pos(ob.txn)) return true;
    }
  }
  return false;
}

std::vector<DangerousStructure> dangerous_structures(const MVSchedule& s) {
  int n = s.txn_count;
  std::vector<std::vector<bool>> rw(n, std::vector<bool>(n, false));
  for (const auto& e : dependencies(s))
    if (e.kind == DepKind::RWAnti)
      rw[s.ops[e.from_op].txn][s.ops[e.to_op].txn] = true;

  std::vector<DangerousStructure> out;
  for (int t1 = 0; t1 < n; ++t1)
    for (int t2 = 0; t2 < n; ++t2) {
      if (t2 == t1 || !rw[t1][t2] || !concurrent(s, t1, t2)) continue;
      for (int t3 = 0; t3 < n; ++t3) {
        if (t3 == t2 || !rw[t2][t3] || !concurrent(s, t2, t3)) continue;
        if (!(s.commit_pos(t3) <= s.commit_pos(t1))) continue;
        if (!(s.commit_pos(t3) < s.commit_pos(t2))) continue;
        if (s.txn_read_only(t1) && !(s.commit_pos(t3) < s.first_pos(t1)))
          continue;
        out.push_back({t1, t2, t3});
      }
    }
  return out;
}

bool allowed_under(const MVSchedule& s,
                   const std::vector<IsolationLevel>& txn_levels) {
  for (int t = 0; t < s.txn_count; ++t) {
    if (!respects_commit_order(s, t)) return false;
    if (txn_levels[t] == IsolationLevel::RC) {
      if (!reads_last_committed(s, t, /*relative_to_first=*/false))
        return false;
      if (exhibits_dirty_write(s, t)) return false;
    } else {
      if (!reads_last_committed(s, t, /*relative_to_first=*/true)) return false;
      if (exhibits_concurrent_write(s, t)) return false;
    }
  }
  for (const auto& d : dangerous_structures(s))
    if (txn_levels[d.t1] == IsolationLevel::SSI &&
        txn_levels[d.t2] == IsolationLevel::SSI &&
        txn_levels[d.t3] == IsolationLevel::SSI)
      return false;
  return true;
}

bool sequence_admits_split_schedule(const Model& m, const Allocation& alloc,
                                    const Sequence& seq, std::string* reason) {
  auto fail = [&](const std::string& why) {
    if (reason) *reason = why;
    return false;
  };
  if (!sequence_well_formed(m, seq)) return fail("sequence not well formed");

  SequenceConnectivity conn(m, seq);
  int n = seq.length();
  int tau1 = seq.occurrence_template(1);
  const Template& t1 = m.templates()[tau1];
  int o1 = seq.out_op(1);
  int p1 = seq.in_op(1);
  int p2 = seq.in_op(2);
  int o_n = seq.out_op(n);
  int tau2 = seq.occurrence_template(2);
  int taun = seq.occurrence_template(n);
  const auto& t2_ops = m.templates()[tau2].operations;
  const auto& tn_ops = m.templates()[taun].operations;

  auto var_of = [&](int ti, int op) {
    return m.templates()[ti].operations[op].variable;
  };

  // (1): no tau1 operation conflicts into a connected variable of the middle
  // occurrences 3..n-1.
  for (int occ = 3; occ <= n - 1; ++occ) {
    int tj = seq.occurrence_template(occ);
    const auto& tj_ops = m.templates()[tj].operations;
    for (int a = 0; a < static_cast<int>(t1.operations.size()); ++a)
      for (int b = 0; b < static_cast<int>(tj_ops.size()); ++b)
        if (potential_conflict(t1.operations[a], tj_ops[b]).any() &&
            conn.connected({1, var_of(tau1, a)}, {occ, var_of(tj, b)}))
          return fail("condition (1): tau1 conflicts with occurrence " +
                      std::to_string(occ));
  }

  // (2) and (3): prefix writes never ww-conflict into tau2/taun over connected
  // variables; postfix writes only under RC.
  std::vector<int> boundary_occs = {2};
  if (n != 2) boundary_occs.push_back(n);
  for (int a = 0; a < static_cast<int>(t1.operations.size()); ++a) {
    const auto& oa = t1.operations[a];
    if (!oa.is_write()) continue;
    bool in_prefix = a <= o1;
    if (!in_prefix && alloc[tau1] == IsolationLevel::RC) continue;
    for (int occ : boundary_occs) {
      int tb = seq.occurrence_template(occ);
      const auto& tb_ops = m.templates()[tb].operations;
      for (int b = 0; b < static_cast<int>(tb_ops.size()); ++b) {
        if (!tb_ops[b].is_write()) continue;
        if (potential_conflict(oa, tb_ops[b]).ww &&
            conn.connected({1, var_of(tau1, a)}, {occ, var_of(tb, b)}))
          return fail(in_prefix ? "condition (2): prefix ww-conflict"
                                : "condition (3): postfix ww-conflict");
      }
    }
  }

  // (4): the first dependency must be a potential rw-conflict.
  if (!potential_conflict(t1.operations[o1], t2_ops[p2]).rw)
    return fail("condition (4): o1 not rw-conflicting with p2");

  // (5): the closing dependency is rw, or tau1 runs at RC and reads p1 after
  // the split point.
  if (!potential_conflict(tn_ops[o_n], t1.operations[p1]).rw &&
      !(alloc[tau1] == IsolationLevel::RC && o1 < p1))
    return fail("condition (5): closing dependency impossible");

  // (6): not all three of tau1, tau2, taun at SSI.
  if (alloc[tau1] == IsolationLevel::SSI &&
      alloc[tau2] == IsolationLevel::SSI && alloc[taun] == IsolationLevel::SSI)
    return fail("condition (6): tau1, tau2 and taun all SSI");

  // (7): SSI tau1/tau2 exclude wr-conflicts over connected variables.
  if (alloc[tau1] == IsolationLevel::SSI &&
      alloc[tau2] == IsolationLevel::SSI) {
    for (int a = 0; a < static_cast<int>(t1.operations.size()); ++a)
      for (int b = 0; b < static_cast<int>(t2_ops.size()); ++b)
        if (potential_conflict(t1.operations[a], t2_ops[b]).wr &&
            conn.connected({1, var_of(tau1, a)}, {2, var_of(tau2, b)}))
          return fail("condition (7): wr-conflict between SSI tau1 and tau2");
  }

  // (8): SSI tau1/taun exclude rw-conflicts over connected variables.
  if (alloc[tau1] == IsolationLevel::SSI &&
      alloc[taun] == IsolationLevel::SSI) {
    for (int a = 0; a < static_cast<int>(t1.operations.size()); ++a)
      for (int b = 0; b < static_cast<int>(tn_ops.size()); ++b)
        if (potential_conflict(t1.operations[a], tn_ops[b]).rw &&
            conn.connected({1, var_of(tau1, a)}, {n, var_of(taun, b)}))
          return fail("condition (8): rw-conflict between SSI tau1 and taun");
  }

  return true;
}

OracleCheck verify_sequence(const Model& m, const Allocation& alloc,
                            const Sequence& seq) {
  MVSchedule s = build_split_schedule(m, seq, alloc);
  s.check_well_formed();
  OracleCheck out;
  out.allowed = allowed_under(s, canonical_txn_levels(m, seq, alloc));
  out.serializable = is_conflict_serializable(s);
  return out;
}

namespace {

// Enumerates chains q0..q(n-1) with matching templates, in lexicographic
// order of quadruple indices, starting from a fixed first quadruple.
bool search_from(const Model& m, const Allocation& alloc,
                 const std::vector<Quadruple>& quads,
                 const std::vector<std::vector<int>>& by_from, int n, int q0,
                 Sequence& seq) {
  seq.quads.assign(1, quads[q0]);
  std::vector<std::pair<int, std::size_t>> stack;  // (depth, next list index)
  stack.push_back({1, 0});
  while (!stack.empty()) {
    auto& [depth, next] = stack.back();
    if (depth == n) {
      seq.quads.resize(depth);
      if (seq.quads.back().to_template == seq.quads.front().from_template &&
          verify_sequence(m, alloc, seq).ok())
        return true;
      stack.pop_back();
      continue;
    }
    const auto& candidates = by_from[seq.quads[depth - 1].to_template];
    if (next < candidates.size()) {
      int q = candidates[next++];
      seq.quads.resize(depth);
      seq.quads.push_back(quads[q]);
      stack.push_back({depth + 1, 0});
    } else {
      stack.pop_back();
    }
  }
  return false;
}

}  // namespace

std::optional<SearchHit> bounded_counterexample_search(const Model& m,
                                                       const Allocation& alloc,
                                                       int max_quadruples,
                                                       RunMode mode) {
  if (max_quadruples < 2)
    throw BoundTooSmall("sequence bound must be at least 2");

  auto quads = all_quadruples(m);
  std::vector<std::vector<int>> by_from(m.templates().size());
  for (int i = 0; i < static_cast<int>(quads.size()); ++i)
    by_from[quads[i].from_template].push_back(i);

  for (int n = 2; n <= max_quadruples; ++n) {
    int q_count = static_cast<int>(quads.size());
    std::vector<std::optional<Sequence>> hits(q_count);
    std::atomic<int> best{q_count};

    bool parallel = mode == RunMode::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (int q0 = 0; q0 < q_count; ++q0) {
      if (q0 > best.load(std::memory_order_relaxed)) continue;
      Sequence seq;
      if (search_from(m, alloc, quads, by_from, n, q0, seq)) {
        hits[q0] = seq;
        int prev = best.load(std::memory_order_relaxed);
        while (q0 < prev &&
               !best.compare_exchange_weak(prev, q0, std::memory_order_relaxed))
          ;
      }
    }
    (void)parallel;
    for (int q0 = 0; q0 < q_count; ++q0)
      if (hits[q0]) return SearchHit{*hits[q0]};
  }
  return std::nullopt;
}

}  // namespace mvrobust
