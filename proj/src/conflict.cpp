#include "mvrobust/conflict.hpp"

namespace mvrobust {

ConflictKind potential_conflict(const TemplateOperation& o,
                                const TemplateOperation& p) {
  if (o.relation != p.relation) return {};
  ConflictKind k;
  k.ww = (o.write_set & p.write_set) != 0;
  k.wr = (o.write_set & p.read_set) != 0;
  k.rw = (o.read_set & p.write_set) != 0;
  return k;
}

std::vector<Quadruple> all_quadruples(const Model& m) {
  std::vector<Quadruple> out;
  const auto& ts = m.templates();
  for (int ti = 0; ti < static_cast<int>(ts.size()); ++ti)
    for (int oi = 0; oi < static_cast<int>(ts[ti].operations.size()); ++oi)
      for (int tj = 0; tj < static_cast<int>(ts.size()); ++tj)
        for (int pj = 0; pj < static_cast<int>(ts[tj].operations.size()); ++pj)
          if (potential_conflict(ts[ti].operations[oi], ts[tj].operations[pj])
                  .any())
            out.push_back({ti, oi, pj, tj});
  return out;
}

ConflictIndex::ConflictIndex(const Model& m) : n_(m.op_count()) {
  any_.assign(n_, DynBitset(n_));
  ww_.assign(n_, DynBitset(n_));
  wr_.assign(n_, DynBitset(n_));
  rw_.assign(n_, DynBitset(n_));
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) {
      ConflictKind k = potential_conflict(m.op(a), m.op(b));
      if (k.ww) ww_[a].set(b);
      if (k.wr) wr_[a].set(b);
      if (k.rw) rw_[a].set(b);
      if (k.any()) any_[a].set(b);
    }
}

bool sequence_well_formed(const Model& m, const Sequence& seq) {
  int n = seq.length();
  if (n < 2) return false;
  const auto& ts = m.templates();
  for (int i = 0; i < n; ++i) {
    const Quadruple& q = seq.quads[i];
    if (q.from_template < 0 || q.from_template >= static_cast<int>(ts.size()) ||
        q.to_template < 0 || q.to_template >= static_cast<int>(ts.size()))
      return false;
    const auto& from = ts[q.from_template];
    const auto& to = ts[q.to_template];
    if (q.out_op < 0 || q.out_op >= static_cast<int>(from.operations.size()) ||
        q.in_op < 0 || q.in_op >= static_cast<int>(to.operations.size()))
      return false;
    if (!potential_conflict(from.operations[q.out_op], to.operations[q.in_op])
             .any())
      return false;
    if (q.to_template != seq.quads[(i + 1) % n].from_template) return false;
  }
  return true;
}

SequenceConnectivity::SequenceConnectivity(const Model& m, const Sequence& seq)
    : model_(m), n_(seq.length()) {
  int total = 0;
  base_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    base_[i] = total;
    total += static_cast<int>(
        m.templates()[seq.occurrence_template(i + 1)].variables.size());
  }
  parent_.resize(total);
  for (int i = 0; i < total; ++i) parent_[i] = i;

  auto root = [&](int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent_[root(a)] = root(b); };

  for (int i = 0; i < n_; ++i) {
    const Quadruple& q = seq.quads[i];
    const auto& from = m.templates()[q.from_template];
    const auto& to = m.templates()[q.to_template];
    int occ_from = i + 1;
    int occ_to = (i + 1) % n_ + 1;
    unite(base_[occ_from - 1] + from.operations[q.out_op].variable,
          base_[occ_to - 1] + to.operations[q.in_op].variable);
  }
}

int SequenceConnectivity::key(int occ, int var) const {
  if (occ < 1 || occ > n_)
    throw OccurrenceNotInSequence("occurrence " + std::to_string(occ) +
                                  " not in sequence of length " +
                                  std::to_string(n_));
  int limit = (occ == n_ ? static_cast<int>(parent_.size()) : base_[occ]) -
              base_[occ - 1];
  if (var < 0 || var >= limit)
    throw OccurrenceNotInSequence("variable index " + std::to_string(var) +
                                  " not in occurrence " + std::to_string(occ));
  return base_[occ - 1] + var;
}

int SequenceConnectivity::find(int occ, int var) const {
  int x = key(occ, var);
  while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
  return x;
}

bool SequenceConnectivity::connected(OccVar a, OccVar b) const {
  return find(a.occurrence, a.variable) == find(b.occurrence, b.variable);
}

bool variables_connected_in_sequence(const Model& m, const Sequence& seq,
                                     OccVar a, OccVar b) {
  return SequenceConnectivity(m, seq).connected(a, b);
}

}  // namespace mvrobust
