#pragma once

#include <stdexcept>
#include <vector>

#include "mvrobust/model.hpp"
#include "mvrobust/util.hpp"

namespace mvrobust {

struct ConflictKind {
  bool ww = false;
  bool wr = false;  // first writes, second reads
  bool rw = false;  // first reads, second writes
  bool any() const { return ww || wr || rw; }
  bool operator==(const ConflictKind&) const = default;
};

// Attribute-level potential conflict between two template operations; all
// components are false when the variable types differ.
ConflictKind potential_conflict(const TemplateOperation& o,
                                const TemplateOperation& p);

// (from_template, out_op, in_op, to_template); ops are indices within their
// template's operation list.
struct Quadruple {
  int from_template = -1;
  int out_op = -1;
  int in_op = -1;
  int to_template = -1;
  bool operator==(const Quadruple&) const = default;
};

// Every ordered pair of potentially conflicting operations, in template-major
// deterministic order. Includes self-pairs (two instantiations of the same
// template, possibly of the same operation).
std::vector<Quadruple> all_quadruples(const Model& m);

// Dense potential-conflict matrices over global operation ids.
class ConflictIndex {
 public:
  explicit ConflictIndex(const Model& m);

  int op_count() const { return n_; }
  bool any(int a, int b) const { return any_[a].test(b); }
  bool ww(int a, int b) const { return ww_[a].test(b); }
  bool wr(int a, int b) const { return wr_[a].test(b); }
  bool rw(int a, int b) const { return rw_[a].test(b); }
  ConflictKind kinds(int a, int b) const {
    return {ww(a, b), wr(a, b), rw(a, b)};
  }
  // Row of operations potentially conflicting (any kind) with op a.
  const DynBitset& row(int a) const { return any_[a]; }

 private:
  int n_;
  std::vector<DynBitset> any_, ww_, wr_, rw_;
};

// Cyclic sequence of potentially conflicting quadruples. Occurrence i
// (1-based) is an instance of quads[i-1].from_template; quadruple i links
// occurrence i to occurrence i+1 (n wraps to 1). Templates may repeat;
// occurrences are distinct transaction instances.
struct Sequence {
  std::vector<Quadruple> quads;

  int length() const { return static_cast<int>(quads.size()); }
  int occurrence_template(int occ) const { return quads[occ - 1].from_template; }
  // Outgoing operation of occurrence occ (the o_i of quadruple i).
  int out_op(int occ) const { return quads[occ - 1].out_op; }
  // Incoming operation of occurrence occ (the p_i of quadruple i-1).
  int in_op(int occ) const {
    int n = length();
    return quads[(occ - 2 + n) % n].in_op;
  }

  bool operator==(const Sequence&) const = default;
};

// Chaining plus per-quadruple potential conflicts.
bool sequence_well_formed(const Model& m, const Sequence& seq);

struct OccurrenceNotInSequence : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct OccVar {
  int occurrence;  // 1-based
  int variable;    // index within the occurrence's template
};

// Connectedness of variable occurrences within a fixed sequence: the
// reflexive-transitive closure of same-variable-same-occurrence plus
// quadruple endpoints. Union-find keyed by (occurrence, variable) because
// templates may repeat.
class SequenceConnectivity {
 public:
  SequenceConnectivity(const Model& m, const Sequence& seq);

  bool connected(OccVar a, OccVar b) const;
  int find(int occ, int var) const;  // class representative

 private:
  int key(int occ, int var) const;
  const Model& model_;
  int n_;
  std::vector<int> base_;  // per occurrence, offset into parent_
  mutable std::vector<int> parent_;
};

bool variables_connected_in_sequence(const Model& m, const Sequence& seq,
                                     OccVar a, OccVar b);

}  // namespace mvrobust
