#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvrobust/conflict.hpp"
#include "mvrobust/model.hpp"

namespace mvrobust {

enum class RunMode { Serial, Parallel };

// Transaction instantiated from a template occurrence via a canonical
// assignment over the four-tuples-per-relation database: each variable maps
// to a tuple index 1..4 of its own relation.
struct ConcreteTxn {
  int source_template = -1;
  int occurrence = 0;               // 1-based position in the sequence
  std::vector<int> tuple_of_var;    // per template variable
  bool operator==(const ConcreteTxn&) const = default;
};

enum class SchedKind : std::uint8_t { Read, Write, Update, Commit };

struct SchedOp {
  int txn = -1;
  SchedKind kind = SchedKind::Read;
  int relation = -1;
  int tuple = 0;
  AttrSet read_set = 0;
  AttrSet write_set = 0;
  int source_op = -1;  // template operation index, -1 for hand-encoded ops

  bool is_read() const {
    return kind == SchedKind::Read || kind == SchedKind::Update;
  }
  bool is_write() const {
    return kind == SchedKind::Write || kind == SchedKind::Update;
  }
  bool operator==(const SchedOp&) const = default;
};

struct TupleVersions {
  int relation = -1;
  int tuple = 0;
  std::vector<int> writes;  // op indices in version (<<) order; op0 implicit first
  bool operator==(const TupleVersions&) const = default;
};

// Multiversion schedule: total operation order, per-tuple version order and
// a version function. op0 (the initial version writer) is implicit and
// denoted by index -1 in the version function.
struct MVSchedule {
  std::vector<SchedOp> ops;                 // position in vector = <=_s order
  std::vector<TupleVersions> version_order;
  std::vector<int> version_fn;              // per op: write idx | -1 (op0) | -2 (not a read)
  int txn_count = 0;
  std::vector<ConcreteTxn> txns;            // sources; empty for hand-encoded schedules

  int commit_pos(int txn) const;
  int first_pos(int txn) const;
  bool txn_read_only(int txn) const;  // no W/U operations
  // Rank of a write op in its tuple's version order; -1 stands for op0.
  int version_rank(int op_idx) const;
  const TupleVersions* versions_of(int relation, int tuple) const;

  // Structural invariants: one trailing commit per transaction, version
  // order covering exactly the write operations, version function mapping
  // reads to earlier writes on the same tuple. Throws std::invalid_argument.
  void check_well_formed() const;

  bool operator==(const MVSchedule&) const = default;
};

// Canonical variable assignments over D4 for a sequence of potentially
// conflicting quadruples: variables connected to var(o1) map to tuple 1,
// to var(p1) (and not var(o1)) to tuple 2, all others to tuple 4 for the
// first occurrence and tuple 3 for the rest.
std::vector<ConcreteTxn> instantiate_canonical(const Model& m,
                                               const Sequence& seq);

std::vector<IsolationLevel> canonical_txn_levels(const Model& m,
                                                 const Sequence& seq,
                                                 const Allocation& alloc);

// Split schedule prefix(tau1,o1) . tau2 ... taun . postfix(tau1,o1) with the
// version order equal to the commit order and every read observing the last
// version committed before its level's anchor (the read itself for RC, the
// transaction's first operation for SI/SSI).
MVSchedule build_split_schedule(const Model& m, const Sequence& seq,
                                const Allocation& alloc);

enum class DepKind : std::uint8_t { WW, WR, RWAnti };
const char* to_string(DepKind k);

struct DependencyEdge {
  int from_op = -1;
  int to_op = -1;
  DepKind kind = DepKind::WW;
  bool operator==(const DependencyEdge&) const = default;
};

std::vector<DependencyEdge> dependencies(const MVSchedule& s);
// Transaction-level adjacency derived from dependencies.
std::vector<std::vector<int>> serialization_graph(const MVSchedule& s);
bool is_conflict_serializable(const MVSchedule& s);

// Per-transaction checks behind allowed_under.
bool concurrent(const MVSchedule& s, int t1, int t2);
bool respects_commit_order(const MVSchedule& s, int txn);
bool read_last_committed_relative_to(const MVSchedule& s, int read_op,
                                     int anchor_op);
bool reads_last_committed(const MVSchedule& s, int txn, bool relative_to_first);
bool exhibits_dirty_write(const MVSchedule& s, int txn);
bool exhibits_concurrent_write(const MVSchedule& s, int txn);

struct DangerousStructure {
  int t1 = -1, t2 = -1, t3 = -1;  // t1 and t3 may coincide
  bool operator==(const DangerousStructure&) const = default;
};
// All dangerous structures in s, regardless of allocation.
std::vector<DangerousStructure> dangerous_structures(const MVSchedule& s);

bool allowed_under(const MVSchedule& s,
                   const std::vector<IsolationLevel>& txn_levels);

// Independent evaluator of the split-schedule existence conditions for a
// sequence, with connectedness decided exactly by SequenceConnectivity.
bool sequence_admits_split_schedule(const Model& m, const Allocation& alloc,
                                    const Sequence& seq,
                                    std::string* reason = nullptr);

struct OracleCheck {
  bool allowed = false;
  bool serializable = true;
  bool ok() const { return allowed && !serializable; }
};

// Builds the canonical split schedule for seq and reports whether it is
// allowed under the canonical allocation and non-conflict-serializable.
OracleCheck verify_sequence(const Model& m, const Allocation& alloc,
                            const Sequence& seq);

struct BoundTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SearchHit {
  Sequence sequence;
};

// Exhaustively enumerates quadruple sequences of length 2..max_quadruples and
// returns the first (shortest, then lexicographically earliest) whose
// canonical split schedule is allowed under alloc and non-serializable.
// Absence of a hit proves nothing beyond the bound.
std::optional<SearchHit> bounded_counterexample_search(
    const Model& m, const Allocation& alloc, int max_quadruples,
    RunMode mode = RunMode::Parallel);

}  // namespace mvrobust
