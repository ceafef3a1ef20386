#include <doctest.h>

#include <random>

#include "mvrobust/conflict.hpp"
#include "support/common.hpp"
#include "support/random_models.hpp"

using namespace mvrobust;
namespace ts = mvrobust::testsupport;

TEST_CASE("potential_conflict on SmallBank operation pairs") {
  Model m = ts::smallbank();
  const auto& bal = m.templates()[ts::kBal].operations;
  const auto& dc = m.templates()[ts::kDC].operations;
  const auto& tsav = m.templates()[ts::kTS].operations;

  // R[Y:Savings{C,B}] vs U[Y:Savings{C,B}{B}] -> rw only
  ConflictKind k = potential_conflict(bal[1], tsav[1]);
  CHECK(k == ConflictKind{false, false, true});

  // U[Z:Checking{C,B}{B}] vs U[Z:Checking{C,B}{B}] -> all three
  k = potential_conflict(dc[1], dc[1]);
  CHECK(k == ConflictKind{true, true, true});

  // R[X:Account] vs U[Y:Savings] -> different relation types, nothing
  k = potential_conflict(bal[0], tsav[1]);
  CHECK_FALSE(k.any());
}

TEST_CASE("all_quadruples equals an independent double loop") {
  Model m = ts::smallbank();
  auto quads = all_quadruples(m);

  // brute force over all ordered operation pairs
  std::vector<Quadruple> expected;
  for (int ti = 0; ti < (int)m.templates().size(); ++ti)
    for (int oi = 0; oi < (int)m.templates()[ti].operations.size(); ++oi)
      for (int tj = 0; tj < (int)m.templates().size(); ++tj)
        for (int pj = 0; pj < (int)m.templates()[tj].operations.size(); ++pj) {
          const auto& a = m.templates()[ti].operations[oi];
          const auto& b = m.templates()[tj].operations[pj];
          bool conflict =
              a.relation == b.relation &&
              ((a.write_set & b.write_set) || (a.write_set & b.read_set) ||
               (a.read_set & b.write_set));
          if (conflict) expected.push_back({ti, oi, pj, tj});
        }
  CHECK(quads == expected);

  // the Balance -> TransactSavings rw pair on Savings.Balance is present
  Quadruple probe{ts::kBal, 1, 1, ts::kTS};
  CHECK(std::find(quads.begin(), quads.end(), probe) != quads.end());
}

TEST_CASE("all_quadruples corner cases") {
  Model reads_only = parse_model(
      "relation T(a, b)\ntemplate One { R X:T {a}\n R Y:T {b} }\n");
  CHECK(all_quadruples(reads_only).empty());

  Model self = parse_model("relation T(a)\ntemplate One { U X:T {a} {a} }\n");
  auto quads = all_quadruples(self);
  REQUIRE(quads.size() == 1);
  CHECK(quads[0] == Quadruple{0, 0, 0, 0});
  ConflictKind k = potential_conflict(self.templates()[0].operations[0],
                                      self.templates()[0].operations[0]);
  CHECK(k == ConflictKind{true, true, true});
}

TEST_CASE("ww symmetry and wr/rw duality over random operation pairs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    Model m = ts::random_model(rng);
    for (int a = 0; a < m.op_count(); ++a)
      for (int b = 0; b < m.op_count(); ++b) {
        ConflictKind ab = potential_conflict(m.op(a), m.op(b));
        ConflictKind ba = potential_conflict(m.op(b), m.op(a));
        CHECK(ab.ww == ba.ww);
        CHECK(ab.wr == ba.rw);
        CHECK(ab.rw == ba.wr);
      }
  }
}

TEST_CASE("connectedness: quadruple endpoints and closure") {
  Model m = ts::smallbank();
  Sequence c1 = ts::smallbank_c1();
  REQUIRE(sequence_well_formed(m, c1));
  SequenceConnectivity conn(m, c1);

  int y_bal = m.templates()[ts::kBal].variable_index("Y");
  int z_bal = m.templates()[ts::kBal].variable_index("Z");
  int x_bal = m.templates()[ts::kBal].variable_index("X");
  int y_ts = m.templates()[ts::kTS].variable_index("Y");
  int y_wc = m.templates()[ts::kWC].variable_index("Y");
  int z_wc = m.templates()[ts::kWC].variable_index("Z");

  // between templates: Balance.Y ~ TransactSavings.Y via the first quadruple
  CHECK(conn.connected({1, y_bal}, {2, y_ts}));
  // transitivity: Balance.Y ~ WriteCheck.Y via the second quadruple
  CHECK(conn.connected({1, y_bal}, {3, y_wc}));
  // Balance.Z ~ WriteCheck.Z via the closing quadruple
  CHECK(conn.connected({1, z_bal}, {3, z_wc}));
  // nothing links the Savings chain to the Checking chain
  CHECK_FALSE(conn.connected({1, y_bal}, {1, z_bal}));
  CHECK_FALSE(conn.connected({1, x_bal}, {2, y_ts}));

  CHECK(variables_connected_in_sequence(m, c1, {2, y_ts}, {3, y_wc}));
  CHECK_THROWS_AS(conn.connected({4, 0}, {1, 0}), OccurrenceNotInSequence);
  CHECK_THROWS_AS(conn.connected({1, 9}, {1, 0}), OccurrenceNotInSequence);
}

TEST_CASE("connectedness is an equivalence relation on random sequences") {
  std::mt19937_64 rng(13);
  int tried = 0;
  while (tried < 40) {
    Model m = ts::random_model(rng);
    auto quads = all_quadruples(m);
    if (quads.empty()) continue;
    // random chained sequence of length 2..4
    int n = 2 + (int)(rng() % 3);
    Sequence seq;
    int attempts = 0;
    while ((int)seq.quads.size() < n && attempts++ < 200) {
      if (seq.quads.empty()) {
        seq.quads.push_back(quads[rng() % quads.size()]);
        continue;
      }
      std::vector<Quadruple> next;
      for (const auto& q : quads)
        if (q.from_template == seq.quads.back().to_template)
          next.push_back(q);
      if (next.empty()) {
        seq.quads.clear();
        continue;
      }
      seq.quads.push_back(next[rng() % next.size()]);
    }
    if ((int)seq.quads.size() != n ||
        seq.quads.back().to_template != seq.quads.front().from_template)
      continue;
    ++tried;

    SequenceConnectivity conn(m, seq);
    // reflexive, symmetric, transitive by construction of find(); sample it
    for (int occ = 1; occ <= n; ++occ) {
      const auto& vars =
          m.templates()[seq.occurrence_template(occ)].variables;
      for (int v = 0; v < (int)vars.size(); ++v)
        CHECK(conn.connected({occ, v}, {occ, v}));
    }
    for (int i = 0; i < 20; ++i) {
      int occ_a = 1 + (int)(rng() % n), occ_b = 1 + (int)(rng() % n),
          occ_c = 1 + (int)(rng() % n);
      auto vars_in = [&](int occ) {
        return (int)m.templates()[seq.occurrence_template(occ)]
            .variables.size();
      };
      OccVar a{occ_a, (int)(rng() % vars_in(occ_a))};
      OccVar b{occ_b, (int)(rng() % vars_in(occ_b))};
      OccVar c{occ_c, (int)(rng() % vars_in(occ_c))};
      CHECK(conn.connected(a, b) == conn.connected(b, a));
      if (conn.connected(a, b) && conn.connected(b, c))
        CHECK(conn.connected(a, c));
    }
  }
}
