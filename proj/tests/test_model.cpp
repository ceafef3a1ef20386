#include <doctest.h>

#include <random>

#include "mvrobust/dsl.hpp"
#include "support/common.hpp"
#include "support/random_models.hpp"

using namespace mvrobust;
namespace ts = mvrobust::testsupport;

TEST_CASE("smallbank parses to five templates with seventeen operations") {
  Model m = ts::smallbank();
  REQUIRE(m.templates().size() == 5);
  CHECK(m.op_count() == 17);
  CHECK(m.templates()[ts::kBal].name == "Balance");
  CHECK(m.templates()[ts::kWC].name == "WriteCheck");
  CHECK(m.schema().relations[0].workload_read_only);
  CHECK_FALSE(m.schema().relations[1].workload_read_only);

  const Relation& savings = m.schema().relations[1];
  CHECK(savings.attr_index("CustomerId") == 0);
  CHECK(savings.read_only == 1);  // CustomerId is the key

  const Template& wc = m.templates()[ts::kWC];
  REQUIRE(wc.operations.size() == 4);
  CHECK(wc.operations[3].kind == OpKind::Update);
  // WriteCheck's read and update of Checking share the variable Z
  CHECK(wc.operations[2].variable == wc.operations[3].variable);

  CHECK(m.templates()[ts::kBal].short_name() == "Bal");
  CHECK(m.templates()[ts::kDC].short_name() == "DC");
  CHECK(m.templates()[ts::kWC].short_name() == "WC");
}

TEST_CASE("parsing the same text twice yields structurally equal models") {
  std::string text = "relation T(k readonly, a, b)\n"
                     "template One { U X:T {k, a} {b} }\n"
                     "template Two { R X:T {a} \n W Y:T {a, b} }\n";
  Model a = parse_model(text);
  Model b = parse_model(text);
  CHECK(a == b);
  // validation is idempotent
  Model c = Model::validate(a.schema(), a.templates());
  CHECK(a == c);
}

TEST_CASE("empty template set is a valid model") {
  Model m = parse_model("relation T(a)\n");
  CHECK(m.templates().empty());
  CHECK(m.op_count() == 0);
}

TEST_CASE("update operations may have disjoint read and write sets") {
  Model m = parse_model("relation T(a, b)\ntemplate One { U X:T {a} {b} }\n");
  const auto& op = m.templates()[0].operations[0];
  CHECK(op.read_set == 1);
  CHECK(op.write_set == 2);
}

TEST_CASE("validation rejects writes to read-only attributes") {
  std::string text = "relation Savings(C readonly, B)\n"
                     "template Bad { U Y:Savings {C, B} {C} }\n";
  try {
    parse_model(text);
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    CHECK(e.code == "WriteToReadOnlyAttribute");
  }
}

TEST_CASE("validation rejects duplicate names") {
  try {
    parse_model("relation T(a)\nrelation T(b)\n");
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    CHECK(e.code == "DuplicateName");
  }
  try {
    parse_model("relation T(a)\ntemplate X { R V:T {a} }\n"
                "template X { R V:T {a} }\n");
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    CHECK(e.code == "DuplicateName");
  }
}

TEST_CASE("validation rejects unknown relations and foreign attributes") {
  CHECK_THROWS_AS(parse_model("template X { R V:T {a} }\n"), ParseError);
  CHECK_THROWS_AS(parse_model("relation T(a)\ntemplate X { R V:T {zz} }\n"),
                  ParseError);
  // programmatic path: variable bound to a relation index out of range
  Template t;
  t.name = "X";
  t.variables.push_back({"V", 3});
  try {
    Model::validate(Schema{{Relation{"T", {"a"}, 0, false}}}, {t});
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    CHECK(e.code == "UnknownRelation");
  }
}

TEST_CASE("validation rejects a variable used at two relation types") {
  CHECK_THROWS_AS(
      parse_model("relation A(a)\nrelation B(b)\n"
                  "template X { R V:A {a}\n R V:B {b} }\n"),
      ParseError);
}

TEST_CASE("allocation order: examples") {
  Allocation rc5({IsolationLevel::RC, IsolationLevel::RC, IsolationLevel::RC,
                  IsolationLevel::RC, IsolationLevel::RC});
  Allocation mixed({IsolationLevel::SI, IsolationLevel::RC, IsolationLevel::RC,
                    IsolationLevel::RC, IsolationLevel::RC});
  CHECK(allocation_leq(rc5, mixed));
  CHECK(allocation_lt(rc5, mixed));
  CHECK(allocation_leq(rc5, rc5));
  CHECK_FALSE(allocation_lt(rc5, rc5));

  Allocation a({IsolationLevel::SI, IsolationLevel::RC});
  Allocation b({IsolationLevel::RC, IsolationLevel::SI});
  CHECK_FALSE(allocation_leq(a, b));
  CHECK_FALSE(allocation_leq(b, a));

  Allocation short_one({IsolationLevel::RC});
  CHECK_THROWS_AS((void)allocation_leq(a, short_one), DomainMismatch);
}

TEST_CASE("allocation order is a partial order on random allocations") {
  std::mt19937_64 rng(7);
  Model m = ts::smallbank();
  for (int i = 0; i < 200; ++i) {
    Allocation a = ts::random_allocation(rng, m);
    Allocation b = ts::random_allocation(rng, m);
    Allocation c = ts::random_allocation(rng, m);
    CHECK(allocation_leq(a, a));
    if (allocation_leq(a, b) && allocation_leq(b, a)) CHECK(a == b);
    if (allocation_leq(a, b) && allocation_leq(b, c))
      CHECK(allocation_leq(a, c));
  }
}

TEST_CASE("allocation parsing defaults missing templates to SSI") {
  Model m = ts::smallbank();
  Allocation a = parse_allocation(m, "DepositChecking=RC, Balance=SI");
  CHECK(a[ts::kBal] == IsolationLevel::SI);
  CHECK(a[ts::kDC] == IsolationLevel::RC);
  CHECK(a[ts::kTS] == IsolationLevel::SSI);
  CHECK(a[ts::kAm] == IsolationLevel::SSI);
  CHECK(a[ts::kWC] == IsolationLevel::SSI);

  CHECK_THROWS_AS(parse_allocation(m, "Nope=RC"), ParseError);
  CHECK_THROWS_AS(parse_allocation(m, "Balance=XX"), ParseError);
  CHECK_THROWS_AS(parse_allocation(m, "Balance"), ParseError);
  CHECK_THROWS_AS(parse_allocation(m, "Balance=RC,Balance=SI"), ParseError);
}
