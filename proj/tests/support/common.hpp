#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "mvrobust/conflict.hpp"
#include "mvrobust/dsl.hpp"

namespace mvrobust::testsupport {

inline Model smallbank() {
  return load_model_file(std::string(MVROBUST_RESOURCE_DIR) +
                         "/smallbank.tdsl");
}

inline nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(std::string(MVROBUST_FIXTURE_DIR) + "/" + name);
  nlohmann::json j;
  in >> j;
  return j;
}

// SmallBank template indices in declaration order.
inline constexpr int kBal = 0;
inline constexpr int kDC = 1;
inline constexpr int kTS = 2;
inline constexpr int kAm = 3;
inline constexpr int kWC = 4;

// The worked three-quadruple sequence over Balance, TransactSavings and
// WriteCheck: Balance's Savings read into TransactSavings' update, that
// update into WriteCheck's Savings read, WriteCheck's Checking update into
// Balance's Checking read.
inline Sequence smallbank_c1() {
  Sequence seq;
  seq.quads = {{kBal, 1, 1, kTS}, {kTS, 1, 1, kWC}, {kWC, 3, 2, kBal}};
  return seq;
}

inline Allocation smallbank_alloc(const Model& m, IsolationLevel bal,
                                  IsolationLevel dc, IsolationLevel ts,
                                  IsolationLevel am, IsolationLevel wc) {
  (void)m;
  return Allocation({bal, dc, ts, am, wc});
}

}  // namespace mvrobust::testsupport
