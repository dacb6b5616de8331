// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Published stabilizer lists for the device states, shared by the unit tests
// and the acceptance runner. Strings follow the qubit order of the matching
// named recipe.

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qg::fixtures {

struct StabilizerList {
  std::string state;
  std::vector<std::string> paulis;
};

// Weighted Pauli polynomials, coefficient times string.
struct PolynomialList {
  std::string state;
  std::vector<std::vector<std::pair<double, std::string>>> operators;
};

inline const std::vector<StabilizerList>& pauli_tables() {
  static const std::vector<StabilizerList> kTables = {
      {"star4",
       {"XZZZ", "IIII", "ZXII", "ZIXI", "ZIIX", "IXXI", "IXIX", "IIXX", "ZXXX", "YYZZ", "YZYZ", "YZZY",
        "-XYYZ", "-XZYY", "-XYZY", "-YYYY"}},
      {"L5",
       {"IZXZI", "XZIII", "IIIZX", "XIXZI", "IZXIX", "XZIZX", "XIXIX", "IIIII", "ZXZII", "IIZXZ",
        "ZXIXZ", "YYZII", "IIZYY", "YYIYY", "ZYYIX", "ZYYZI", "IZYYZ", "XIYYZ", "-YXYZI", "-YXYIX",
        "-IZYXY", "-XIYXY", "ZXZZX", "XZZXZ", "-ZYXYZ", "YYIXZ", "YYZZX", "XZZYY", "ZXIYY", "ZYXXY",
        "YXXYZ", "-YXXXY"}},
      {"L4",
       {"ZXZI", "IIZX", "ZXIX", "IIII", "IZYY", "XIYY", "XZZX", "-ZYXY", "YXXY", "IZXZ", "XZII",
        "XIXZ", "ZYYZ", "YYZI", "YYIX", "-YXYZ"}},
      // Printed as -YZY, which is not in the group; -YXY is the product of all
      // three generators.
      {"L3", {"IZX", "XZI", "XIX", "III", "ZYY", "-YXY", "ZXZ", "YYZ"}},
      {"B7", {"XIZZIII", "IXZZIII", "ZZXIZZZ", "ZZIXZZZ", "IIZZXII", "IIZZIXI", "IIZZIIX"}},
      {"B3", {"XZZ", "ZXI", "ZIX"}},
      {"bisep",
       {"IIXZ", "XZII", "XZXZ", "IIZX", "ZXII", "ZXZX", "YYII", "IIYY", "YYYY", "XZZX", "ZXXZ", "YYXZ",
        "YYZX", "XZYY", "ZXYY"}},
  };
  return kTables;
}

inline const std::vector<StabilizerList>& unsigned_tables() {
  static const std::vector<StabilizerList> kTables = {
      // One entry of the second row has five letters and is left out. About a
      // third of the printed signs disagree with every Z frame of this graph,
      // so only membership up to sign is checked.
      {"crazy6",
       {"XIZZII", "IXZZII", "IIZZXI", "IIZZIX", "XXIIII", "XIIIXI", "XIIIIX", "IXIIXI", "IXIIIX",
        "IIIIXX", "XXZZXI", "XXZZIX", "XIZZXX", "IXZZXX", "XXIIXX", "IIIIII", "-YYXIZZ", "-YYIXZZ",
        "-ZZXIYY", "-ZZIXYY", "ZZIXZZ", "IIXXII", "YYXIYY", "YYIXYY", "XXXXII", "XIXXXI", "XIXXIX",
        "IXXXXI", "IXXXIX", "IIXXXX", "XXXXXX", "XIYYII", "IXYYII", "IIYYXI", "IIYYIX", "XXYYXI",
        "XXYYIX", "XIYYXX", "IXYYXX", "ZZYZZY", "-YYYZZY", "ZZYZYZ", "-YYYZYZ", "ZZZYZY", "YYZYZY",
        "ZZZYYZ", "YYZYYZ", "ZYYZZZ", "ZYYZYY", "ZYZYZZ", "ZYZYYY", "YZYZZZ", "YZYZYY", "YZZYZZ",
        "YZZYYY", "YZXIYZ", "YZIXYZ", "YZXIZY", "YZIXZY", "ZYXIYZ", "ZYIXYZ", "ZYXIZY", "ZYIXZY"}},
  };
  return kTables;
}

inline const std::vector<PolynomialList>& polynomial_tables() {
  static const std::vector<PolynomialList> kTables = {
      {"toffoli",
       {{{0.5, "XII"}, {0.5, "XIZ"}, {0.5, "XZI"}, {-0.5, "XZZ"}},
        {{0.5, "IXI"}, {0.5, "IXZ"}, {0.5, "ZXI"}, {-0.5, "ZXZ"}},
        {{0.5, "IIX"}, {0.5, "IZX"}, {0.5, "ZIX"}, {-0.5, "ZZX"}},
        {{0.5, "XXI"}, {0.5, "XXZ"}, {0.5, "YYI"}, {-0.5, "YYZ"}},
        {{0.5, "XIX"}, {0.5, "XZX"}, {0.5, "YIY"}, {-0.5, "YZY"}},
        {{0.5, "IXX"}, {0.5, "ZXX"}, {0.5, "IYY"}, {-0.5, "ZYY"}},
        {{0.5, "XXX"}, {0.5, "XYY"}, {0.5, "YXY"}, {0.5, "YYX"}},
        {{1.0, "III"}}}},
      // The sixth operator carries corrected signs; the printed one is not a
      // stabilizer of this state.
      {"fc_toffoli",
       {{{-0.5, "XII"}, {0.5, "XIZ"}, {0.5, "XZI"}, {0.5, "XZZ"}},
        {{-0.5, "IXI"}, {0.5, "IXZ"}, {0.5, "ZXI"}, {0.5, "ZXZ"}},
        {{-0.5, "IIX"}, {0.5, "IZX"}, {0.5, "ZIX"}, {0.5, "ZZX"}},
        {{0.5, "XXI"}, {-0.5, "XXZ"}, {0.5, "YYI"}, {0.5, "YYZ"}},
        {{0.5, "XIX"}, {-0.5, "XZX"}, {0.5, "YIY"}, {0.5, "YZY"}},
        {{0.5, "IXX"}, {-0.5, "ZXX"}, {0.5, "IYY"}, {0.5, "ZYY"}},
        {{-0.5, "XXX"}, {-0.5, "XYY"}, {-0.5, "YXY"}, {-0.5, "YYX"}},
        {{1.0, "III"}}}},
  };
  return kTables;
}

// Hand-optimized settings for the five-qubit line, letters in the L5 recipe
// order. An I position may be measured in any basis.
inline const std::vector<std::string>& line5_settings() {
  static const std::vector<std::string> kSettings = {
      "XZXZX", "ZXZXZ", "YYZYY", "ZYYZX", "XZYYZ", "YXYZX", "XZYXY", "ZXZZX", "XZZXZ",
      "ZYXYZ", "YYIXZ", "YYZZX", "XZZYY", "ZXIYY", "ZYXXY", "YXXYZ", "YXXXY"};
  return kSettings;
}

// The swapped bi-separable state, pairs (1-4)(3-2), uses the same list with
// letters 2 and 4 exchanged.
inline std::string swap_pairs(std::string p) {
  const std::size_t off = (p[0] == '-' || p[0] == '+') ? 1 : 0;
  std::swap(p[off + 1], p[off + 3]);
  return p;
}

}  // namespace qg::fixtures
