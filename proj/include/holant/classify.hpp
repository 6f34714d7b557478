#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "holant/signature.hpp"

namespace holant {

enum class TernaryTag { Degenerate, GHZ, W };
const char* tag_name(TernaryTag t);

struct TernaryClass {
  TernaryTag tag;
  std::optional<Mat2> witness;  // f = M o EQ3 (GHZ) or f = M o ONE3 (W)
};

// entries [f0, f1, f2, f3]
TernaryClass classify_symmetric_ternary(const std::vector<Scalar>& entries);
TernaryClass classify_ternary(const Signature& f);
// Cayley 2x2x2 hyperdeterminant of a ternary table.
Scalar hyperdeterminant(const Signature& f);

struct Rank2Split {
  std::array<Scalar, 2> c0, c1;
  Scalar alpha, beta;
  std::vector<int> pattern;  // a, with a[0] = 0
  bool approximate = false;
};

// h = alpha * (x)_j c_{a_j} + beta * (x)_j c_{1-a_j}, if such a split exists.
std::optional<Rank2Split> recover_rank2(const Signature& h);

enum class OEStatus { Holds, Fails, Undetermined };
enum class Verdict { NotUniversal, Universal, UniversalModuloNumerics };

struct DichotomyReport {
  bool cond_T = false;
  OEStatus cond_OE = OEStatus::Undetermined;
  std::optional<Mat2> oe_witness;
  bool cond_KE = false;
  std::vector<std::string> cond_KM;  // subset of {"K1", "K2"}
  Verdict verdict = Verdict::Universal;
  std::vector<std::string> reasons;
  bool approximate = false;
};

DichotomyReport classify_set(const std::vector<Signature>& F);
const char* verdict_name(Verdict v);
const char* oe_name(OEStatus s);

}  // namespace holant
