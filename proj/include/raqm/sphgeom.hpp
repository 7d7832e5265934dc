// Copyright 2026 The raqm-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exact spherical trigonometry for the two irrationality certificates:
// the single-triangle one (two rational sides plus a rational,
// non-exceptional vertex angle force the third side's cosine to be
// irrational) and the four-point CHSH construction built from it.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "raqm/exactmath.hpp"
#include "raqm/hpfloat.hpp"

namespace raqm::sphgeom {

using exactmath::Rational;
using exactmath::RationalAngle;

/// Triangle XYZ on the unit sphere given by cos(XY), cos(YZ) and the
/// internal angle at Y.
struct TriangleSpec {
  Rational cos_xy;
  Rational cos_yz;
  RationalAngle vertex;

  /// Throws std::domain_error when a cosine is outside [-1, 1].
  void validate() const;
};

/// cos(XZ) = rational_part + sqrt(radicand) * cos(2 pi angle).
struct ExactCosExpression {
  Rational rational_part;
  Rational radicand;
  RationalAngle angle;
  hp::BigFloat value;
  std::optional<Rational> exact;  // set when every factor is rational
};

ExactCosExpression cos_rule_eval(const TriangleSpec& spec);

struct Verdict {
  enum class Kind { ForcedIrrational, ExceptionalVertexAngle, Degenerate, RationalValue, NoVerdict };

  Kind kind = Kind::NoVerdict;
  std::optional<Rational> witness;  // only for RationalValue

  static Verdict forced_irrational() { return {Kind::ForcedIrrational, std::nullopt}; }
  static Verdict exceptional() { return {Kind::ExceptionalVertexAngle, std::nullopt}; }
  static Verdict degenerate() { return {Kind::Degenerate, std::nullopt}; }
  static Verdict rational(Rational r) { return {Kind::RationalValue, std::move(r)}; }
  static Verdict none() { return {Kind::NoVerdict, std::nullopt}; }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::string_view to_string(Verdict::Kind kind);

/// True when cos(2 * nu) is rational, i.e. nu is a multiple of 30 or 45
/// degrees. The triangle argument needs cos(2 phi) irrational, so these
/// angles cannot be certified.
bool is_exceptional(const RationalAngle& nu);

Verdict impossible_triangle(const TriangleSpec& spec);

struct TriangleCertificate {
  Verdict verdict;
  ExactCosExpression expression;
  std::vector<std::string> trace;
};

TriangleCertificate certify_triangle(const TriangleSpec& spec);

/// Positive semidefiniteness of the Gram matrix of three unit vectors with
/// the given pairwise cosines, i.e. whether they can sit on the sphere.
bool gram_feasible(const Rational& c12, const Rational& c13, const Rational& c23);

// --- CHSH four-point configuration ----------------------------------------

enum class Edge { X0Y0, X0Y1, X1Y0, X1Y1 };
inline constexpr std::array<Edge, 4> kAllEdges = {Edge::X0Y0, Edge::X0Y1, Edge::X1Y0, Edge::X1Y1};
std::string_view to_string(Edge e);
Edge parse_edge(std::string_view name);

/// Alice points X0, X1; Bob points Y0, Y1. Vertex angles:
///   alpha at X0 in triangle Y0 Y1 X0,   beta  at X1 in triangle Y0 Y1 X1,
///   gamma at Y0 in triangle X0 X1 Y0,   delta at Y1 in triangle X0 X1 Y1.
/// Undeclared cross-edge cosines are taken equal to cos(X0Y0) when the
/// contradiction hypothesis needs a concrete rational value for them.
struct QuadSpec {
  Rational cos_x0y0;
  std::optional<Rational> cos_x0y1;
  std::optional<Rational> cos_x1y0;
  std::optional<Rational> cos_x1y1;
  std::optional<Rational> cos_x0x1;
  std::optional<Rational> cos_y0y1;
  RationalAngle alpha, beta, gamma, delta;

  std::optional<Rational> cos(Edge e) const;
  void set_cos(Edge e, std::optional<Rational> value);
};

struct EdgeVerdict {
  Edge edge = Edge::X0Y0;
  Verdict verdict;
  /// Realised edge: its cosine. Forced edges: the quantity whose
  /// irrationality carried the argument. Empty when nothing was evaluated.
  std::optional<hp::BigFloat> numeric_value;
};

struct ChshCertificate {
  Edge realized = Edge::X0Y0;
  std::array<EdgeVerdict, 4> edges;  // indexed like kAllEdges
  std::vector<std::string> trace;

  const EdgeVerdict& at(Edge e) const { return edges[static_cast<std::size_t>(e)]; }
};

/// Given a rational cosine on `realized`, decides which of the remaining
/// edges cannot also be rational. Single-flip edges are ForcedIrrational
/// when the difference of the two cosine-rule expressions for the shared
/// side shows no rational approximation at 200 digits; the opposite edge
/// is never forced. Throws std::domain_error for an infeasible geometry.
ChshCertificate chsh_certify(const QuadSpec& quad, Edge realized = Edge::X0Y0);

}  // namespace raqm::sphgeom
