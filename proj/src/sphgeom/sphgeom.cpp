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

#include "raqm/sphgeom.hpp"

#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace raqm::sphgeom {

using exactmath::niven_classify;
using hp::BigFloat;

namespace {

const Rational kOne(1);

bool in_unit_interval(const Rational& c) { return c.abs() <= kOne; }

Rational one_minus_square(const Rational& c) { return kOne - c * c; }

std::string short_decimal(const BigFloat& x) { return hp::to_decimal(x, 30); }

}  // namespace

void TriangleSpec::validate() const {
  if (!in_unit_interval(cos_xy) || !in_unit_interval(cos_yz)) {
    throw std::domain_error("triangle cosines must lie in [-1, 1]");
  }
}

ExactCosExpression cos_rule_eval(const TriangleSpec& spec) {
  spec.validate();
  ExactCosExpression out;
  out.rational_part = spec.cos_xy * spec.cos_yz;
  out.radicand = one_minus_square(spec.cos_xy) * one_minus_square(spec.cos_yz);
  out.angle = spec.vertex;

  const auto cos_phi = niven_classify(spec.vertex);
  if (out.radicand.is_zero()) {
    out.exact = out.rational_part;
  } else if (cos_phi.is_rational()) {
    if (cos_phi.value->is_zero()) {
      out.exact = out.rational_part;
    } else if (auto root = out.radicand.exact_sqrt()) {
      out.exact = out.rational_part + *root * *cos_phi.value;
    }
  }

  if (out.exact) {
    out.value = hp::to_big(*out.exact);
  } else {
    out.value = hp::to_big(out.rational_part) + sqrt(hp::to_big(out.radicand)) * hp::cos_turns(spec.vertex);
  }
  return out;
}

std::string_view to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::ForcedIrrational: return "ForcedIrrational";
    case Verdict::Kind::ExceptionalVertexAngle: return "ExceptionalVertexAngle";
    case Verdict::Kind::Degenerate: return "Degenerate";
    case Verdict::Kind::RationalValue: return "RationalValue";
    case Verdict::Kind::NoVerdict: return "NoVerdict";
  }
  return "?";
}

bool is_exceptional(const RationalAngle& nu) { return niven_classify(nu.scaled(2)).is_rational(); }

TriangleCertificate certify_triangle(const TriangleSpec& spec) {
  TriangleCertificate cert;
  cert.expression = cos_rule_eval(spec);
  auto& trace = cert.trace;
  trace.push_back(fmt::format("cosine rule at Y: cos(XZ) = {} + sqrt({}) * cos(2pi * {})",
                              cert.expression.rational_part.to_string(), cert.expression.radicand.to_string(),
                              spec.vertex.turns().to_string()));

  if (spec.cos_xy.abs() == kOne || spec.cos_yz.abs() == kOne || cert.expression.radicand.is_zero()) {
    trace.push_back("a side has cosine +-1: the triangle collapses, nothing to certify");
    cert.verdict = Verdict::degenerate();
    return cert;
  }

  const RationalAngle doubled = spec.vertex.scaled(2);
  if (const auto c2 = niven_classify(doubled); c2.is_rational()) {
    trace.push_back(fmt::format("cos(2 phi_Y) = cos(2pi * {}) = {} is rational: the contradiction step is unavailable",
                                doubled.turns().to_string(), c2.value->to_string()));
    if (cert.expression.exact) {
      trace.push_back(fmt::format("for reference, cos(XZ) evaluates exactly to {}", cert.expression.exact->to_string()));
    }
    cert.verdict = Verdict::exceptional();
    return cert;
  }

  trace.push_back("assume cos(XZ) rational; then sin(XY) sin(YZ) cos(phi_Y) = cos(XZ) - cos(XY) cos(YZ) is rational");
  trace.push_back(fmt::format("squaring: {} * cos^2(phi_Y) is rational, and the factor is a nonzero rational",
                              cert.expression.radicand.to_string()));
  trace.push_back("so cos^2(phi_Y) is rational, hence cos(2 phi_Y) = 2 cos^2(phi_Y) - 1 is rational");
  trace.push_back(fmt::format("but 2 phi_Y = {} is a rational angle outside the Niven set: cos(2 phi_Y) is irrational",
                              doubled.to_string()));
  trace.push_back("contradiction: cos(XZ) is irrational");
  cert.verdict = Verdict::forced_irrational();
  return cert;
}

Verdict impossible_triangle(const TriangleSpec& spec) {
  spec.validate();
  const Rational radicand = one_minus_square(spec.cos_xy) * one_minus_square(spec.cos_yz);
  if (spec.cos_xy.abs() == kOne || spec.cos_yz.abs() == kOne || radicand.is_zero()) return Verdict::degenerate();
  if (is_exceptional(spec.vertex)) return Verdict::exceptional();
  return Verdict::forced_irrational();
}

bool gram_feasible(const Rational& c12, const Rational& c13, const Rational& c23) {
  if (!in_unit_interval(c12) || !in_unit_interval(c13) || !in_unit_interval(c23)) return false;
  const Rational det = kOne + Rational(2) * c12 * c13 * c23 - c12 * c12 - c13 * c13 - c23 * c23;
  return det.sign() >= 0;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Edge e) {
  switch (e) {
    case Edge::X0Y0: return "X0Y0";
    case Edge::X0Y1: return "X0Y1";
    case Edge::X1Y0: return "X1Y0";
    case Edge::X1Y1: return "X1Y1";
  }
  return "?";
}

Edge parse_edge(std::string_view name) {
  for (Edge e : kAllEdges) {
    if (to_string(e) == name) return e;
  }
  throw std::invalid_argument("unknown edge '" + std::string(name) + "'");
}

std::optional<Rational> QuadSpec::cos(Edge e) const {
  switch (e) {
    case Edge::X0Y0: return cos_x0y0;
    case Edge::X0Y1: return cos_x0y1;
    case Edge::X1Y0: return cos_x1y0;
    case Edge::X1Y1: return cos_x1y1;
  }
  return std::nullopt;
}

void QuadSpec::set_cos(Edge e, std::optional<Rational> value) {
  switch (e) {
    case Edge::X0Y0:
      if (!value) throw std::invalid_argument("cos(X0Y0) is mandatory");
      cos_x0y0 = *value;
      break;
    case Edge::X0Y1: cos_x0y1 = std::move(value); break;
    case Edge::X1Y0: cos_x1y0 = std::move(value); break;
    case Edge::X1Y1: cos_x1y1 = std::move(value); break;
  }
}

namespace {

// Relabelling X0 <-> X1 and/or Y0 <-> Y1.
struct Relabel {
  bool swap_x = false;
  bool swap_y = false;

  Edge apply(Edge e) const {
    int xi = (e == Edge::X1Y0 || e == Edge::X1Y1) ? 1 : 0;
    int yi = (e == Edge::X0Y1 || e == Edge::X1Y1) ? 1 : 0;
    if (swap_x) xi = 1 - xi;
    if (swap_y) yi = 1 - yi;
    static constexpr Edge kTable[2][2] = {{Edge::X0Y0, Edge::X0Y1}, {Edge::X1Y0, Edge::X1Y1}};
    return kTable[xi][yi];
  }

  QuadSpec apply(const QuadSpec& q) const {
    QuadSpec out = q;
    for (Edge e : kAllEdges) {
      if (e == Edge::X0Y0) continue;
      out.set_cos(e, std::nullopt);
    }
    for (Edge e : kAllEdges) out.set_cos(apply(e), q.cos(e));
    if (swap_x) std::swap(out.alpha, out.beta);
    if (swap_y) std::swap(out.gamma, out.delta);
    return out;
  }
};

struct Hypothesis {
  Rational c00, c01, c10, c11;
};

// sin(a) sin(b) cos(phi1) - sin(c) sin(d) cos(phi2) for the shared side of
// two triangles; rational if every cross edge were rational.
BigFloat side_difference(const Rational& a, const Rational& b, const RationalAngle& phi1, const Rational& c,
                         const Rational& d, const RationalAngle& phi2) {
  const BigFloat left = sqrt(hp::to_big(one_minus_square(a) * one_minus_square(b))) * hp::cos_turns(phi1);
  const BigFloat right = sqrt(hp::to_big(one_minus_square(c) * one_minus_square(d))) * hp::cos_turns(phi2);
  return left - right;
}

EdgeVerdict certify_single_flip(Edge edge, const char* shared_side, const char* tri1, const char* tri2,
                                const char* angle1_name, const RationalAngle& angle1, const char* angle2_name,
                                const RationalAngle& angle2, const Rational& a, const Rational& b,
                                const Rational& c, const Rational& d, std::vector<std::string>& trace) {
  const std::string name(to_string(edge));
  trace.push_back(fmt::format(
      "{}: side {} appears in triangles {} (angle {}) and {} (angle {}); if every cross edge were rational, the two "
      "cosine-rule expressions for {} agree and their irrational parts differ by a rational A",
      name, shared_side, tri1, angle1_name, tri2, angle2_name, shared_side));
  const Rational r1 = one_minus_square(a) * one_minus_square(b);
  const Rational r2 = one_minus_square(c) * one_minus_square(d);
  trace.push_back(fmt::format("{}: A1^2 = {}/2 * (1 + cos 2{}), A2^2 = {}/2 * (1 + cos 2{}); cos 2{} and cos 2{} are "
                              "irrational (Niven), so each nonzero term is irrational",
                              name, r1.to_string(), angle1_name, r2.to_string(), angle2_name, angle1_name,
                              angle2_name));

  EdgeVerdict out;
  out.edge = edge;
  const BigFloat diff = side_difference(a, b, angle1, c, d, angle2);
  out.numeric_value = diff;
  if (auto close = hp::close_rational(diff)) {
    trace.push_back(fmt::format("{}: A = {}... lies within 1e-150 of {}; evidence inconclusive, no verdict", name,
                                short_decimal(diff), close->to_string()));
    out.verdict = Verdict::none();
  } else {
    trace.push_back(fmt::format("{}: A = {}... has no rational p/q with q <= 1e6 within 1e-150; contradiction, so {} "
                                "cannot be rational",
                                name, short_decimal(diff), name));
    out.verdict = Verdict::forced_irrational();
  }
  return out;
}

ChshCertificate certify_canonical(const QuadSpec& q) {
  ChshCertificate cert;
  for (Edge e : kAllEdges) cert.edges[static_cast<std::size_t>(e)].edge = e;
  auto& trace = cert.trace;

  for (Edge e : kAllEdges) {
    if (auto c = q.cos(e); c && !in_unit_interval(*c)) throw std::domain_error("edge cosines must lie in [-1, 1]");
  }
  for (const auto& c : {q.cos_x0x1, q.cos_y0y1}) {
    if (c && !in_unit_interval(*c)) throw std::domain_error("side cosines must lie in [-1, 1]");
  }

  const Hypothesis h{q.cos_x0y0, q.cos_x0y1.value_or(q.cos_x0y0), q.cos_x1y0.value_or(q.cos_x0y0),
                     q.cos_x1y1.value_or(q.cos_x0y0)};

  // Embeddability of every triangle whose three cosines are all declared.
  auto check = [&](const std::optional<Rational>& side, const std::optional<Rational>& e1,
                   const std::optional<Rational>& e2, const char* label) {
    if (side && e1 && e2 && !gram_feasible(*side, *e1, *e2)) {
      throw std::domain_error(fmt::format("triangle {} cannot be embedded on the unit sphere", label));
    }
  };
  const std::optional<Rational> c00 = q.cos_x0y0;
  check(q.cos_x0x1, c00, q.cos_x1y0, "X0X1Y0");
  check(q.cos_x0x1, q.cos_x0y1, q.cos_x1y1, "X0X1Y1");
  check(q.cos_y0y1, c00, q.cos_x0y1, "Y0Y1X0");
  check(q.cos_y0y1, q.cos_x1y0, q.cos_x1y1, "Y0Y1X1");

  auto fill_all = [&](const Verdict& v) {
    for (auto& ev : cert.edges) ev.verdict = v;
  };

  trace.push_back(fmt::format("realised edge X0Y0: cos = {}", q.cos_x0y0.to_string()));
  if (q.cos_x0y0.abs() == kOne || (q.cos_x0x1 && *q.cos_x0x1 == kOne) || (q.cos_y0y1 && *q.cos_y0y1 == kOne)) {
    trace.push_back("coincident or antipodal points: the four-point configuration is degenerate");
    fill_all(Verdict::degenerate());
    return cert;
  }

  const std::array<std::pair<const char*, const RationalAngle*>, 4> angles = {
      {{"alpha", &q.alpha}, {"beta", &q.beta}, {"gamma", &q.gamma}, {"delta", &q.delta}}};
  for (const auto& [label, angle] : angles) {
    if (is_exceptional(*angle)) {
      trace.push_back(fmt::format("vertex angle {} = {} is a multiple of 30 or 45 degrees; no certificate", label,
                                  angle->to_string()));
      fill_all(Verdict::exceptional());
      return cert;
    }
  }
  trace.push_back(fmt::format("vertex angles alpha={}, beta={}, gamma={}, delta={}: all doubled angles non-Niven",
                              q.alpha.to_string(), q.beta.to_string(), q.gamma.to_string(), q.delta.to_string()));
  trace.push_back(fmt::format("hypothesis: cos X0Y1 = {}, cos X1Y0 = {}, cos X1Y1 = {} (rational)", h.c01.to_string(),
                              h.c10.to_string(), h.c11.to_string()));

  auto& realized = cert.edges[static_cast<std::size_t>(Edge::X0Y0)];
  realized.verdict = Verdict::rational(q.cos_x0y0);
  realized.numeric_value = hp::to_big(q.cos_x0y0);

  cert.edges[static_cast<std::size_t>(Edge::X1Y0)] =
      certify_single_flip(Edge::X1Y0, "X0X1", "X0X1Y0", "X0X1Y1", "gamma", q.gamma, "delta", q.delta, h.c00, h.c10,
                          h.c11, h.c01, trace);
  cert.edges[static_cast<std::size_t>(Edge::X0Y1)] =
      certify_single_flip(Edge::X0Y1, "Y0Y1", "Y0Y1X0", "Y0Y1X1", "alpha", q.alpha, "beta", q.beta, h.c00, h.c01,
                          h.c10, h.c11, trace);

  cert.edges[static_cast<std::size_t>(Edge::X1Y1)].verdict = Verdict::none();
  trace.push_back("X1Y1: flipping both settings is unconstrained; no verdict");
  return cert;
}

}  // namespace

ChshCertificate chsh_certify(const QuadSpec& quad, Edge realized) {
  if (!quad.cos(realized)) throw std::invalid_argument("the realised edge must carry a rational cosine");
  const Relabel relabel{realized == Edge::X1Y0 || realized == Edge::X1Y1,
                        realized == Edge::X0Y1 || realized == Edge::X1Y1};
  if (!relabel.swap_x && !relabel.swap_y) return certify_canonical(quad);

  // Move the realised edge to X0Y0, certify, then map labels back.
  QuadSpec canonical = relabel.apply(quad);
  canonical.cos_x0y0 = *quad.cos(realized);
  ChshCertificate inner = certify_canonical(canonical);
  ChshCertificate out;
  out.realized = realized;
  out.trace = std::move(inner.trace);
  out.trace.insert(out.trace.begin(), fmt::format("relabelled so that realised edge {} plays the role of X0Y0",
                                                  to_string(realized)));
  for (Edge e : kAllEdges) {
    EdgeVerdict ev = inner.at(e);
    ev.edge = relabel.apply(e);
    out.edges[static_cast<std::size_t>(ev.edge)] = std::move(ev);
  }
  return out;
}

}  // namespace raqm::sphgeom
