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

#include <gtest/gtest.h>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "raqm/sphgeom.hpp"

namespace {

using namespace raqm::sphgeom;
using raqm::exactmath::Rational;
using raqm::exactmath::RationalAngle;
using raqm::testing::for_all;
using raqm::testing::Gen;
using raqm::testing::Mp;

using raqm::testing::to_mp;

Mp dot_xz_by_vectors(const TriangleSpec& t) {
  return raqm::testing::dot_xz_by_vectors(to_mp(t.cos_xy), to_mp(t.cos_yz), to_mp(t.vertex.turns()));
}

TEST(CosineRule, MatchesExplicitVectorConstruction) {
  for_all(300, 21, [](Gen& g, int i) {
    const TriangleSpec t{g.open_unit_rational(), g.open_unit_rational(),
                         i % 5 == 0 ? g.exceptional_angle() : g.non_exceptional_angle()};
    const auto e = cos_rule_eval(t);
    const Mp diff = boost::multiprecision::abs(Mp(e.value) - dot_xz_by_vectors(t));
    EXPECT_LT(diff, Mp(1e-190));
  });
}

TEST(CosineRule, ExactWhenEveryFactorIsRational) {
  const auto e = cos_rule_eval({Rational::parse("3/5"), Rational::parse("4/5"), RationalAngle(1, 4)});
  ASSERT_TRUE(e.exact.has_value());
  EXPECT_EQ(*e.exact, Rational::parse("12/25"));
  const auto f = cos_rule_eval({Rational::parse("3/5"), Rational::parse("4/5"), RationalAngle(1, 2)});
  EXPECT_EQ(*f.exact, Rational::parse("12/25") - Rational::parse("12/25"));
}

TEST(ImpossibleTriangle, WorkedExampleIsForced) {
  const TriangleSpec t{Rational::parse("3/5"), Rational::parse("4/5"), RationalAngle(1, 7)};
  EXPECT_EQ(impossible_triangle(t).kind, Verdict::Kind::ForcedIrrational);
  const auto cert = certify_triangle(t);
  EXPECT_EQ(cert.verdict.kind, Verdict::Kind::ForcedIrrational);
  EXPECT_FALSE(cert.trace.empty());
}

TEST(ImpossibleTriangle, NonExceptionalAnglesAreForcedAndResistApproximation) {
  for_all(200, 22, [](Gen& g, int) {
    const TriangleSpec t{g.open_unit_rational(), g.open_unit_rational(), g.non_exceptional_angle()};
    ASSERT_EQ(impossible_triangle(t).kind, Verdict::Kind::ForcedIrrational);
    EXPECT_FALSE(raqm::testing::has_close_rational(dot_xz_by_vectors(t)));
  });
}

TEST(ImpossibleTriangle, ExceptionalAnglesAreReported) {
  for_all(200, 23, [](Gen& g, int) {
    const TriangleSpec t{g.open_unit_rational(), g.open_unit_rational(), g.exceptional_angle()};
    EXPECT_EQ(impossible_triangle(t).kind, Verdict::Kind::ExceptionalVertexAngle);
  });
}

TEST(ImpossibleTriangle, DegenerateSides) {
  EXPECT_EQ(impossible_triangle({Rational(1), Rational::parse("1/3"), RationalAngle(1, 7)}).kind,
            Verdict::Kind::Degenerate);
  EXPECT_EQ(impossible_triangle({Rational::parse("1/3"), Rational(-1), RationalAngle(1, 7)}).kind,
            Verdict::Kind::Degenerate);
  EXPECT_THROW(impossible_triangle({Rational(2), Rational(0), RationalAngle(1, 7)}), std::domain_error);
}

TEST(Exceptional, MultiplesOf30And45Degrees) {
  for (int k = 0; k < 12; ++k) EXPECT_TRUE(is_exceptional(RationalAngle(k, 12)));
  for (int k = 0; k < 8; ++k) EXPECT_TRUE(is_exceptional(RationalAngle(k, 8)));
  EXPECT_FALSE(is_exceptional(RationalAngle(1, 7)));
  EXPECT_FALSE(is_exceptional(RationalAngle(1, 24)));
}

TEST(Gram, Feasibility) {
  const Rational h = Rational::parse("1/2"), mh = Rational::parse("-1/2"), z = Rational(0);
  EXPECT_TRUE(gram_feasible(z, z, z));
  EXPECT_TRUE(gram_feasible(h, h, h));
  EXPECT_TRUE(gram_feasible(mh, mh, mh));  // coplanar, 120 degrees apart
  const Rational n = Rational::parse("-9/10");
  EXPECT_FALSE(gram_feasible(n, n, n));
  EXPECT_FALSE(gram_feasible(Rational(1), Rational(1), Rational(-1)));
}

QuadSpec random_quad(Gen& g, bool declare_all) {
  QuadSpec q;
  q.cos_x0y0 = g.open_unit_rational(200);
  if (declare_all) {
    q.cos_x0y1 = g.open_unit_rational(200);
    q.cos_x1y0 = g.open_unit_rational(200);
    q.cos_x1y1 = g.open_unit_rational(200);
  }
  q.alpha = g.non_exceptional_angle();
  q.beta = g.non_exceptional_angle();
  q.gamma = g.non_exceptional_angle();
  q.delta = g.non_exceptional_angle();
  return q;
}

TEST(ChshCertificate, SingleFlipsForcedOppositeUnconstrained) {
  for_all(100, 24, [](Gen& g, int i) {
    const QuadSpec q = random_quad(g, i % 2 == 0);
    const auto cert = chsh_certify(q);
    EXPECT_EQ(cert.at(Edge::X0Y0).verdict, Verdict::rational(q.cos_x0y0));
    EXPECT_EQ(cert.at(Edge::X0Y1).verdict.kind, Verdict::Kind::ForcedIrrational);
    EXPECT_EQ(cert.at(Edge::X1Y0).verdict.kind, Verdict::Kind::ForcedIrrational);
    EXPECT_EQ(cert.at(Edge::X1Y1).verdict.kind, Verdict::Kind::NoVerdict);
  });
}

// The numeric evidence for X1Y0 recomputed from the two triangles sharing
// side X0X1.
TEST(ChshCertificate, EvidenceMatchesIndependentEvaluation) {
  for_all(50, 25, [](Gen& g, int) {
    const QuadSpec q = random_quad(g, true);
    const auto cert = chsh_certify(q);
    using boost::multiprecision::cos;
    using boost::multiprecision::sqrt;
    auto s = [](const Rational& c) { return sqrt(1 - to_mp(c) * to_mp(c)); };
    const Mp two_pi = 2 * raqm::testing::mp_pi();
    const Mp a = s(q.cos_x0y0) * s(*q.cos_x1y0) * cos(two_pi * to_mp(q.gamma.turns())) -
                 s(*q.cos_x1y1) * s(*q.cos_x0y1) * cos(two_pi * to_mp(q.delta.turns()));
    ASSERT_TRUE(cert.at(Edge::X1Y0).numeric_value.has_value());
    EXPECT_LT(boost::multiprecision::abs(Mp(*cert.at(Edge::X1Y0).numeric_value) - a), Mp(1e-190));
    EXPECT_FALSE(raqm::testing::has_close_rational(a));
  });
}

Edge opposite(Edge e) {
  switch (e) {
    case Edge::X0Y0: return Edge::X1Y1;
    case Edge::X0Y1: return Edge::X1Y0;
    case Edge::X1Y0: return Edge::X0Y1;
    case Edge::X1Y1: return Edge::X0Y0;
  }
  return e;
}

TEST(ChshCertificate, EveryRealisedEdgeBehavesAlike) {
  for_all(40, 26, [](Gen& g, int) {
    const QuadSpec q = random_quad(g, true);
    for (Edge r : kAllEdges) {
      const auto cert = chsh_certify(q, r);
      EXPECT_EQ(cert.realized, r);
      EXPECT_EQ(cert.at(r).verdict, Verdict::rational(*q.cos(r)));
      EXPECT_EQ(cert.at(opposite(r)).verdict.kind, Verdict::Kind::NoVerdict);
      for (Edge e : kAllEdges) {
        if (e == r || e == opposite(r)) continue;
        EXPECT_EQ(cert.at(e).verdict.kind, Verdict::Kind::ForcedIrrational) << to_string(r) << " " << to_string(e);
      }
    }
  });
}

TEST(ChshCertificate, SwappingLabelsMirrorsTheCertificate) {
  for_all(30, 27, [](Gen& g, int) {
    QuadSpec q = random_quad(g, true);
    QuadSpec swapped = q;  // X0 <-> X1
    swapped.cos_x0y0 = *q.cos_x1y0;
    swapped.cos_x1y0 = q.cos_x0y0;
    swapped.cos_x0y1 = q.cos_x1y1;
    swapped.cos_x1y1 = q.cos_x0y1;
    std::swap(swapped.alpha, swapped.beta);
    const auto a = chsh_certify(q, Edge::X0Y0);
    const auto b = chsh_certify(swapped, Edge::X1Y0);
    EXPECT_EQ(a.at(Edge::X0Y0).verdict, b.at(Edge::X1Y0).verdict);
    EXPECT_EQ(a.at(Edge::X0Y1).verdict, b.at(Edge::X1Y1).verdict);
    EXPECT_EQ(a.at(Edge::X1Y0).verdict, b.at(Edge::X0Y0).verdict);
    EXPECT_EQ(a.at(Edge::X1Y1).verdict, b.at(Edge::X0Y1).verdict);
  });
}

TEST(ChshCertificate, DegenerateAndExceptionalInputs) {
  QuadSpec q;
  q.cos_x0y0 = Rational(1);
  q.alpha = RationalAngle(1, 7);
  q.beta = RationalAngle(2, 7);
  q.gamma = RationalAngle(3, 11);
  q.delta = RationalAngle(1, 13);
  for (const auto& ev : chsh_certify(q).edges) EXPECT_EQ(ev.verdict.kind, Verdict::Kind::Degenerate);

  q.cos_x0y0 = Rational::parse("1/3");
  q.gamma = RationalAngle(1, 8);
  for (const auto& ev : chsh_certify(q).edges) EXPECT_EQ(ev.verdict.kind, Verdict::Kind::ExceptionalVertexAngle);
}

TEST(ChshCertificate, RejectsUnembeddableGeometry) {
  QuadSpec q;
  const Rational n = Rational::parse("-9/10");
  q.cos_x0y0 = n;
  q.cos_x1y0 = n;
  q.cos_x0x1 = n;
  q.alpha = RationalAngle(1, 7);
  q.beta = RationalAngle(2, 7);
  q.gamma = RationalAngle(3, 11);
  q.delta = RationalAngle(1, 13);
  EXPECT_THROW(chsh_certify(q), std::domain_error);
  EXPECT_THROW(chsh_certify(q, Edge::X1Y1), std::invalid_argument);  // X1Y1 undeclared
}

TEST(Edges, NamesRoundTrip) {
  for (Edge e : kAllEdges) EXPECT_EQ(parse_edge(to_string(e)), e);
  EXPECT_THROW(parse_edge("X2Y0"), std::invalid_argument);
}

}  // namespace
