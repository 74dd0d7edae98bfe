#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "hsg/errors.hpp"
#include "hsg/gasket.hpp"
#include "hsg/measure.hpp"
#include "test_util.hpp"

using namespace hsg;
using doctest::Approx;

namespace {

double dist(Vec2 a, Vec2 b) { return norm(a - b); }

const Vec2 kJunctionA{4.0 / 5.0, 0.0};                 // psi2(C) = psi3(B)
const Vec2 kJunctionB{3.0 / 5.0, -kSqrt3 / 15.0};      // psi1(C) = psi3(A)
const Vec2 kJunctionC{3.0 / 5.0, kSqrt3 / 15.0};       // psi1(B) = psi2(A)

}  // namespace

TEST_CASE("branches fix their vertices") {
  CHECK(dist(branch(1)(kVertexA), kVertexA) <= 1e-15);
  CHECK(dist(branch(2)(kVertexB), kVertexB) <= 1e-15);
  CHECK(dist(branch(3)(kVertexC), kVertexC) <= 1e-15);
}

TEST_CASE("branch matrices are the stated contractions") {
  const Mat2& t1 = branch_linear(1);
  CHECK(t1.a11 == Approx(0.6).epsilon(1e-15));
  CHECK(t1.a22 == Approx(0.2).epsilon(1e-15));
  CHECK(t1.a12 == 0.0);
  const Mat2& t2 = branch_linear(2);
  CHECK(t2.a11 == Approx(0.3).epsilon(1e-15));
  CHECK(t2.a12 == Approx(kSqrt3 / 10.0).epsilon(1e-15));
  CHECK(t2.a22 == Approx(0.5).epsilon(1e-15));
  const Mat2& t3 = branch_linear(3);
  CHECK(t3.a12 == Approx(-kSqrt3 / 10.0).epsilon(1e-15));
  CHECK_THROWS_AS(branch_linear(4), DomainError);
  CHECK_THROWS_AS(Symbol(0), DomainError);
}

TEST_CASE("junction identities hold to machine precision") {
  CHECK(dist(branch(1)(kVertexB), kJunctionC) <= 1e-15);
  CHECK(dist(branch(2)(kVertexA), kJunctionC) <= 1e-15);
  CHECK(dist(branch(1)(kVertexC), kJunctionB) <= 1e-15);
  CHECK(dist(branch(3)(kVertexA), kJunctionB) <= 1e-15);
  CHECK(dist(branch(2)(kVertexC), kJunctionA) <= 1e-15);
  CHECK(dist(branch(3)(kVertexB), kJunctionA) <= 1e-15);
  // exact coordinates of the junction shared by cells 1 and 2
  CHECK(branch(1)(kVertexB).x1 == Approx(0.6).epsilon(1e-15));
  CHECK(branch(1)(kVertexB).x2 == Approx(1.0 / (5.0 * kSqrt3)).epsilon(1e-15));
}

TEST_CASE("branches contract by at most 3/5") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Vec2 p = test::random_triangle_point(rng);
    const Vec2 q = test::random_triangle_point(rng);
    for (int j = 1; j <= 3; ++j) {
      CHECK(dist(branch(j)(p), branch(j)(q)) <= 0.6 * dist(p, q) + 1e-15);
    }
  }
}

TEST_CASE("compose_word basics") {
  const AffineMap id = compose_word(Word{});
  CHECK(id.linear.a11 == 1.0);
  CHECK(id.linear.a22 == 1.0);
  CHECK(norm(id.translation) == 0.0);

  const Mat2 d = compose_word(Word{1, 1}).linear;
  CHECK(d.a11 == Approx(9.0 / 25.0).epsilon(1e-15));
  CHECK(d.a22 == Approx(1.0 / 25.0).epsilon(1e-15));
  CHECK(d.a12 == 0.0);

  const AffineMap single = compose_word(Word{1});
  const AffineMap b1 = branch(1);
  CHECK(hs_norm(single.linear - b1.linear) <= 1e-16);
  CHECK(dist(single.translation, b1.translation) <= 1e-16);
}

TEST_CASE("composition operator norms stay below the contraction ratio") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const int len = 1 + static_cast<int>(uniform01(rng()) * 10);
    Word w;
    for (int k = 0; k < len; ++k) w.push_back(1 + static_cast<int>(uniform01(rng()) * 3));
    CHECK(svd2(compose_word(w).linear).s1 <= 0.6 + 1e-12);
  }
}

TEST_CASE("depth guard") {
  CHECK_THROWS_AS(compose_word(Word::repeated(1, 21)), ResourceError);
  CHECK_NOTHROW(compose_word(Word::repeated(1, 21), 25));
  CHECK_THROWS_AS(Word::from_string("14"), DomainError);
}

TEST_CASE("cells carry the mapped triangle") {
  const Cell root = cell(Word{});
  CHECK(dist(root.vertices[0], kVertexA) == 0.0);
  CHECK(dist(root.vertices[1], kVertexB) == 0.0);
  CHECK(dist(root.vertices[2], kVertexC) == 0.0);

  const Cell c2 = cell(Word{2});
  CHECK(dist(c2.vertices[2], kJunctionA) <= 1e-15);

  CHECK(cell(Word{1, 1, 1}).diameter() <= diameter_bound(3) + 1e-15);
}

TEST_CASE("cells nest inside their parents") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    Word w;
    const int len = static_cast<int>(uniform01(rng()) * 8);
    for (int k = 0; k < len; ++k) w.push_back(1 + static_cast<int>(uniform01(rng()) * 3));
    const AffineMap inv = compose_word(w).inverse();
    for (int j = 1; j <= 3; ++j) {
      Word wj = w;
      wj.push_back(j);
      for (const Vec2& v : cell(wj).vertices) {
        CHECK(inside_base_triangle(inv(v), 1e-9));
      }
    }
  }
}

TEST_CASE("code_to_point converges to fixed points with the stated bound") {
  for (int l : {1, 4, 8, 12}) {
    const CodedPoint cp = code_to_point(Word::repeated(1, l));
    CHECK(dist(cp.point, kVertexA) <= cp.error_bound);
    const CodedPoint cp2 = code_to_point(Word::repeated(2, l));
    CHECK(dist(cp2.point, kVertexB) <= cp2.error_bound);
  }
  CHECK(code_to_point(Word::repeated(1, 10)).error_bound == Approx(6.98e-3).epsilon(1e-3));
  CHECK(code_to_point(Word::repeated(1, 10)).error_bound ==
        Approx(kDiam0 * std::pow(0.6, 10)).epsilon(1e-15));
}

TEST_CASE("point_to_code basics and junction tie-break") {
  CHECK(point_to_code(kVertexA, 5) == Word::repeated(1, 5));
  CHECK(point_to_code(kJunctionA, 1) == Word{2});
  CHECK_THROWS_AS(point_to_code({2.0, 0.0}, 3), DomainError);
}

TEST_CASE("round trip through the coding stays within twice the cell bound") {
  const int depth = 10;
  const auto words = sample_kappa(21, depth, 1000);
  for (const Word& w : words) {
    const Vec2 p = code_to_point(w).point;
    const Word back = point_to_code(p, depth);
    CHECK(dist(code_to_point(back).point, p) <= 2.0 * diameter_bound(depth));
  }
}

TEST_CASE("apply_F inverts the branches off the junctions") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 200; ++i) {
    const Vec2 p = test::random_triangle_point(rng);
    for (int j = 1; j <= 3; ++j) {
      CHECK(dist(apply_F(branch(j)(p)), p) <= 1e-9);
    }
  }
  CHECK(dist(apply_F(kVertexA), kVertexA) <= 1e-15);
  CHECK_THROWS_AS(apply_F({5.0, 5.0}), DomainError);
}

TEST_CASE("shift") {
  CHECK(shift(Word{1, 2, 3}) == Word{2, 3});
  CHECK(shift(Word{2}) == Word{});
  CHECK_THROWS_AS(shift(Word{}), DomainError);
}

TEST_CASE("coding conjugates F with the shift") {
  const auto words = sample_kappa(22, 14, 300);
  for (const Word& w : words) {
    for (int len : {6, 10, 14}) {
      const Word u = w.prefix(len);
      const Vec2 lhs = apply_F(code_to_point(u).point);
      const Vec2 rhs = code_to_point(shift(u)).point;
      // F expands by at most 1/s2(T_i) = 5
      CHECK(dist(lhs, rhs) <= 5.0 * diameter_bound(len) + diameter_bound(len - 1));
    }
  }
}

TEST_CASE("canonical vertex normal form") {
  const auto c1 = canonical_vertex(Word{2}, VertexId::A);
  CHECK(c1.word == Word{1});
  CHECK(c1.vertex == VertexId::B);
  const auto c2 = canonical_vertex(Word{3}, VertexId::B);
  CHECK(c2.word == Word{2});
  CHECK(c2.vertex == VertexId::C);
  const auto c3 = canonical_vertex(Word{2, 1}, VertexId::A);  // psi2 psi1(A) = psi1(B)
  CHECK(c3.word == Word{1});
  CHECK(c3.vertex == VertexId::B);
  const auto c4 = canonical_vertex(Word{1, 1, 1}, VertexId::A);
  CHECK(c4.word == Word{});
  CHECK(c4.vertex == VertexId::A);
}

TEST_CASE("vertex lattice counts and junction multiplicities") {
  const auto lat1 = vertex_lattice(1);
  CHECK(lat1.size() == 6);
  int junctions = 0;
  for (const auto& cv : lat1) {
    if (cv.multiplicity == 2) ++junctions;
  }
  CHECK(junctions == 3);

  // independent oracle: cluster the raw points by distance
  for (int depth : {1, 2, 3}) {
    std::vector<Vec2> raw;
    Word w;
    const auto rec = [&](auto&& self, int remaining) -> void {
      if (remaining == 0) {
        for (VertexId v : {VertexId::A, VertexId::B, VertexId::C}) {
          raw.push_back(compose_word(w)(base_vertex(v)));
        }
        return;
      }
      for (int j = 1; j <= 3; ++j) {
        w.push_back(j);
        self(self, remaining - 1);
        w.pop_back();
      }
    };
    rec(rec, depth);
    std::vector<Vec2> distinct;
    for (const Vec2& p : raw) {
      bool seen = false;
      for (const Vec2& q : distinct) {
        if (dist(p, q) < 1e-12) seen = true;
      }
      if (!seen) distinct.push_back(p);
    }
    CHECK(vertex_lattice(depth).size() == distinct.size());
    // 3 (3^d + 1) / 2 vertices at depth d
    CHECK(distinct.size() ==
          static_cast<std::size_t>(3 * (std::pow(3, depth) + 1) / 2));
  }
}
