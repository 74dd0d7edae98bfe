#pragma once

// The harmonic Sierpinski gasket: the iterated function system of the three
// affine contractions psi_1, psi_2, psi_3, finite symbol words addressing
// cylinder cells, the coding between words and points, and the expansive
// left inverse F.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hsg/linalg.hpp"

namespace hsg {

inline constexpr int kDefaultDepthGuard = 20;

// Lipschitz constant shared by the three contractions.
inline constexpr double kEta = 0.6;

// Diameter of the base triangle.
inline const double kDiam0 = 2.0 / kSqrt3;

// Fixed points of psi_1, psi_2, psi_3.
inline const Vec2 kVertexA{0.0, 0.0};
inline const Vec2 kVertexB{1.0, 1.0 / kSqrt3};
inline const Vec2 kVertexC{1.0, -1.0 / kSqrt3};

inline const Vec2 kBaseCentroid{2.0 / 3.0, 0.0};

// Diameter bound for a cell addressed by a word of length `len`.
inline double diameter_bound(int len) { return kDiam0 * std::pow(kEta, len); }

class Symbol {
 public:
  explicit Symbol(int value);
  int value() const { return value_; }
  friend bool operator==(Symbol a, Symbol b) { return a.value_ == b.value_; }

 private:
  std::uint8_t value_;
};

// A finite sequence of symbols from {1,2,3}; the empty word is allowed.
class Word {
 public:
  Word() = default;
  explicit Word(std::initializer_list<int> symbols);
  static Word from_string(const std::string& digits);
  static Word repeated(int symbol, int count);

  int size() const { return static_cast<int>(syms_.size()); }
  bool empty() const { return syms_.empty(); }
  int at(int i) const { return syms_[static_cast<std::size_t>(i)]; }
  int back() const { return syms_.back(); }

  void push_back(int symbol);
  void pop_back() { syms_.pop_back(); }

  Word prefix(int n) const;
  Word suffix_from(int n) const;
  Word concat(const Word& tail) const;

  std::string to_string() const;

  friend bool operator==(const Word& a, const Word& b) { return a.syms_ == b.syms_; }
  // Lexicographic, shorter-prefix-first; this is the canonical row order.
  friend bool operator<(const Word& a, const Word& b) { return a.syms_ < b.syms_; }

 private:
  std::vector<std::uint8_t> syms_;
};

struct AffineMap {
  Mat2 linear = Mat2::identity();
  Vec2 translation{};

  Vec2 operator()(Vec2 p) const { return linear.apply(p) + translation; }

  // (*this) o inner
  AffineMap compose(const AffineMap& inner) const {
    return {linear * inner.linear, linear.apply(inner.translation) + translation};
  }

  AffineMap inverse() const {
    const Mat2 li = linear.inverse();
    const Vec2 t = li.apply(translation);
    return {li, {-t.x1, -t.x2}};
  }
};

struct Cell {
  Word word;
  AffineMap map;
  std::array<Vec2, 3> vertices;  // images of A, B, C

  double diameter() const;
};

// The linear parts T_1, T_2, T_3 (symbol is 1-based).
const Mat2& branch_linear(int symbol);

// psi_i as an affine map.
AffineMap branch(Symbol i);
AffineMap branch(int symbol);

// psi_{w_0} o ... o psi_{w_{l-1}}; the empty word gives the identity.
AffineMap compose_word(const Word& w, int depth_guard = kDefaultDepthGuard);

Cell cell(const Word& w, int depth_guard = kDefaultDepthGuard);

struct CodedPoint {
  Vec2 point;         // centroid of the cell's vertex triangle
  double error_bound; // distance bound to the coded point of any extension
};

CodedPoint code_to_point(const Word& w, int depth_guard = kDefaultDepthGuard);

// Inverse of the coding at finite depth. Points on multi-coded junctions
// take the smallest symbol at the ambiguous step.
Word point_to_code(Vec2 p, int depth, int depth_guard = kDefaultDepthGuard);

// The expansive map F: applies the inverse of the branch whose cell
// contains p (smallest-symbol tie-break on junctions).
Vec2 apply_F(Vec2 p);

// Drops the first symbol; the word must be nonempty.
Word shift(const Word& w);

// Signed-distance-based membership test for the closed base triangle.
bool inside_base_triangle(Vec2 p, double tol);

// ---- vertex bookkeeping ----------------------------------------------------
//
// Every point of the vertex lattice is psi_w(V) for some word w and
// V in {A,B,C}, but junction identities make such pairs non-unique:
//   psi_{u.1}(A)=psi_u(A), psi_{u.2}(B)=psi_u(B), psi_{u.3}(C)=psi_u(C),
//   psi_{u.2}(A)=psi_{u.1}(B), psi_{u.3}(A)=psi_{u.1}(C), psi_{u.3}(B)=psi_{u.2}(C).
// Rewriting with these rules terminates and yields a unique normal form,
// which lets callers deduplicate coincident vertices exactly.

enum class VertexId : int { A = 0, B = 1, C = 2 };

Vec2 base_vertex(VertexId v);

struct VertexRef {
  Word word;
  VertexId vertex;
  friend bool operator==(const VertexRef& a, const VertexRef& b) {
    return a.vertex == b.vertex && a.word == b.word;
  }
  friend bool operator<(const VertexRef& a, const VertexRef& b) {
    if (a.word < b.word) return true;
    if (b.word < a.word) return false;
    return static_cast<int>(a.vertex) < static_cast<int>(b.vertex);
  }
};

VertexRef canonical_vertex(const Word& w, VertexId v);

struct CanonicalVertex {
  VertexRef ref;
  Vec2 point;
  int multiplicity;  // number of raw (word, vertex) pairs at this depth
};

// All distinct vertex points of the depth-`depth` cells, canonical form
// plus multiplicity, sorted by (word, vertex).
std::vector<CanonicalVertex> vertex_lattice(int depth, int depth_guard = kDefaultDepthGuard);

// Distinct vertex points of the 3^sub_depth sub-cells of the base triangle,
// as offsets to feed through a cell map.
std::vector<Vec2> base_vertex_points(int sub_depth);

}  // namespace hsg
