#include "hsg/gasket.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hsg/errors.hpp"

namespace hsg {

namespace {

const Mat2 kT1{3.0 / 5.0, 0.0, 0.0, 1.0 / 5.0};
const Mat2 kT2{3.0 / 10.0, kSqrt3 / 10.0, kSqrt3 / 10.0, 1.0 / 2.0};
const Mat2 kT3{3.0 / 10.0, -kSqrt3 / 10.0, -kSqrt3 / 10.0, 1.0 / 2.0};

// Branch selection tolerance; absorbs float drift from repeated pull-backs.
constexpr double kInsideTol = 1e-9;

int check_symbol(int symbol) {
  if (symbol < 1 || symbol > 3) {
    throw DomainError("symbol must be 1, 2 or 3, got " + std::to_string(symbol));
  }
  return symbol;
}

void check_depth(int len, int guard, const char* who) {
  if (len > guard) {
    throw ResourceError(std::string(who) + ": word length " + std::to_string(len) +
                        " exceeds depth guard " + std::to_string(guard));
  }
}

Vec2 fixed_point(int symbol) {
  switch (symbol) {
    case 1: return kVertexA;
    case 2: return kVertexB;
    default: return kVertexC;
  }
}

// Signed distances to the three edge lines, positive inside.
std::array<double, 3> edge_distances(Vec2 p) {
  // Edge AB: x2 = x1/sqrt(3);  unit inward normal (1/2, -sqrt(3)/2).
  const double d_ab = 0.5 * p.x1 - 0.5 * kSqrt3 * p.x2;
  // Edge AC: x2 = -x1/sqrt(3); unit inward normal (1/2, sqrt(3)/2).
  const double d_ac = 0.5 * p.x1 + 0.5 * kSqrt3 * p.x2;
  // Edge BC: x1 = 1.
  const double d_bc = 1.0 - p.x1;
  return {d_ab, d_ac, d_bc};
}

}  // namespace

Symbol::Symbol(int value) : value_(static_cast<std::uint8_t>(check_symbol(value))) {}

Word::Word(std::initializer_list<int> symbols) {
  syms_.reserve(symbols.size());
  for (int s : symbols) push_back(s);
}

Word Word::from_string(const std::string& digits) {
  Word w;
  for (char c : digits) {
    if (c < '1' || c > '3') {
      throw DomainError("word string must consist of digits 1-3: '" + digits + "'");
    }
    w.push_back(c - '0');
  }
  return w;
}

Word Word::repeated(int symbol, int count) {
  check_symbol(symbol);
  Word w;
  w.syms_.assign(static_cast<std::size_t>(count), static_cast<std::uint8_t>(symbol));
  return w;
}

void Word::push_back(int symbol) {
  syms_.push_back(static_cast<std::uint8_t>(check_symbol(symbol)));
}

Word Word::prefix(int n) const {
  Word w;
  w.syms_.assign(syms_.begin(), syms_.begin() + n);
  return w;
}

Word Word::suffix_from(int n) const {
  Word w;
  w.syms_.assign(syms_.begin() + n, syms_.end());
  return w;
}

Word Word::concat(const Word& tail) const {
  Word w = *this;
  w.syms_.insert(w.syms_.end(), tail.syms_.begin(), tail.syms_.end());
  return w;
}

std::string Word::to_string() const {
  std::string s;
  s.reserve(syms_.size());
  for (std::uint8_t c : syms_) s.push_back(static_cast<char>('0' + c));
  return s;
}

double Cell::diameter() const {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      d = std::max(d, norm(vertices[static_cast<std::size_t>(i)] -
                           vertices[static_cast<std::size_t>(j)]));
    }
  }
  return d;
}

const Mat2& branch_linear(int symbol) {
  switch (check_symbol(symbol)) {
    case 1: return kT1;
    case 2: return kT2;
    default: return kT3;
  }
}

AffineMap branch(Symbol i) { return branch(i.value()); }

AffineMap branch(int symbol) {
  const Mat2& t = branch_linear(symbol);
  const Vec2 fp = fixed_point(symbol);
  return {t, fp - t.apply(fp)};
}

AffineMap compose_word(const Word& w, int depth_guard) {
  check_depth(w.size(), depth_guard, "compose_word");
  AffineMap m;  // identity
  for (int i = 0; i < w.size(); ++i) m = m.compose(branch(w.at(i)));
  return m;
}

Cell cell(const Word& w, int depth_guard) {
  const AffineMap m = compose_word(w, depth_guard);
  return {w, m, {m(kVertexA), m(kVertexB), m(kVertexC)}};
}

CodedPoint code_to_point(const Word& w, int depth_guard) {
  const AffineMap m = compose_word(w, depth_guard);
  return {m(kBaseCentroid), diameter_bound(w.size())};
}

bool inside_base_triangle(Vec2 p, double tol) {
  const auto d = edge_distances(p);
  return d[0] >= -tol && d[1] >= -tol && d[2] >= -tol;
}

namespace {

// Branch whose (closed) cell contains p, smallest symbol first.
int select_branch(Vec2 p, Vec2* pulled) {
  for (int j = 1; j <= 3; ++j) {
    const Vec2 q = branch(j).inverse()(p);
    if (inside_base_triangle(q, kInsideTol)) {
      *pulled = q;
      return j;
    }
  }
  return 0;
}

}  // namespace

Word point_to_code(Vec2 p, int depth, int depth_guard) {
  check_depth(depth, depth_guard, "point_to_code");
  if (!inside_base_triangle(p, kInsideTol)) {
    throw DomainError("point_to_code: point outside the base triangle");
  }
  Word w;
  Vec2 cur = p;
  for (int level = 0; level < depth; ++level) {
    Vec2 next;
    const int j = select_branch(cur, &next);
    if (j == 0) {
      throw DomainError("point_to_code: point escaped all branch cells at level " +
                        std::to_string(level));
    }
    w.push_back(j);
    cur = next;
  }
  return w;
}

Vec2 apply_F(Vec2 p) {
  if (!inside_base_triangle(p, kInsideTol)) {
    throw DomainError("apply_F: point outside the base triangle");
  }
  Vec2 pulled;
  if (select_branch(p, &pulled) == 0) {
    throw DomainError("apply_F: point escaped all branch cells");
  }
  return pulled;
}

Word shift(const Word& w) {
  if (w.empty()) throw DomainError("shift: empty word");
  return w.suffix_from(1);
}

Vec2 base_vertex(VertexId v) {
  switch (v) {
    case VertexId::A: return kVertexA;
    case VertexId::B: return kVertexB;
    default: return kVertexC;
  }
}

VertexRef canonical_vertex(const Word& w, VertexId v) {
  Word cur = w;
  VertexId vert = v;
  for (;;) {
    if (cur.empty()) break;
    const int last = cur.back();
    if ((last == 1 && vert == VertexId::A) || (last == 2 && vert == VertexId::B) ||
        (last == 3 && vert == VertexId::C)) {
      cur.pop_back();  // last branch fixes this vertex
      continue;
    }
    if (last == 2 && vert == VertexId::A) {  // psi_{u2}(A) = psi_{u1}(B)
      cur.pop_back();
      cur.push_back(1);
      vert = VertexId::B;
      continue;
    }
    if (last == 3 && vert == VertexId::A) {  // psi_{u3}(A) = psi_{u1}(C)
      cur.pop_back();
      cur.push_back(1);
      vert = VertexId::C;
      continue;
    }
    if (last == 3 && vert == VertexId::B) {  // psi_{u3}(B) = psi_{u2}(C)
      cur.pop_back();
      cur.push_back(2);
      vert = VertexId::C;
      continue;
    }
    break;
  }
  return {cur, vert};
}

std::vector<CanonicalVertex> vertex_lattice(int depth, int depth_guard) {
  check_depth(depth, depth_guard, "vertex_lattice");
  std::map<VertexRef, int> mult;
  Word w;
  // Iterates all words of the given length in lexicographic order.
  const auto visit_all = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      for (VertexId v : {VertexId::A, VertexId::B, VertexId::C}) {
        ++mult[canonical_vertex(w, v)];
      }
      return;
    }
    for (int j = 1; j <= 3; ++j) {
      w.push_back(j);
      self(self, remaining - 1);
      w.pop_back();
    }
  };
  visit_all(visit_all, depth);

  std::vector<CanonicalVertex> out;
  out.reserve(mult.size());
  for (const auto& [ref, count] : mult) {
    const Vec2 p = compose_word(ref.word, depth_guard)(base_vertex(ref.vertex));
    out.push_back({ref, p, count});
  }
  return out;
}

std::vector<Vec2> base_vertex_points(int sub_depth) {
  std::vector<Vec2> pts;
  for (const CanonicalVertex& cv : vertex_lattice(sub_depth)) pts.push_back(cv.point);
  return pts;
}

}  // namespace hsg
