#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace dn::ad {

/// Reverse-mode tape. Nodes own a contiguous slice of (parent, partial)
/// edges; a single reverse sweep yields adjoints for every node. Cleared
/// and reused between evaluations without releasing capacity.
class Tape {
 public:
  int leaf(double) {
    nodes_.push_back({edge_count_, edge_count_});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int unary(int p, double d) {
    push_edge(p, d);
    nodes_.push_back({edge_count_ - 1, edge_count_});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int binary(int p0, double d0, int p1, double d1) {
    push_edge(p0, d0);
    push_edge(p1, d1);
    nodes_.push_back({edge_count_ - 2, edge_count_});
    return static_cast<int>(nodes_.size()) - 1;
  }

  // Incremental n-ary node: begin_node, add_edge*, end_node.
  void begin_node() { pending_begin_ = edge_count_; }
  void add_edge(int parent, double partial) { push_edge(parent, partial); }
  int end_node() {
    nodes_.push_back({pending_begin_, edge_count_});
    return static_cast<int>(nodes_.size()) - 1;
  }

  /// Reverse sweep from `out`; afterwards adjoint(i) is d out / d node_i.
  void backward(int out) {
    adjoint_.assign(nodes_.size(), 0.0);
    adjoint_[static_cast<size_t>(out)] = 1.0;
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
      const double a = adjoint_[static_cast<size_t>(i)];
      if (a == 0.0) continue;
      const Node& nd = nodes_[static_cast<size_t>(i)];
      for (int e = nd.edge_begin; e < nd.edge_end; ++e)
        adjoint_[static_cast<size_t>(edge_parent_[static_cast<size_t>(e)])] +=
            a * edge_partial_[static_cast<size_t>(e)];
    }
  }

  double adjoint(int i) const { return adjoint_[static_cast<size_t>(i)]; }
  size_t size() const { return nodes_.size(); }

  void clear() {
    nodes_.clear();
    edge_parent_.clear();
    edge_partial_.clear();
    edge_count_ = 0;
  }

 private:
  struct Node {
    int edge_begin;
    int edge_end;
  };

  void push_edge(int parent, double partial) {
    edge_parent_.push_back(parent);
    edge_partial_.push_back(partial);
    ++edge_count_;
  }

  std::vector<Node> nodes_;
  std::vector<int> edge_parent_;
  std::vector<double> edge_partial_;
  std::vector<double> adjoint_;
  int edge_count_ = 0;
  int pending_begin_ = 0;
};

/// Differentiable scalar. A Var without a tape is a plain constant whose
/// arithmetic is bitwise native; tape-backed Vars record onto the tape.
struct Var {
  Tape* tape = nullptr;
  int idx = -1;
  double v = 0.0;

  Var() = default;
  Var(double c) : v(c) {}  // NOLINT: implicit constant lift is intended
  Var(Tape* t, int i, double value) : tape(t), idx(i), v(value) {}

  bool on_tape() const { return tape != nullptr; }
};

inline Var make_leaf(Tape& t, double v) { return Var(&t, t.leaf(v), v); }

inline double value(double x) { return x; }
inline double value(const Var& x) { return x.v; }

namespace detail {
inline Tape* pick(const Var& a, const Var& b) { return a.tape ? a.tape : b.tape; }
}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
  Tape* t = detail::pick(a, b);
  if (!t) return Var(a.v + b.v);
  if (a.tape && b.tape) return Var(t, t->binary(a.idx, 1.0, b.idx, 1.0), a.v + b.v);
  const Var& live = a.tape ? a : b;
  return Var(t, t->unary(live.idx, 1.0), a.v + b.v);
}

inline Var operator-(const Var& a, const Var& b) {
  Tape* t = detail::pick(a, b);
  if (!t) return Var(a.v - b.v);
  if (a.tape && b.tape) return Var(t, t->binary(a.idx, 1.0, b.idx, -1.0), a.v - b.v);
  if (a.tape) return Var(t, t->unary(a.idx, 1.0), a.v - b.v);
  return Var(t, t->unary(b.idx, -1.0), a.v - b.v);
}

inline Var operator-(const Var& a) {
  if (!a.tape) return Var(-a.v);
  return Var(a.tape, a.tape->unary(a.idx, -1.0), -a.v);
}

inline Var operator*(const Var& a, const Var& b) {
  Tape* t = detail::pick(a, b);
  if (!t) return Var(a.v * b.v);
  if (a.tape && b.tape) return Var(t, t->binary(a.idx, b.v, b.idx, a.v), a.v * b.v);
  if (a.tape) return Var(t, t->unary(a.idx, b.v), a.v * b.v);
  return Var(t, t->unary(b.idx, a.v), a.v * b.v);
}

inline Var operator/(const Var& a, const Var& b) {
  Tape* t = detail::pick(a, b);
  const double q = a.v / b.v;
  if (!t) return Var(q);
  if (a.tape && b.tape)
    return Var(t, t->binary(a.idx, 1.0 / b.v, b.idx, -q / b.v), q);
  if (a.tape) return Var(t, t->unary(a.idx, 1.0 / b.v), q);
  return Var(t, t->unary(b.idx, -q / b.v), q);
}

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }

/// max by value branch; ties take the first argument.
inline Var max(const Var& a, const Var& b) { return a.v >= b.v ? a : b; }

/// Integer power by repeated multiplication (exact composition, nests
/// through further differentiation).
inline Var pow(const Var& a, int n) {
  if (n == 0) return Var(1.0);
  Var acc = a;
  for (int i = 1; i < n; ++i) acc = acc * a;
  return acc;
}

inline Var sqrt(const Var& a) {
  const double s = std::sqrt(a.v);
  if (!a.tape) return Var(s);
  return Var(a.tape, a.tape->unary(a.idx, 0.5 / s), s);
}

/// tanh primitive; its derivative 1 - tanh^2 is built compositionally where
/// a differentiable derivative is needed.
inline Var tanh(const Var& a) {
  const double tv = std::tanh(a.v);
  if (!a.tape) return Var(tv);
  return Var(a.tape, a.tape->unary(a.idx, 1.0 - tv * tv), tv);
}

inline double tanh(double a) { return std::tanh(a); }
inline double max(double a, double b) { return a >= b ? a : b; }

/// sigma(x) = max(0, x^3); C^2 at the kink with sigma'(0) = 0.
template <class S>
inline S relu3(const S& x) {
  if (value(x) > 0.0) return x * x * x;
  return S(0.0);
}

/// sigma'(x) = 3 x^2 for x > 0, else 0. Compositional, so differentiating
/// it again (mixed second order) stays exact.
template <class S>
inline S relu3_prime(const S& x) {
  if (value(x) > 0.0) return S(3.0) * x * x;
  return S(0.0);
}

template <class S>
inline S tanh_prime(const S& x) {
  const S t = tanh(x);
  return S(1.0) - t * t;
}

/// Fused dot product: one tape node with an edge per live operand instead
/// of a chain of binary nodes.
inline Var dot(const Var* a, const Var* b, int m) {
  double v = 0.0;
  Tape* t = nullptr;
  for (int i = 0; i < m; ++i) {
    v += a[i].v * b[i].v;
    if (!t) t = a[i].tape ? a[i].tape : b[i].tape;
  }
  if (!t) return Var(v);
  t->begin_node();
  for (int i = 0; i < m; ++i) {
    if (a[i].tape) t->add_edge(a[i].idx, b[i].v);
    if (b[i].tape) t->add_edge(b[i].idx, a[i].v);
  }
  return Var(t, t->end_node(), v);
}

inline double dot(const double* a, const double* b, int m) {
  double v = 0.0;
  for (int i = 0; i < m; ++i) v += a[i] * b[i];
  return v;
}

}  // namespace dn::ad
