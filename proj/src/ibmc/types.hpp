#pragma once

#include <cassert>
#include <cstdint>
#include <string>

namespace ibmc {

// Scalar types: bool, uN, iN for N in 1..64. An array type is a scalar
// element type plus a positive cell count; scalars have array_size == 0.
struct Type {
  enum class Kind : uint8_t { Bool, Unsigned, Signed };
  Kind kind = Kind::Bool;
  unsigned width = 1;       // bits; bool is width 1
  unsigned array_size = 0;  // 0 = scalar

  static Type boolean() { return Type{Kind::Bool, 1, 0}; }
  static Type unsigned_(unsigned w) { return Type{Kind::Unsigned, w, 0}; }
  static Type signed_(unsigned w) { return Type{Kind::Signed, w, 0}; }

  bool is_bool() const { return kind == Kind::Bool; }
  bool is_signed() const { return kind == Kind::Signed; }
  bool is_array() const { return array_size != 0; }
  Type element() const { return Type{kind, width, 0}; }

  bool same_scalar(const Type& o) const {
    return kind == o.kind && width == o.width;
  }
  bool operator==(const Type& o) const {
    return kind == o.kind && width == o.width && array_size == o.array_size;
  }
  bool operator!=(const Type& o) const { return !(*this == o); }

  std::string str() const {
    std::string s;
    switch (kind) {
      case Kind::Bool: s = "bool"; break;
      case Kind::Unsigned: s = "u" + std::to_string(width); break;
      case Kind::Signed: s = "i" + std::to_string(width); break;
    }
    if (array_size) s += "[" + std::to_string(array_size) + "]";
    return s;
  }
};

enum class UnOp : uint8_t { Neg, Not, BitNot };
enum class BinOp : uint8_t {
  Add, Sub, Mul, Div, Rem,
  And, Or, Xor, Shl, Shr,
  Eq, Ne, Lt, Le, Gt, Ge,
};

inline bool binop_is_compare(BinOp op) {
  return op >= BinOp::Eq;
}
inline bool binop_is_refinable(BinOp op) {
  return op == BinOp::Mul || op == BinOp::Div || op == BinOp::Rem;
}

inline const char* unop_str(UnOp op) {
  switch (op) {
    case UnOp::Neg: return "-";
    case UnOp::Not: return "!";
    case UnOp::BitNot: return "~";
  }
  return "?";
}
inline const char* binop_str(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Rem: return "%";
    case BinOp::And: return "&";
    case BinOp::Or: return "|";
    case BinOp::Xor: return "^";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
  }
  return "?";
}

// Two's-complement value helpers. All values are kept as width-masked
// uint64_t bit patterns; signedness only matters at operator evaluation.
namespace bv {

inline uint64_t mask(unsigned w) {
  return w >= 64 ? ~uint64_t(0) : ((uint64_t(1) << w) - 1);
}
inline uint64_t trunc(uint64_t v, unsigned w) { return v & mask(w); }

inline bool sign_bit(uint64_t v, unsigned w) {
  return (v >> (w - 1)) & 1;
}
// Sign-extend a w-bit pattern to 64 bits.
inline int64_t to_signed(uint64_t v, unsigned w) {
  v = trunc(v, w);
  if (w < 64 && sign_bit(v, w)) v |= ~mask(w);
  return int64_t(v);
}

inline uint64_t eval_unop(UnOp op, Type t, uint64_t a) {
  switch (op) {
    case UnOp::Neg: return trunc(~a + 1, t.width);
    case UnOp::Not: return (a & 1) ^ 1;
    case UnOp::BitNot: return trunc(~a, t.width);
  }
  return 0;
}

// Evaluate a binary operator over w-bit operands of type t (the operand
// type; comparisons yield 0/1). Division by zero follows SMT-LIB:
// x/0 = all-ones, x%0 = x.
inline uint64_t eval_binop(BinOp op, Type t, uint64_t a, uint64_t b) {
  const unsigned w = t.width;
  a = trunc(a, w);
  b = trunc(b, w);
  const bool sgn = t.is_signed();
  switch (op) {
    case BinOp::Add: return trunc(a + b, w);
    case BinOp::Sub: return trunc(a - b, w);
    case BinOp::Mul: return trunc(a * b, w);
    case BinOp::Div: {
      if (b == 0) return mask(w);
      if (!sgn) return trunc(a / b, w);
      int64_t sa = to_signed(a, w), sb = to_signed(b, w);
      if (sb == -1) return trunc(uint64_t(-sa), w);  // INT_MIN/-1 wraps
      return trunc(uint64_t(sa / sb), w);
    }
    case BinOp::Rem: {
      if (b == 0) return a;
      if (!sgn) return trunc(a % b, w);
      int64_t sa = to_signed(a, w), sb = to_signed(b, w);
      if (sb == -1) return 0;
      return trunc(uint64_t(sa % sb), w);
    }
    case BinOp::And: return a & b;
    case BinOp::Or: return a | b;
    case BinOp::Xor: return a ^ b;
    case BinOp::Shl: return b >= w ? 0 : trunc(a << b, w);
    case BinOp::Shr:
      if (!sgn) return b >= w ? 0 : a >> b;
      if (b >= w) return sign_bit(a, w) ? mask(w) : 0;
      return trunc(uint64_t(to_signed(a, w) >> b), w);
    case BinOp::Eq: return a == b;
    case BinOp::Ne: return a != b;
    case BinOp::Lt: return sgn ? to_signed(a, w) < to_signed(b, w) : a < b;
    case BinOp::Le: return sgn ? to_signed(a, w) <= to_signed(b, w) : a <= b;
    case BinOp::Gt: return sgn ? to_signed(a, w) > to_signed(b, w) : a > b;
    case BinOp::Ge: return sgn ? to_signed(a, w) >= to_signed(b, w) : a >= b;
  }
  return 0;
}

// Cast a value of type `from` to type `to`: truncation or zero/sign
// extension (extension follows the source signedness); casts to bool
// test for nonzero.
inline uint64_t eval_cast(Type from, Type to, uint64_t v) {
  v = trunc(v, from.width);
  if (to.is_bool()) return v != 0;
  if (to.width <= from.width) return trunc(v, to.width);
  if (from.is_signed()) return trunc(uint64_t(to_signed(v, from.width)), to.width);
  return v;
}

inline std::string value_str(Type t, uint64_t v) {
  if (t.is_bool()) return (v & 1) ? "true" : "false";
  if (t.is_signed()) return std::to_string(to_signed(v, t.width));
  return std::to_string(trunc(v, t.width));
}

}  // namespace bv
}  // namespace ibmc
