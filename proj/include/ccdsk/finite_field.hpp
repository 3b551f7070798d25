#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace ccdsk::gf {

/// Canonical code of a field element. For GF(p^k) the code is
/// sum_i c_i p^i where c_i is the coefficient of x^i.
using Element = std::uint32_t;

inline constexpr std::uint64_t kMaxOrder = 1u << 16;

class Field;

/// Builds GF(p^k). Without an explicit modulus GF(4) uses x^2+x+1 and every
/// other extension the lexicographically smallest monic irreducible
/// (ordered by the code of its lower coefficients). Throws InputError for a
/// non-prime p, an order above 2^16, or a reducible/malformed modulus.
Field make_field(std::uint32_t p, std::uint32_t k,
                 std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

/// GF(p^k) with table-based arithmetic. Immutable and cheap to copy; copies
/// share the same tables.
class Field {
 public:
  std::uint32_t characteristic() const { return tables_->p; }
  std::uint32_t degree() const { return tables_->k; }
  std::uint32_t order() const { return tables_->q; }
  bool is_prime() const { return tables_->k == 1; }
  /// Monic modulus, lowest degree first (k + 1 entries).
  const std::vector<std::uint32_t>& modulus() const { return tables_->modulus; }

  Element add(Element a, Element b) const {
    const auto& t = *tables_;
    if (t.k == 1) {
      const Element s = a + b;
      return s >= t.p ? s - t.p : s;
    }
    if (t.p == 2) return a ^ b;
    if (!t.add_table.empty()) return t.add_table[a * t.q + b];
    return add_digits(a, b);
  }
  Element neg(Element a) const { return tables_->neg[a]; }
  Element sub(Element a, Element b) const { return add(a, tables_->neg[b]); }
  Element mul(Element a, Element b) const {
    const auto& t = *tables_;
    if (a == 0 || b == 0) return 0;
    if (t.k == 1) return static_cast<Element>((std::uint64_t{a} * b) % t.p);
    return t.exp[t.log[a] + t.log[b]];
  }
  /// Multiplicative inverse; a must be nonzero.
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element pow(Element a, std::uint64_t e) const;
  /// a * b + c
  Element fma(Element a, Element b, Element c) const { return add(mul(a, b), c); }

  bool contains(std::uint64_t code) const { return code < tables_->q; }

  friend bool operator==(const Field& a, const Field& b) {
    return a.tables_ == b.tables_ ||
           (a.tables_->p == b.tables_->p && a.tables_->modulus == b.tables_->modulus);
  }

 private:
  struct Tables {
    std::uint32_t p = 0, k = 0, q = 0;
    std::vector<std::uint32_t> modulus;
    std::vector<Element> exp;  // 2(q-1) entries so log sums need no reduction
    std::vector<std::uint32_t> log;
    std::vector<Element> neg;
    std::vector<Element> add_table;  // only for small extension fields
  };

  explicit Field(std::shared_ptr<const Tables> t) : tables_(std::move(t)) {}
  Element add_digits(Element a, Element b) const;

  std::shared_ptr<const Tables> tables_;

  friend Field make_field(std::uint32_t, std::uint32_t, std::optional<std::vector<std::uint32_t>>);
};

bool is_prime(std::uint64_t v);

/// Field of the given order q = p^k. Throws InputError when q is not a prime power.
Field field_of_order(std::uint64_t q);

/// Row-major dense matrix of element codes.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  static Matrix from_rows(const std::vector<std::vector<Element>>& rows, std::size_t cols);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  Element& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Element operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Element> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Element> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::vector<Element> row_vector(std::size_t r) const {
    auto s = row(r);
    return {s.begin(), s.end()};
  }

  void append_row(std::span<const Element> values);
  /// Stacks `below` under this matrix; column counts must agree.
  Matrix stacked(const Matrix& below) const;
  /// Keeps only the listed columns, in the listed order.
  Matrix select_columns(std::span<const std::size_t> cols) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

/// Incrementally built row-echelon basis. Optionally tracks, for each basis
/// vector, its combination in terms of the inserted rows so that membership
/// queries can return explicit coefficients.
class EchelonBasis {
 public:
  EchelonBasis(const Field& field, std::size_t cols, bool track_combinations = false);

  /// Inserts a row; returns true if it increased the rank.
  bool insert(std::span<const Element> v);
  bool contains(std::span<const Element> v) const;
  /// Coefficients c (one per inserted row, in insertion order) with
  /// sum_i c_i row_i = v, or nullopt if v is outside the span.
  std::optional<std::vector<Element>> express(std::span<const Element> v) const;

  std::size_t rank() const { return basis_.size(); }
  std::size_t cols() const { return cols_; }
  std::size_t inserted() const { return inserted_; }

 private:
  // Reduces v in place against the basis; when comb is given, accumulates
  // the subtracted combinations into it.
  void reduce(std::vector<Element>& v, std::vector<Element>* comb) const;

  Field field_;
  std::size_t cols_;
  bool track_;
  std::size_t inserted_ = 0;
  std::vector<std::vector<Element>> basis_;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<Element>> combos_;
};

std::size_t rank(const Field& field, const Matrix& m);
/// Throws std::invalid_argument if v.size() != m.cols().
bool in_rowspan(const Field& field, const Matrix& m, std::span<const Element> v);
/// Returns `count` rows extending rowspan(m) by `count` dimensions, scanning
/// unit vectors e_1, e_2, ... in order. Throws InputError when
/// rank(m) + count > cols(m).
Matrix complete_basis(const Field& field, const Matrix& m, std::size_t count);
/// Basis (as rows) of {x : m x = 0}.
Matrix nullspace(const Field& field, const Matrix& m);
/// m * x
std::vector<Element> apply(const Field& field, const Matrix& m, std::span<const Element> x);

}  // namespace ccdsk::gf
