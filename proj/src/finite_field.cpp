#include "ccdsk/finite_field.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ccdsk/errors.hpp"

namespace ccdsk::gf {

namespace {

using Poly = std::vector<std::uint32_t>;  // lowest degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
  // Fermat; p is prime and small.
  std::uint64_t result = 1, base = a % p;
  for (std::uint64_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of a modulo b over GF(p); b must be nonzero after trimming.
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = inv_mod_prime(b.back(), p);
  while (a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const std::uint64_t factor = std::uint64_t{a.back()} * lead_inv % p;
    for (std::size_t i = 0; i <= db; ++i) {
      const std::uint64_t sub = factor * b[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Poly from_code(std::uint64_t code, std::uint32_t p, std::uint32_t len) {
  Poly out(len, 0);
  for (std::uint32_t i = 0; i < len; ++i) {
    out[i] = static_cast<std::uint32_t>(code % p);
    code /= p;
  }
  return out;
}

std::uint64_t to_code(const Poly& a, std::uint32_t p) {
  std::uint64_t code = 0;
  for (std::size_t i = a.size(); i-- > 0;) code = code * p + a[i];
  return code;
}

bool irreducible(const Poly& f, std::uint32_t p) {
  const std::uint32_t k = static_cast<std::uint32_t>(f.size() - 1);
  for (std::uint32_t d = 1; d <= k / 2; ++d) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
      Poly g = from_code(c, p, d);
      g.push_back(1);
      Poly r = poly_mod(f, g, p);
      if (r.empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

Field make_field(std::uint32_t p, std::uint32_t k, std::optional<std::vector<std::uint32_t>> modulus) {
  if (!is_prime(p)) throw InputError("field characteristic " + std::to_string(p) + " is not prime");
  if (k < 1) throw InputError("field extension degree must be at least 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > kMaxOrder) throw InputError("field order exceeds 2^16");
  }

  auto t = std::make_shared<Field::Tables>();
  t->p = p;
  t->k = k;
  t->q = static_cast<std::uint32_t>(q);

  if (modulus) {
    const Poly& f = *modulus;
    if (f.size() != k + 1 || f.back() != 1 ||
        std::any_of(f.begin(), f.end(), [p](std::uint32_t c) { return c >= p; }))
      throw InputError("modulus must be a monic polynomial of degree k with coefficients below p");
    if (!irreducible(f, p)) throw InputError("modulus is reducible");
    t->modulus = f;
  } else if (k == 1) {
    t->modulus = {0, 1};
  } else {
    const std::uint64_t lower = q;  // p^k choices for the k lower coefficients
    for (std::uint64_t c = 0; c < lower; ++c) {
      Poly f = from_code(c, p, k);
      f.push_back(1);
      if (irreducible(f, p)) {
        t->modulus = std::move(f);
        break;
      }
    }
    if (t->modulus.empty()) throw std::logic_error("no irreducible polynomial found");
  }

  // Slow multiplication on codes, only used while building tables.
  const Poly& f = t->modulus;
  auto slow_mul = [&](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    if (k == 1) return a * b % p;
    const Poly pa = from_code(a, p, k), pb = from_code(b, p, k);
    Poly prod(2 * k - 1, 0);
    for (std::uint32_t i = 0; i < k; ++i)
      for (std::uint32_t j = 0; j < k; ++j)
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{pa[i]} * pb[j]) % p);
    return to_code(poly_mod(prod, f, p), p);
  };

  const std::uint64_t group = q - 1;
  const auto factors = prime_factors(group);
  std::uint64_t generator = 0;
  for (std::uint64_t g = 1; g < q && generator == 0; ++g) {
    bool primitive = true;
    for (std::uint64_t r : factors) {
      std::uint64_t acc = 1, base = g;
      for (std::uint64_t e = group / r; e > 0; e >>= 1) {
        if (e & 1) acc = slow_mul(acc, base);
        base = slow_mul(base, base);
      }
      if (acc == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) generator = g;
  }
  if (generator == 0) throw std::logic_error("no primitive element found");

  t->exp.assign(2 * group, 0);
  t->log.assign(q, 0);
  std::uint64_t x = 1;
  for (std::uint64_t i = 0; i < group; ++i) {
    t->exp[i] = static_cast<Element>(x);
    t->exp[i + group] = static_cast<Element>(x);
    t->log[x] = static_cast<std::uint32_t>(i);
    x = slow_mul(x, generator);
  }

  t->neg.assign(q, 0);
  for (std::uint64_t a = 0; a < q; ++a) {
    Poly pa = from_code(a, p, k);
    for (auto& c : pa) c = (p - c) % p;
    t->neg[a] = static_cast<Element>(to_code(pa, p));
  }

  if (k > 1 && p != 2 && q <= 256) {
    t->add_table.assign(q * q, 0);
    for (std::uint64_t a = 0; a < q; ++a)
      for (std::uint64_t b = 0; b < q; ++b) {
        Poly pa = from_code(a, p, k), pb = from_code(b, p, k);
        for (std::uint32_t i = 0; i < k; ++i) pa[i] = (pa[i] + pb[i]) % p;
        t->add_table[a * q + b] = static_cast<Element>(to_code(pa, p));
      }
  }

  return Field(std::move(t));
}

Field field_of_order(std::uint64_t q) {
  if (q < 2) throw InputError("field order must be at least 2");
  const auto factors = prime_factors(q);
  if (factors.size() != 1) throw InputError("field order " + std::to_string(q) + " is not a prime power");
  std::uint32_t k = 0;
  for (std::uint64_t v = q; v > 1; v /= factors[0]) ++k;
  return make_field(static_cast<std::uint32_t>(factors[0]), k);
}

Element Field::inv(Element a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  const auto& t = *tables_;
  return t.exp[(t.q - 1 - t.log[a]) % (t.q - 1)];
}

Element Field::pow(Element a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const auto& t = *tables_;
  return t.exp[(std::uint64_t{t.log[a]} * (e % (t.q - 1))) % (t.q - 1)];
}

Element Field::add_digits(Element a, Element b) const {
  const auto& t = *tables_;
  Element out = 0, scale = 1;
  for (std::uint32_t i = 0; i < t.k; ++i) {
    out += ((a % t.p + b % t.p) % t.p) * scale;
    a /= t.p;
    b /= t.p;
    scale *= t.p;
  }
  return out;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Element>>& rows, std::size_t cols) {
  Matrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

void Matrix::append_row(std::span<const Element> values) {
  if (values.size() != cols_) throw std::invalid_argument("row length does not match column count");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::stacked(const Matrix& below) const {
  if (below.cols_ != cols_) throw std::invalid_argument("cannot stack matrices of different widths");
  Matrix out = *this;
  out.data_.insert(out.data_.end(), below.data_.begin(), below.data_.end());
  out.rows_ += below.rows_;
  return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = (*this)(r, cols[c]);
  return out;
}

EchelonBasis::EchelonBasis(const Field& field, std::size_t cols, bool track_combinations)
    : field_(field), cols_(cols), track_(track_combinations) {}

void EchelonBasis::reduce(std::vector<Element>& v, std::vector<Element>* comb) const {
  // Basis vector i is zero on the pivots of vectors 0..i-1 and has a unit
  // pivot, so a single forward pass clears every pivot column of v.
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const Element f = v[pivots_[i]];
    if (f == 0) continue;
    const Element nf = field_.neg(f);
    const auto& b = basis_[i];
    for (std::size_t c = pivots_[i]; c < cols_; ++c)
      if (b[c] != 0) v[c] = field_.fma(nf, b[c], v[c]);
    if (comb) {
      const auto& cb = combos_[i];
      for (std::size_t j = 0; j < cb.size(); ++j)
        if (cb[j] != 0) (*comb)[j] = field_.fma(nf, cb[j], (*comb)[j]);
    }
  }
}

bool EchelonBasis::insert(std::span<const Element> v) {
  if (v.size() != cols_) throw std::invalid_argument("vector length does not match basis width");
  std::vector<Element> r(v.begin(), v.end());
  std::vector<Element> comb;
  const std::size_t index = inserted_++;
  if (track_) {
    for (auto& c : combos_) c.resize(inserted_, 0);
    comb.assign(inserted_, 0);
    comb[index] = 1;
    reduce(r, &comb);
  } else {
    reduce(r, nullptr);
  }
  auto it = std::find_if(r.begin(), r.end(), [](Element e) { return e != 0; });
  if (it == r.end()) return false;
  const std::size_t pivot = static_cast<std::size_t>(it - r.begin());
  const Element scale = field_.inv(*it);
  for (auto& e : r) e = field_.mul(e, scale);
  for (auto& e : comb) e = field_.mul(e, scale);
  basis_.push_back(std::move(r));
  pivots_.push_back(pivot);
  if (track_) combos_.push_back(std::move(comb));
  return true;
}

bool EchelonBasis::contains(std::span<const Element> v) const {
  if (v.size() != cols_) throw std::invalid_argument("vector length does not match basis width");
  std::vector<Element> r(v.begin(), v.end());
  reduce(r, nullptr);
  return std::all_of(r.begin(), r.end(), [](Element e) { return e == 0; });
}

std::optional<std::vector<Element>> EchelonBasis::express(std::span<const Element> v) const {
  if (!track_) throw std::logic_error("EchelonBasis built without combination tracking");
  if (v.size() != cols_) throw std::invalid_argument("vector length does not match basis width");
  std::vector<Element> r(v.begin(), v.end());
  std::vector<Element> comb(inserted_, 0);
  reduce(r, &comb);
  if (std::any_of(r.begin(), r.end(), [](Element e) { return e != 0; })) return std::nullopt;
  // reduce() accumulated -(combination); flip the sign.
  for (auto& c : comb) c = field_.neg(c);
  return comb;
}

std::size_t rank(const Field& field, const Matrix& m) {
  EchelonBasis basis(field, m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) basis.insert(m.row(r));
  return basis.rank();
}

bool in_rowspan(const Field& field, const Matrix& m, std::span<const Element> v) {
  if (v.size() != m.cols()) throw std::invalid_argument("dimension mismatch in in_rowspan");
  EchelonBasis basis(field, m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) basis.insert(m.row(r));
  return basis.contains(v);
}

Matrix complete_basis(const Field& field, const Matrix& m, std::size_t count) {
  EchelonBasis basis(field, m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) basis.insert(m.row(r));
  if (basis.rank() + count > m.cols())
    throw InputError("cannot extend a rank-" + std::to_string(basis.rank()) + " matrix by " +
                     std::to_string(count) + " rows within " + std::to_string(m.cols()) + " columns");
  // Unit vectors span everything, so the scan always finishes inside them.
  Matrix out(0, m.cols());
  std::vector<Element> unit(m.cols(), 0);
  for (std::size_t c = 0; c < m.cols() && out.rows() < count; ++c) {
    unit[c] = 1;
    if (basis.insert(unit)) out.append_row(unit);
    unit[c] = 0;
  }
  return out;
}

Matrix nullspace(const Field& field, const Matrix& m) {
  // Reduced row echelon form, then one basis vector per free column.
  const std::size_t rows = m.rows(), cols = m.cols();
  Matrix a = m;
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && a(sel, c) == 0) ++sel;
    if (sel == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(a(sel, j), a(r, j));
    const Element s = field.inv(a(r, c));
    for (std::size_t j = 0; j < cols; ++j) a(r, j) = field.mul(a(r, j), s);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Element f = field.neg(a(i, c));
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = field.fma(f, a(r, j), a(i, j));
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  Matrix out(0, cols);
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Element> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = field.neg(a(i, free));
    out.append_row(v);
  }
  return out;
}

std::vector<Element> apply(const Field& field, const Matrix& m, std::span<const Element> x) {
  if (x.size() != m.cols()) throw std::invalid_argument("dimension mismatch in apply");
  std::vector<Element> out(m.rows(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Element acc = 0;
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0 && x[c] != 0) acc = field.fma(m(r, c), x[c], acc);
    out[r] = acc;
  }
  return out;
}

}  // namespace ccdsk::gf
