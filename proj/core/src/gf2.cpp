#include "fsrpc/gf2.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <mutex>
#include <numeric>
#include <optional>

#include "fsrpc/error.hpp"

namespace fsrpc::gf2 {

namespace {

int degree_of(u128 v) {
  if (v == 0) return -1;
  u64 hi = static_cast<u64>(v >> 64);
  if (hi) return 127 - std::countl_zero(hi);
  return 63 - std::countl_zero(static_cast<u64>(v));
}

}  // namespace

int Poly::degree() const { return degree_of(bits_); }

unsigned Poly::term_count() const {
  return std::popcount(static_cast<u64>(bits_)) +
         std::popcount(static_cast<u64>(bits_ >> 64));
}

Poly mod(Poly a, Poly m) {
  if (m.is_zero()) throw Error("gf2: reduction by the zero polynomial");
  int dm = m.degree();
  u128 r = a.coeffs();
  u128 mm = m.coeffs();
  int dr = degree_of(r);
  while (dr >= dm) {
    r ^= mm << (dr - dm);
    dr = degree_of(r);
  }
  return Poly(r);
}

Poly mul_mod(Poly a, Poly b, Poly m) {
  int dm = m.degree();
  if (dm < 1) throw Error("gf2: modulus must have degree >= 1");
  u128 mm = m.coeffs();
  u128 aa = mod(a, m).coeffs();
  u128 bb = mod(b, m).coeffs();
  u128 r = 0;
  while (bb) {
    if (bb & 1) r ^= aa;
    bb >>= 1;
    aa <<= 1;  // a *= x, then reduce once; deg(aa) <= dm here
    if ((aa >> dm) & 1) aa ^= mm;
  }
  return Poly(r);
}

Poly pow_mod(Poly base, u64 exp, Poly m) {
  Poly r = mod(Poly::one(), m);
  Poly b = mod(base, m);
  while (exp) {
    if (exp & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    exp >>= 1;
  }
  return r;
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly t = mod(a, b);
    a = b;
    b = t;
  }
  return a;
}

bool is_irreducible(Poly p) {
  int d = p.degree();
  if (d < 1) return false;
  if (d > 64) throw Error("gf2: degree above 64 unsupported");
  if (d == 1) return true;  // x and x+1
  // Frobenius fixed-field test: x^(2^d) == x mod p ...
  Poly x = Poly::x();
  Poly t = mod(x, p);
  for (int i = 0; i < d; ++i) t = mul_mod(t, t, p);
  if (t != mod(x, p)) return false;
  // ... and no factor living in a proper subfield: for each prime q | d,
  // gcd(x^(2^(d/q)) - x, p) must be trivial.
  int rem = d;
  for (int q = 2; q * q <= rem; ++q) {
    if (rem % q) continue;
    while (rem % q == 0) rem /= q;
    Poly u = mod(x, p);
    for (int i = 0; i < d / q; ++i) u = mul_mod(u, u, p);
    if (gcd(u + mod(x, p), p).degree() != 0) return false;
  }
  if (rem > 1) {
    Poly u = mod(x, p);
    for (int i = 0; i < d / rem; ++i) u = mul_mod(u, u, p);
    if (gcd(u + mod(x, p), p).degree() != 0) return false;
  }
  return true;
}

namespace {

u64 group_order(int d) {  // 2^d - 1 without overflowing at d = 64
  return d == 64 ? ~u64{0} : (u64{1} << d) - 1;
}

const Factorization& cached_group_order_factors(int d) {
  static std::array<std::optional<Factorization>, 65> cache;
  static std::mutex mu;
  std::scoped_lock lock(mu);
  if (!cache[d]) cache[d] = factorize(group_order(d));
  return *cache[d];
}

}  // namespace

bool is_primitive(Poly p) {
  int d = p.degree();
  if (d < 1) return false;
  if (d > 64) throw Error("gf2: degree above 64 unsupported");
  if (!p.coeff(0)) return false;  // x | p, so x is not a unit mod p
  if (!is_irreducible(p)) return false;
  u64 order = group_order(d);
  if (pow_mod(Poly::x(), order, p) != Poly::one()) return false;
  for (const auto& [q, e] : cached_group_order_factors(d).prime_factors) {
    (void)e;
    if (pow_mod(Poly::x(), order / q, p) == Poly::one()) return false;
  }
  return true;
}

// ---- text forms ----------------------------------------------------------

namespace {

Poly parse_caret(std::string_view text) {
  u128 bits = 0;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  bool expect_term = true;
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    if (!expect_term) {
      if (text[i] != '+')
        throw ParseError("expected '+' between polynomial terms");
      ++i;
      expect_term = true;
      continue;
    }
    unsigned e = 0;
    if (text[i] == '1') {
      ++i;
      e = 0;
    } else if (text[i] == 'x' || text[i] == 'X') {
      ++i;
      if (i < text.size() && text[i] == '^') {
        ++i;
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
          throw ParseError("expected exponent after '^'");
        unsigned long v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          v = v * 10 + (text[i] - '0');
          if (v > 64) throw ParseError("polynomial degree above 64 unsupported");
          ++i;
        }
        e = static_cast<unsigned>(v);
      } else {
        e = 1;
      }
    } else {
      throw ParseError("expected polynomial term ('x^k', 'x' or '1')");
    }
    if ((bits >> e) & 1) throw ParseError("duplicate polynomial term x^" + std::to_string(e));
    bits |= u128(1) << e;
    expect_term = false;
  }
  if (expect_term) throw ParseError("empty polynomial text");
  return Poly(bits);
}

Poly parse_hex(std::string_view text) {
  std::size_t i = 2;  // past "0x"
  if (i >= text.size()) throw ParseError("empty hex polynomial");
  u128 bits = 0;
  unsigned digits = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ParseError(std::string("invalid hex digit '") + c + "'");
    bits = (bits << 4) | static_cast<unsigned>(v);
    if (++digits > 17) throw ParseError("hex polynomial longer than 65 bits");
  }
  if (degree_of(bits) > 64) throw ParseError("polynomial degree above 64 unsupported");
  return Poly(bits);
}

}  // namespace

Poly parse_poly(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  text = text.substr(b, e - b);
  if (text.empty()) throw ParseError("empty polynomial text");
  if (text == "0") return Poly::zero();  // what to_caret prints for zero
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
    return parse_hex(text);
  return parse_caret(text);
}

std::string to_caret(Poly p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int e = p.degree(); e >= 0; --e) {
    if (!p.coeff(static_cast<unsigned>(e))) continue;
    if (!out.empty()) out += '+';
    if (e == 0) out += '1';
    else if (e == 1) out += 'x';
    else out += "x^" + std::to_string(e);
  }
  return out;
}

std::string to_hex(Poly p) {
  static const char* digits = "0123456789abcdef";
  u128 v = p.coeffs();
  std::string out;
  do {
    out += digits[static_cast<unsigned>(v & 0xf)];
    v >>= 4;
  } while (v);
  out += "x0";
  std::reverse(out.begin(), out.end());
  return out;
}

// ---- integer factorization ----------------------------------------------

namespace {

u64 mul_mod_u64(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

u64 pow_mod_u64(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod_u64(r, a, m);
    a = mul_mod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(u64 v) {
  if (v < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (v == p) return true;
    if (v % p == 0) return false;
  }
  u64 d = v - 1;
  int s = std::countr_zero(d);
  d >>= s;
  // Deterministic witness set for the full 64-bit range.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = pow_mod_u64(a, d, v);
    if (x == 1 || x == v - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod_u64(x, x, v);
      if (x == v - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

namespace {

u64 pollard_rho(u64 n) {  // n composite, odd, not a prime power of interest
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    // Brent's cycle variant of rho with batched gcds.
    auto f = [&](u64 x) { return (mul_mod_u64(x, x, n) + c) % n; };
    u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      while (k < r && g == 1) {
        ys = y;
        u64 lim = std::min<u64>(128, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = f(y);
          q = mul_mod_u64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += lim;
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(u64 n, std::vector<u64>& out) {
  while (n > 1) {
    if (is_prime(n)) {
      out.push_back(n);
      return;
    }
    u64 d = pollard_rho(n);
    factor_into(d, out);
    n /= d;
  }
}

}  // namespace

Factorization factorize(u64 v) {
  if (v == 0) throw Error("factorize: value must be >= 1");
  Factorization f;
  f.value = v;
  std::vector<u64> primes;
  for (u64 p = 2; p <= 1000000 && p * p <= v; p = (p == 2 ? 3 : p + 2)) {
    while (v % p == 0) {
      primes.push_back(p);
      v /= p;
    }
  }
  if (v > 1) factor_into(v, primes);
  std::sort(primes.begin(), primes.end());
  for (std::size_t i = 0; i < primes.size();) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    f.prime_factors.emplace_back(primes[i], static_cast<unsigned>(j - i));
    i = j;
  }
  return f;
}

// ---- matrices ------------------------------------------------------------

Matrix::Matrix(unsigned n) : n_(n), rows_(n, 0) {
  if (n < 1 || n > 64) throw Error("gf2: matrix size must be in [1, 64]");
  mask_ = n == 64 ? ~u64{0} : (u64{1} << n) - 1;
}

Matrix Matrix::identity(unsigned n) {
  Matrix m(n);
  for (unsigned i = 0; i < n; ++i) m.rows_[i] = u64{1} << i;
  return m;
}

Matrix Matrix::companion(Poly p) {
  int d = p.degree();
  if (d < 1 || d > 64) throw Error("gf2: companion matrix needs 1 <= deg <= 64");
  Matrix m(static_cast<unsigned>(d));
  for (int i = 0; i + 1 < d; ++i) m.rows_[i] = u64{1} << (i + 1);
  m.rows_[d - 1] = static_cast<u64>(p.coeffs() & m.mask_);
  return m;
}

void Matrix::set(unsigned r, unsigned c, bool v) {
  if (v) rows_[r] |= u64{1} << c;
  else rows_[r] &= ~(u64{1} << c);
}

u64 Matrix::apply(u64 v) const {
  u64 out = 0;
  for (unsigned i = 0; i < n_; ++i)
    out |= static_cast<u64>(std::popcount(rows_[i] & v) & 1) << i;
  return out;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (n_ != rhs.n_) throw Error("gf2: matrix size mismatch");
  Matrix out(n_);
  for (unsigned i = 0; i < n_; ++i) {
    u64 acc = 0;
    u64 row = rows_[i];
    while (row) {
      unsigned j = static_cast<unsigned>(std::countr_zero(row));
      acc ^= rhs.rows_[j];
      row &= row - 1;
    }
    out.rows_[i] = acc;
  }
  return out;
}

Matrix Matrix::pow(u64 e) const {
  Matrix base = *this;
  Matrix r = identity(n_);
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

Poly char_poly(const Matrix& m) {
  const unsigned n = m.size();
  std::vector<u64> rows(n);
  for (unsigned i = 0; i < n; ++i) rows[i] = m.row(i);

  auto bit = [&](unsigned r, unsigned c) -> u64 { return (rows[r] >> c) & 1; };
  auto col_xor = [&](unsigned dst, unsigned src) {
    for (auto& row : rows) row ^= ((row >> src) & 1) << dst;
  };
  auto col_swap = [&](unsigned a, unsigned b) {
    for (auto& row : rows) {
      u64 x = ((row >> a) ^ (row >> b)) & 1;
      row ^= (x << a) | (x << b);
    }
  };

  // Similarity reduction to upper Hessenberg form. Row op row_b ^= row_a is
  // paired with col_a ^= col_b so the transform stays a similarity.
  for (unsigned k = 0; k + 2 < n; ++k) {
    unsigned pivot = n;
    for (unsigned r = k + 1; r < n; ++r)
      if (bit(r, k)) {
        pivot = r;
        break;
      }
    if (pivot == n) continue;
    if (pivot != k + 1) {
      std::swap(rows[k + 1], rows[pivot]);
      col_swap(k + 1, pivot);
    }
    for (unsigned r = k + 2; r < n; ++r)
      if (bit(r, k)) {
        rows[r] ^= rows[k + 1];
        col_xor(k + 1, r);
      }
  }

  // Characteristic polynomials of the leading principal minors of the
  // Hessenberg matrix, built by the usual last-column expansion.
  std::vector<u128> p(n + 1);
  p[0] = 1;
  for (unsigned mdim = 1; mdim <= n; ++mdim) {
    u128 t = p[mdim - 1] << 1;  // x * p_{m-1}
    if (bit(mdim - 1, mdim - 1)) t ^= p[mdim - 1];
    u64 prod = 1;
    for (unsigned i = mdim - 1; i >= 1; --i) {
      prod &= bit(i, i - 1);
      if (!prod) break;
      if (bit(i - 1, mdim - 1)) t ^= p[i - 1];
    }
    p[mdim] = t;
  }
  return Poly(p[n]);
}

}  // namespace fsrpc::gf2
