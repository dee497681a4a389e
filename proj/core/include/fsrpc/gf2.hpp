#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fsrpc::gf2 {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Polynomial over GF(2). Coefficient of x^i is bit i of the backing word, so
// 0x171 is x^8+x^6+x^5+x^4+1. Storage is 128 bits wide to leave headroom for
// intermediate shifts; the predicates below only accept degrees up to 64.
class Poly {
public:
  constexpr Poly() = default;
  explicit constexpr Poly(u128 coeffs) : bits_(coeffs) {}

  static constexpr Poly zero() { return Poly(0); }
  static constexpr Poly one() { return Poly(1); }
  static constexpr Poly x() { return Poly(2); }
  // x^e (e <= 127)
  static constexpr Poly monomial(unsigned e) { return Poly(u128(1) << e); }

  constexpr u128 coeffs() const { return bits_; }
  constexpr bool is_zero() const { return bits_ == 0; }
  constexpr bool coeff(unsigned i) const { return i < 128 && ((bits_ >> i) & 1); }

  // Degree of the zero polynomial is the sentinel -1.
  int degree() const;
  unsigned term_count() const;

  friend constexpr Poly operator+(Poly a, Poly b) { return Poly(a.bits_ ^ b.bits_); }
  friend constexpr bool operator==(Poly a, Poly b) { return a.bits_ == b.bits_; }
  friend constexpr bool operator!=(Poly a, Poly b) { return a.bits_ != b.bits_; }

private:
  u128 bits_ = 0;
};

// a mod m. Requires deg(m) >= 0 (m nonzero).
Poly mod(Poly a, Poly m);

// a*b mod m, shift-and-reduce so intermediates never outgrow the storage.
// Requires deg(m) >= 1.
Poly mul_mod(Poly a, Poly b, Poly m);

// base^exp mod m by square-and-multiply. exp is an ordinary integer exponent.
Poly pow_mod(Poly base, u64 exp, Poly m);

Poly gcd(Poly a, Poly b);

// Irreducibility over GF(2) for 1 <= deg <= 64: checks x^(2^d) == x (mod p)
// and gcd(x^(2^(d/q)) - x, p) = 1 for every prime q dividing d.
bool is_irreducible(Poly p);

// Primitivity for 1 <= deg <= 64: irreducible and ord(x) = 2^d - 1, i.e.
// x^(2^d-1) == 1 (mod p) and x^((2^d-1)/q) != 1 for every prime q | 2^d-1.
// Constant polynomials and the zero polynomial are not primitive.
bool is_primitive(Poly p);

// Accepts "x^8+x^6+x^5+x^4+1" (terms x^k, x, 1, '+'-separated, spaces ok)
// or a hex literal "0x171" of the coefficient bits. Degree cap 64.
Poly parse_poly(std::string_view text);
std::string to_caret(Poly p);  // "x^4+x+1"; "1"; "0"
std::string to_hex(Poly p);    // "0x13"

struct Factorization {
  u64 value = 0;
  // (prime, exponent), primes strictly ascending, each exponent >= 1.
  std::vector<std::pair<u64, unsigned>> prime_factors;
};

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(u64 v);

// Trial division up to 1e6, then Brent-variant Pollard rho on what remains.
// Requires v >= 1; factorize(1) has an empty factor list.
Factorization factorize(u64 v);

// Square bit matrix over GF(2), n <= 64, stored as one row mask per row.
// apply() treats a state word as a column vector with component j at bit j.
class Matrix {
public:
  explicit Matrix(unsigned n);
  static Matrix identity(unsigned n);
  // Companion matrix of a monic p of degree n (1 <= n <= 64): ones on the
  // superdiagonal, bottom row = coefficients of p below x^n. Its
  // characteristic polynomial is p itself.
  static Matrix companion(Poly p);

  unsigned size() const { return n_; }
  u64 row(unsigned r) const { return rows_[r]; }
  void set_row(unsigned r, u64 bits) { rows_[r] = bits & mask_; }
  bool at(unsigned r, unsigned c) const { return (rows_[r] >> c) & 1; }
  void set(unsigned r, unsigned c, bool v);

  u64 apply(u64 v) const;  // M * v
  Matrix operator*(const Matrix& rhs) const;
  Matrix pow(u64 e) const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

private:
  unsigned n_;
  u64 mask_;
  std::vector<u64> rows_;
};

// Characteristic polynomial det(xI + M) via similarity reduction to upper
// Hessenberg form and the standard minor recurrence (signs vanish in
// characteristic 2). Always monic of degree n.
Poly char_poly(const Matrix& m);

}  // namespace fsrpc::gf2
