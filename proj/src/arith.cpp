#include "markoff/arith.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace markoff {

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 m) {
  // Extended Euclid on signed 128-bit accumulators.
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    __int128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw std::invalid_argument("invmod: argument not invertible");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is exact for every 64-bit integer.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> primes_up_to(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  std::vector<bool> sieve(n + 1, true);
  sieve[0] = sieve[1] = false;
  for (u64 i = 2; i * i <= n; ++i) {
    if (!sieve[i]) continue;
    for (u64 j = i * i; j <= n; j += i) sieve[j] = false;
  }
  for (u64 i = 2; i <= n; ++i) {
    if (sieve[i]) out.push_back(i);
  }
  return out;
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
  std::vector<u64> out;
  if (hi < lo) return out;
  for (u64 q : primes_up_to(hi)) {
    if (q >= lo) out.push_back(q);
  }
  return out;
}

PrimeField::PrimeField(u64 p) : p_(p) {
  if (p < 5 || !is_prime(p)) {
    throw std::invalid_argument("PrimeField: p must be a prime >= 5, got " + std::to_string(p));
  }
}

u64 PrimeField::reduce(i64 v) const {
  i64 m = static_cast<i64>(p_);
  i64 r = v % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

u64 PrimeField::add(u64 a, u64 b) const {
  u64 s = (a % p_) + (b % p_);
  return s >= p_ ? s - p_ : s;
}

u64 PrimeField::sub(u64 a, u64 b) const {
  a %= p_;
  b %= p_;
  return a >= b ? a - b : a + p_ - b;
}

u64 PrimeField::neg(u64 a) const {
  a %= p_;
  return a == 0 ? 0 : p_ - a;
}

int legendre(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  u64 e = powmod(a, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

std::optional<u64> sqrt_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (legendre(a, p) != 1) return std::nullopt;

  u64 r;
  if (p % 4 == 3) {
    r = powmod(a, (p + 1) / 4, p);
  } else {
    // Tonelli-Shanks.  p - 1 = q * 2^s with q odd.
    u64 q = p - 1;
    u32 s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    u64 z = 2;
    while (legendre(z, p) != -1) ++z;
    u64 m = s;
    u64 c = powmod(z, q, p);
    u64 t = powmod(a, q, p);
    r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
      u64 i = 0;
      u64 t2 = t;
      while (t2 != 1) {
        t2 = mulmod(t2, t2, p);
        ++i;
      }
      u64 b = c;
      for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
      m = i;
      c = mulmod(b, b, p);
      t = mulmod(t, c, p);
      r = mulmod(r, b, p);
    }
  }
  return std::min(r, p - r);
}

i64 shifted_square_sum(u64 s, u64 p) {
  s %= p;
  i64 total = 0;
  for (u64 z = 0; z < p; ++z) {
    u64 zz = mulmod(z, z, p);
    u64 v = zz >= s ? zz - s : zz + p - s;
    total += legendre(v, p);
  }
  return total;
}

u32 Factorization::exponent_of(u64 q) const {
  for (const auto& [prime, e] : factors) {
    if (prime == q) return e;
  }
  return 0;
}

Factorization factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
  Factorization f;
  f.n = n;
  u64 rem = n;
  for (u64 d = 2; d * d <= rem; d += (d == 2 ? 1 : 2)) {
    if (rem % d != 0) continue;
    u32 e = 0;
    while (rem % d == 0) {
      rem /= d;
      ++e;
    }
    f.factors.emplace_back(d, e);
  }
  if (rem > 1) f.factors.emplace_back(rem, 1);
  return f;
}

std::vector<u64> divisors_of(const Factorization& f) {
  std::vector<u64> divs{1};
  for (const auto& [q, e] : f.factors) {
    std::size_t base = divs.size();
    u64 qe = 1;
    for (u32 i = 1; i <= e; ++i) {
      qe *= q;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * qe);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

}  // namespace markoff
