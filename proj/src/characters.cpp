#include "atwist/characters.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <numbers>
#include <stdexcept>

namespace atw {

namespace {

i64 pow_mod(i64 b, i64 e, i64 m) {
  i64 r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

i64 primitive_root(i64 pe, i64 p) {
  // smallest primitive root mod p^e, p odd prime
  i64 phi = euler_phi(pe);
  std::vector<i64> prime_divs;
  for (const auto& pp : factorize(phi).factors) prime_divs.push_back(pp.p);
  for (i64 g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (i64 qd : prime_divs)
      if (pow_mod(g, phi / qd, pe) == 1) { ok = false; break; }
    if (ok) return g;
  }
  throw std::logic_error("primitive_root: none found");
}

// CRT-lift x mod pe to a residue mod m that is 1 mod all other prime powers
i64 crt_lift(i64 x, i64 pe, i64 m) {
  i64 rest = m / pe;
  if (rest == 1) return x % m;
  // solve y == x (pe), y == 1 (rest)
  i64 t = mul_mod(((x - 1) % pe + pe) % pe, mod_inv(rest, pe), pe);
  return (1 + mul_mod(t, rest, m)) % m;
}

}  // namespace

std::shared_ptr<const UnitGroup> UnitGroup::get(i64 modulus) {
  static std::mutex mu;
  static std::map<i64, std::shared_ptr<const UnitGroup>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(modulus);
  if (it != cache.end()) return it->second;

  if (modulus < 1) throw std::domain_error("UnitGroup: modulus must be >= 1");
  auto g = std::make_shared<UnitGroup>();
  g->modulus = modulus;
  for (const auto& pp : factorize(modulus).factors) {
    i64 pe = 1;
    for (int j = 0; j < pp.e; ++j) pe *= pp.p;
    if (pp.p == 2) {
      if (pp.e == 1) continue;  // trivial group
      if (pp.e == 2) {
        g->gen.push_back(crt_lift(3, 4, modulus));
        g->ord.push_back(2);
      } else {
        g->gen.push_back(crt_lift(pe - 1, pe, modulus));  // -1
        g->ord.push_back(2);
        g->gen.push_back(crt_lift(5, pe, modulus));
        g->ord.push_back(pe / 4);
      }
    } else {
      g->gen.push_back(crt_lift(primitive_root(pe, pp.p), pe, modulus));
      g->ord.push_back(euler_phi(pe));
    }
  }
  // discrete logs by direct enumeration of the generated group
  g->dlog.assign(modulus, {});
  size_t k = g->gen.size();
  std::vector<i64> exps(k, 0);
  i64 total = 1;
  for (i64 o : g->ord) total *= o;
  i64 cur = 1 % modulus;
  for (i64 count = 0; count < total; ++count) {
    g->dlog[cur] = exps;
    // increment exponent vector, multiply cur accordingly
    for (size_t i = 0; i < k; ++i) {
      exps[i]++;
      cur = mul_mod(cur, g->gen[i], modulus);
      if (exps[i] < g->ord[i]) break;
      // wrap: multiply remaining (ord-1) steps back to identity on this axis
      exps[i] = 0;
      // cur already advanced by gen[i]^ord[i] == 1, nothing to undo
    }
  }
  if (modulus == 1) g->dlog[0] = {};  // the single residue 0 represents 1 mod 1
  cache[modulus] = g;
  return g;
}

DirichletCharacter::DirichletCharacter() : group_(UnitGroup::get(1)) { finish_init(); }

DirichletCharacter::DirichletCharacter(i64 modulus, std::vector<i64> exps)
    : group_(UnitGroup::get(modulus)), exps_(std::move(exps)) {
  if (exps_.size() != group_->ord.size())
    throw std::invalid_argument("DirichletCharacter: exponent vector has wrong length");
  for (size_t i = 0; i < exps_.size(); ++i)
    exps_[i] = ((exps_[i] % group_->ord[i]) + group_->ord[i]) % group_->ord[i];
  finish_init();
}

void DirichletCharacter::finish_init() {
  order_ = 1;
  for (size_t i = 0; i < exps_.size(); ++i) {
    i64 oi = group_->ord[i] / std::gcd(exps_[i], group_->ord[i]);
    order_ = lcm(order_, oi);
  }
  // conductor: smallest f | modulus with chi trivial on units == 1 mod f
  conductor_ = modulus();
  for (i64 f : divisors(modulus())) {
    bool factors_through = true;
    for (i64 u = 1; u < modulus() && factors_through; ++u) {
      if (std::gcd(u, modulus()) != 1) continue;
      if (u % f != 1 % f) continue;
      i64 num;
      exponent(u, &num);
      if (num != 0) factors_through = false;
    }
    if (modulus() == 1) factors_through = true;
    if (factors_through) { conductor_ = f; break; }
  }
}

bool DirichletCharacter::is_trivial() const {
  for (i64 e : exps_)
    if (e != 0) return false;
  return true;
}

int DirichletCharacter::parity() const {
  i64 num;
  if (modulus() == 1) return 1;
  exponent(modulus() - 1, &num);  // -1 mod modulus
  return num == 0 ? 1 : -1;
}

bool DirichletCharacter::exponent(i64 m, i64* num_out) const {
  *num_out = 0;
  i64 mod = modulus();
  if (mod == 1) return true;
  i64 mm = ((m % mod) + mod) % mod;
  if (std::gcd(mm, mod) != 1) return false;
  const auto& dl = group_->dlog[mm];
  i64 num = 0;
  for (size_t i = 0; i < exps_.size(); ++i) {
    // component angle exps_[i]*dl[i]/ord[i], reduced so its denominator divides order_
    i64 oi = group_->ord[i];
    i64 g = std::gcd(exps_[i], oi);
    i64 den = oi / g;                       // divides order_
    i64 ni = ((exps_[i] / g) * dl[i]) % den;
    num = (num + ni * (order_ / den)) % order_;
  }
  *num_out = num;
  return true;
}

cplx DirichletCharacter::eval(i64 m) const {
  i64 num;
  if (!exponent(m, &num)) return {0.0, 0.0};
  double theta = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(order_);
  return {std::cos(theta), std::sin(theta)};
}

DirichletCharacter DirichletCharacter::conj() const {
  std::vector<i64> e = exps_;
  for (size_t i = 0; i < e.size(); ++i) e[i] = (group_->ord[i] - e[i]) % group_->ord[i];
  return DirichletCharacter(modulus(), std::move(e));
}

DirichletCharacter DirichletCharacter::square() const {
  std::vector<i64> e = exps_;
  for (size_t i = 0; i < e.size(); ++i) e[i] = (2 * e[i]) % group_->ord[i];
  return DirichletCharacter(modulus(), std::move(e));
}

DirichletCharacter DirichletCharacter::primitive_part() const {
  i64 f = conductor_;
  if (f == modulus()) return *this;
  auto gf = UnitGroup::get(f);
  // match values on the generators of (Z/f)^x, shifting each generator to a
  // representative coprime to the full modulus
  std::vector<i64> e(gf->ord.size(), 0);
  for (size_t i = 0; i < gf->gen.size(); ++i) {
    i64 rep = gf->gen[i];
    while (std::gcd(rep, modulus()) != 1) rep += f;
    i64 num;
    exponent(rep, &num);
    // chi_*(gen) = e(num/order_); gen has order gf->ord[i]; exponent e[i] satisfies
    // e[i]/gf->ord[i] == num/order_  (mod 1)
    e[i] = (num * gf->ord[i] / order_) % gf->ord[i];
    if (num * gf->ord[i] % order_ != 0)
      throw std::logic_error("primitive_part: inconsistent value order");
  }
  return DirichletCharacter(f, std::move(e));
}

i64 DirichletCharacter::index() const {
  i64 idx = 0;
  for (size_t i = 0; i < exps_.size(); ++i) idx = idx * group_->ord[i] + exps_[i];
  return idx;
}

std::vector<DirichletCharacter> enumerate_characters(i64 n) {
  auto g = UnitGroup::get(n);
  i64 total = 1;
  for (i64 o : g->ord) total *= o;
  std::vector<DirichletCharacter> out;
  out.reserve(total);
  for (i64 idx = 0; idx < total; ++idx) out.push_back(character_by_index(n, idx));
  return out;
}

DirichletCharacter character_by_index(i64 n, i64 index) {
  auto g = UnitGroup::get(n);
  std::vector<i64> e(g->ord.size(), 0);
  for (size_t i = e.size(); i-- > 0;) {
    e[i] = index % g->ord[i];
    index /= g->ord[i];
  }
  return DirichletCharacter(n, std::move(e));
}

cplx gauss_sum(const DirichletCharacter& chi) {
  i64 r = chi.modulus();
  if (r == 1) return 1.0;
  cplx tot = 0.0;
  for (i64 u = 1; u < r; ++u) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(u) / static_cast<double>(r);
    tot += chi.eval(u) * cplx{std::cos(theta), std::sin(theta)};
  }
  return tot;
}

cplx generalized_gauss_sum_brute(const DirichletCharacter& chi, i64 m) {
  i64 r = chi.modulus();
  if (r == 1) return 1.0;
  cplx tot = 0.0;
  for (i64 u = 0; u < r; ++u) {
    if (std::gcd(u, r) != 1) continue;
    i64 e = ((m % r) * u) % r;
    double theta = 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(r);
    tot += chi.eval(u) * cplx{std::cos(theta), std::sin(theta)};
  }
  return tot;
}

cplx generalized_gauss_sum(const DirichletCharacter& chi, i64 m) {
  i64 r = chi.modulus();
  if (r == 1) return 1.0;
  DirichletCharacter chi_star = chi.primitive_part();
  i64 n = chi_star.modulus();
  i64 r_n = 1;
  for (const auto& pp : factorize(r).factors)
    if (n % pp.p != 0) r_n *= pp.p;
  i64 r2 = r / (n * r_n);
  if (((m % r2) + r2) % r2 != 0) return 0.0;
  i64 m1 = m / r2;  // sign-safe: r2 | m exactly
  cplx tau = gauss_sum(chi_star);
  i64 G = std::gcd(((m1 % r_n) + r_n) % r_n, r_n);  // == gcd(m1, r_n); gcd(0, r_n) = r_n
  cplx sum = 0.0;
  for (i64 g : divisors(G))
    sum += static_cast<double>(g) * static_cast<double>(moebius(r_n / g)) *
           chi_star.eval(r_n / g) * chi_star.conj().eval(m1 / g);
  return static_cast<double>(r2) * tau * sum;
}

}  // namespace atw
