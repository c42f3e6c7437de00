// Copyright 2026 The lfu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lfu/multfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lfu/circle.hpp"
#include "lfu/error.hpp"
#include "text_util.hpp"

namespace lfu {
namespace {

constexpr std::int64_t kMaxCharacterModulus = 10'000'000;

std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t m) {
  i128 r = 1 % m;
  i128 b = a % m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return static_cast<std::int64_t>(r);
}

// One cyclic factor of (Z/qZ)*: residues mod `modulus` carry a discrete log
// in [0, order).
struct CyclicComponent {
  std::int64_t modulus;
  std::int64_t order;
  std::vector<std::int32_t> log;
};

std::int64_t smallest_primitive_root(std::int64_t p, std::int64_t pe) {
  const std::int64_t phi = pe / p * (p - 1);
  const auto factors = factorize(phi);
  for (std::int64_t g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    bool primitive = true;
    for (const auto& f : factors) {
      if (powmod(g, phi / f.p, pe) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return g;
  }
  return 1;  // only reached for pe == 2
}

std::vector<CyclicComponent> decompose_units(std::int64_t q) {
  std::vector<CyclicComponent> comps;
  for (const auto& [p, e] : factorize(q)) {
    std::int64_t pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 1) continue;  // trivial group
      if (e == 2) {
        CyclicComponent c{4, 2, std::vector<std::int32_t>(4, -1)};
        c.log[1] = 0;
        c.log[3] = 1;
        comps.push_back(std::move(c));
        continue;
      }
      // (Z/2^e)* = <-1> x <5>
      CyclicComponent sign{pe, 2, std::vector<std::int32_t>(static_cast<std::size_t>(pe), -1)};
      CyclicComponent five{pe, pe / 4, std::vector<std::int32_t>(static_cast<std::size_t>(pe), -1)};
      std::int64_t x = 1;
      for (std::int64_t b = 0; b < pe / 4; ++b) {
        sign.log[static_cast<std::size_t>(x)] = 0;
        five.log[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(b);
        const std::int64_t neg = pe - x;
        sign.log[static_cast<std::size_t>(neg)] = 1;
        five.log[static_cast<std::size_t>(neg)] = static_cast<std::int32_t>(b);
        x = x * 5 % pe;
      }
      comps.push_back(std::move(sign));
      comps.push_back(std::move(five));
      continue;
    }
    const std::int64_t order = pe / p * (p - 1);
    CyclicComponent c{pe, order, std::vector<std::int32_t>(static_cast<std::size_t>(pe), -1)};
    const std::int64_t g = smallest_primitive_root(p, pe);
    std::int64_t x = 1;
    for (std::int64_t k = 0; k < order; ++k) {
      c.log[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(k);
      x = x * g % pe;
    }
    comps.push_back(std::move(c));
  }
  return comps;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double random_sign(std::uint64_t seed, std::int64_t p) {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(p)));
  return (h & 1) ? 1.0 : -1.0;
}

// Value at p^e for the kinds evaluated by sieving.
double sieve_leaf_value(const MultFnSpec::Kind& leaf, std::int64_t p, int e) {
  if (std::holds_alternative<Liouville>(leaf)) return (e & 1) ? -1.0 : 1.0;
  if (std::holds_alternative<Moebius>(leaf)) return e >= 2 ? 0.0 : -1.0;
  if (const auto* r = std::get_if<RandomCompletelyMultiplicative>(&leaf)) {
    const double s = random_sign(r->seed, p);
    return (e & 1) ? s : 1.0;
  }
  const auto& m = std::get<PrimeMask>(leaf);
  return (p >= m.lo && p <= m.hi) ? 0.0 : 1.0;
}

bool is_sieve_leaf(const MultFnSpec::Kind& k) {
  return std::holds_alternative<Liouville>(k) || std::holds_alternative<Moebius>(k) ||
         std::holds_alternative<RandomCompletelyMultiplicative>(k) ||
         std::holds_alternative<PrimeMask>(k);
}

void flatten(const MultFnSpec& g, std::vector<const MultFnSpec::Kind*>& out) {
  if (const auto* prod = std::get_if<Product>(&g.kind())) {
    for (const auto& f : prod->factors) flatten(f, out);
    return;
  }
  if (std::holds_alternative<One>(g.kind())) return;
  out.push_back(&g.kind());
}

cplx arch_value(double t0, std::int64_t n) {
  if (t0 == 0.0 || n == 1) return {1.0, 0.0};
  const long double phase = static_cast<long double>(t0) * std::log(static_cast<long double>(n));
  return expi2pi(static_cast<double>(phase - std::floor(phase)));
}

void multiply_sieve_leaf(const MultFnSpec::Kind& leaf, std::int64_t start,
                         std::int64_t len, const SieveLimits& limits,
                         std::vector<cplx>& out) {
  const std::int64_t last = start + len - 1;
  const std::vector<std::int64_t> base = small_primes(isqrt(last));
  const std::int64_t chunk = std::max<std::int64_t>(limits.segment_size, 1024);
  std::vector<std::int64_t> rem;
  std::vector<double> val;
  for (std::int64_t a = start; a <= last; a += chunk) {
    const std::int64_t b = std::min(last, a + chunk - 1);
    const auto n = static_cast<std::size_t>(b - a + 1);
    rem.resize(n);
    val.assign(n, 1.0);
    std::iota(rem.begin(), rem.end(), a);
    for (std::size_t k = 0; k < base.size(); ++k) {
      const std::int64_t p = base[k];
      if (p * p > b) break;
      for (std::int64_t m = (a + p - 1) / p * p; m <= b; m += p) {
        const auto i = static_cast<std::size_t>(m - a);
        int e = 0;
        do {
          rem[i] /= p;
          ++e;
        } while (rem[i] % p == 0);
        val[i] *= sieve_leaf_value(leaf, p, e);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (rem[i] > 1) val[i] *= sieve_leaf_value(leaf, rem[i], 1);
      out[static_cast<std::size_t>(a - start) + i] *= val[i];
    }
  }
}

// ---- parsing -------------------------------------------------------------

[[noreturn]] void parse_fail(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::kParse,
              "bad function spec '" + std::string(text) + "': " + why);
}

// Splits "k1=v1,k2=v2" and returns the values in the order of `keys`.
std::vector<std::string_view> parse_fields(std::string_view whole,
                                           std::string_view body,
                                           std::initializer_list<std::string_view> keys) {
  std::vector<std::string_view> values(keys.size());
  std::vector<bool> seen(keys.size(), false);
  while (true) {
    const auto comma = body.find(',');
    const std::string_view item = trim(body.substr(0, comma));
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) parse_fail(whole, "expected key=value");
    const std::string_view key = trim(item.substr(0, eq));
    const std::string_view value = trim(item.substr(eq + 1));
    std::size_t slot = 0;
    for (auto k : keys) {
      if (k == key) break;
      ++slot;
    }
    if (slot == keys.size()) parse_fail(whole, "unknown key '" + std::string(key) + "'");
    if (seen[slot]) parse_fail(whole, "duplicate key '" + std::string(key) + "'");
    if (value.empty()) parse_fail(whole, "missing value for '" + std::string(key) + "'");
    seen[slot] = true;
    values[slot] = value;
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!seen[i]) parse_fail(whole, "missing key '" + std::string(*(keys.begin() + i)) + "'");
  }
  return values;
}

std::int64_t need_int(std::string_view whole, std::string_view v) {
  const auto x = parse_int64(v);
  if (!x) parse_fail(whole, "'" + std::string(v) + "' is not an integer");
  return *x;
}

MultFnSpec parse_spec(std::string_view text) {
  text = trim(text);
  if (text == "liouville") return Liouville{};
  if (text == "moebius") return Moebius{};
  if (text == "one") return One{};
  if (text.starts_with("prod(")) {
    if (!text.ends_with(")")) parse_fail(text, "unbalanced parentheses");
    std::string_view inner = text.substr(5, text.size() - 6);
    Product prod;
    int depth = 0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
      const char c = i < inner.size() ? inner[i] : '|';
      if (c == '(') ++depth;
      if (c == ')' && --depth < 0) parse_fail(text, "unbalanced parentheses");
      if (c == '|' && depth == 0) {
        const auto part = trim(inner.substr(begin, i - begin));
        if (part.empty()) parse_fail(text, "empty factor");
        prod.factors.push_back(parse_spec(part));
        begin = i + 1;
      }
    }
    if (depth != 0) parse_fail(text, "unbalanced parentheses");
    return prod;
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) parse_fail(text, "unknown kind");
  const std::string_view name = text.substr(0, colon);
  const std::string_view body = text.substr(colon + 1);
  if (name == "arch") {
    const auto v = parse_fields(text, body, {"T"});
    const auto t = parse_double(v[0]);
    if (!t || !std::isfinite(*t)) parse_fail(text, "T must be a finite real");
    return ArchimedeanTwist{*t};
  }
  if (name == "char") {
    const auto v = parse_fields(text, body, {"q", "k"});
    const std::int64_t q = need_int(text, v[0]);
    const std::int64_t k = need_int(text, v[1]);
    if (q < 1 || q > kMaxCharacterModulus) parse_fail(text, "modulus out of range");
    if (k < 0 || k >= euler_phi(q)) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "character index " + std::to_string(k) + " out of range for modulus " +
                      std::to_string(q));
    }
    return DirichletCharacter{q, k};
  }
  if (name == "rand") {
    const auto v = parse_fields(text, body, {"seed"});
    const auto s = parse_uint64(v[0]);
    if (!s) parse_fail(text, "seed must be an unsigned 64-bit integer");
    return RandomCompletelyMultiplicative{*s};
  }
  if (name == "mask") {
    const auto v = parse_fields(text, body, {"lo", "hi"});
    return PrimeMask{need_int(text, v[0]), need_int(text, v[1])};
  }
  parse_fail(text, "unknown kind '" + std::string(name) + "'");
}

}  // namespace

bool operator==(const Product& a, const Product& b) { return a.factors == b.factors; }
bool operator==(const MultFnSpec& a, const MultFnSpec& b) { return a.kind_ == b.kind_; }

bool MultFnSpec::completely_multiplicative() const {
  if (std::holds_alternative<Moebius>(kind_)) return false;
  if (const auto* prod = std::get_if<Product>(&kind_)) {
    return std::all_of(prod->factors.begin(), prod->factors.end(),
                       [](const MultFnSpec& f) { return f.completely_multiplicative(); });
  }
  return true;
}

MultFnSpec parse_multfn(std::string_view text) { return parse_spec(text); }

std::string to_string(const MultFnSpec& spec) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Liouville>) {
          return "liouville";
        } else if constexpr (std::is_same_v<K, Moebius>) {
          return "moebius";
        } else if constexpr (std::is_same_v<K, One>) {
          return "one";
        } else if constexpr (std::is_same_v<K, ArchimedeanTwist>) {
          return "arch:T=" + format_shortest(k.t0);
        } else if constexpr (std::is_same_v<K, DirichletCharacter>) {
          return "char:q=" + std::to_string(k.q) + ",k=" + std::to_string(k.index);
        } else if constexpr (std::is_same_v<K, RandomCompletelyMultiplicative>) {
          return "rand:seed=" + std::to_string(k.seed);
        } else if constexpr (std::is_same_v<K, PrimeMask>) {
          return "mask:lo=" + std::to_string(k.lo) + ",hi=" + std::to_string(k.hi);
        } else {
          std::string out = "prod(";
          for (std::size_t i = 0; i < k.factors.size(); ++i) {
            if (i) out += '|';
            out += to_string(k.factors[i]);
          }
          return out + ")";
        }
      },
      spec.kind());
}

cplx unit_root(std::int64_t num, std::int64_t den) {
  num %= den;
  if (num < 0) num += den;
  if ((static_cast<i128>(num) * 4) % den == 0) {
    switch (static_cast<int>(static_cast<i128>(num) * 4 / den)) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2 * std::numbers::pi * (static_cast<double>(num) / static_cast<double>(den));
  return {std::cos(angle), std::sin(angle)};
}

cplx expi2pi(double x) {
  const double f = x - std::floor(x);
  if (f == 0.0 || f == 1.0) return {1.0, 0.0};
  if (f == 0.5) return {-1.0, 0.0};
  if (f == 0.25) return {0.0, 1.0};
  if (f == 0.75) return {0.0, -1.0};
  const double angle = 2 * std::numbers::pi * f;
  return {std::cos(angle), std::sin(angle)};
}

CharacterTable::CharacterTable(std::int64_t q, std::int64_t index)
    : q_(q), index_(index) {
  if (q < 1 || q > kMaxCharacterModulus) {
    throw Error(ErrorCode::kInvalidArgument,
                "character modulus must lie in [1, " +
                    std::to_string(kMaxCharacterModulus) + "]");
  }
  phi_ = euler_phi(q);
  if (index < 0 || index >= phi_) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "character index " + std::to_string(index) +
                    " out of range for modulus " + std::to_string(q));
  }
  const auto comps = decompose_units(q);
  std::vector<std::int64_t> digit(comps.size());
  std::int64_t rest = index;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    digit[i] = rest % comps[i].order;
    rest /= comps[i].order;
    order_ = std::lcm(order_, comps[i].order);
  }
  phase_.assign(static_cast<std::size_t>(q), -1);
  for (std::int64_t r = 0; r < q; ++r) {
    if (std::gcd(r, q) != 1) continue;
    std::int64_t ph = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const auto lg = comps[i].log[static_cast<std::size_t>(r % comps[i].modulus)];
      ph = (ph + digit[i] * lg % comps[i].order * (order_ / comps[i].order)) % order_;
    }
    phase_[static_cast<std::size_t>(r)] = static_cast<std::int32_t>(ph);
  }
  roots_.resize(static_cast<std::size_t>(order_));
  for (std::int64_t j = 0; j < order_; ++j) roots_[static_cast<std::size_t>(j)] = unit_root(j, order_);
}

std::int64_t CharacterTable::phase(std::int64_t n) const {
  std::int64_t r = n % q_;
  if (r < 0) r += q_;
  return phase_[static_cast<std::size_t>(r)];
}

cplx CharacterTable::operator()(std::int64_t n) const {
  const std::int64_t ph = phase(n);
  if (ph < 0) return {0.0, 0.0};
  return roots_[static_cast<std::size_t>(ph)];
}

CharacterTable build_character(std::int64_t q, std::int64_t index) {
  return CharacterTable(q, index);
}

std::vector<cplx> eval_range(const MultFnSpec& g, std::int64_t start,
                             std::int64_t len, const SieveLimits& limits) {
  if (start < 1 || len < 0) {
    throw Error(ErrorCode::kInvalidArgument, "eval_range needs start >= 1, len >= 0");
  }
  if (len > 0 && start + len - 1 > limits.max_value) {
    throw Error(ErrorCode::kRangeTooLarge,
                "evaluation range exceeds configured max " + std::to_string(limits.max_value));
  }
  std::vector<cplx> out(static_cast<std::size_t>(len), cplx{1.0, 0.0});
  if (len == 0) return out;
  std::vector<const MultFnSpec::Kind*> leaves;
  flatten(g, leaves);
  for (const auto* leaf : leaves) {
    if (is_sieve_leaf(*leaf)) {
      multiply_sieve_leaf(*leaf, start, len, limits, out);
    } else if (const auto* arch = std::get_if<ArchimedeanTwist>(leaf)) {
      for (std::int64_t i = 0; i < len; ++i) {
        out[static_cast<std::size_t>(i)] *= arch_value(arch->t0, start + i);
      }
    } else {
      const auto& c = std::get<DirichletCharacter>(*leaf);
      const CharacterTable chi(c.q, c.index);
      for (std::int64_t i = 0; i < len; ++i) {
        out[static_cast<std::size_t>(i)] *= chi(start + i);
      }
    }
  }
  return out;
}

cplx eval_at(const MultFnSpec& g, std::int64_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "eval_at needs n >= 1");
  std::vector<const MultFnSpec::Kind*> leaves;
  flatten(g, leaves);
  const auto factors = factorize(n);
  cplx value{1.0, 0.0};
  for (const auto* leaf : leaves) {
    if (is_sieve_leaf(*leaf)) {
      double v = 1.0;
      for (const auto& f : factors) v *= sieve_leaf_value(*leaf, f.p, f.e);
      value *= v;
    } else if (const auto* arch = std::get_if<ArchimedeanTwist>(leaf)) {
      value *= arch_value(arch->t0, n);
    } else {
      const auto& c = std::get<DirichletCharacter>(*leaf);
      value *= CharacterTable(c.q, c.index)(n);
    }
  }
  return value;
}

cplx eval_prime(const MultFnSpec& g, std::int64_t p) {
  std::vector<const MultFnSpec::Kind*> leaves;
  flatten(g, leaves);
  cplx value{1.0, 0.0};
  for (const auto* leaf : leaves) {
    if (is_sieve_leaf(*leaf)) {
      value *= sieve_leaf_value(*leaf, p, 1);
    } else if (const auto* arch = std::get_if<ArchimedeanTwist>(leaf)) {
      value *= arch_value(arch->t0, p);
    } else {
      const auto& c = std::get<DirichletCharacter>(*leaf);
      value *= CharacterTable(c.q, c.index)(p);
    }
  }
  return value;
}

}  // namespace lfu
