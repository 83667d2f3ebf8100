#include "psodkit/root_index.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "psodkit/error.hpp"

namespace psodkit {

namespace {

// Largest factorial level we are willing to search for a denominator.
constexpr unsigned kMaxFormLevel = 10000;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

mpz_class parse_integer(const std::string& text) {
  if (text.empty()) throw InputError("empty integer");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw InputError("malformed integer '" + text + "'");
  for (std::size_t i = start; i < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw InputError("malformed integer '" + text + "'");
  return mpz_class(text[0] == '+' ? text.substr(1) : text, 10);
}

// Minimal n >= 2 such that d | n!.
unsigned level_of_denominator(const mpz_class& d) {
  mpz_class f = 2;
  unsigned n = 2;
  while (f % d != 0) {
    ++n;
    if (n > kMaxFormLevel) throw ResourceError("factorial level of denominator " + d.get_str() + " is too large");
    f *= n;
  }
  return n;
}

unsigned long long factorial_u64(unsigned n) {
  unsigned long long f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

// <=!-rank of -p/n! for machine-sized values.
unsigned long long bang_rank_u64(unsigned long long p, unsigned n) {
  unsigned long long rank = 0;
  for (unsigned m = n; m >= 2; --m) {
    const unsigned long long s = p % m;
    rank += (m - 1 - s) * factorial_u64(m - 1);
    p /= m;
  }
  return rank;
}

// Minimal level of -p/n! (p in Z_{n!}).
unsigned level_u64(unsigned long long p, unsigned n) {
  unsigned level = n;
  while (level > 2 && p % level == 0) {
    p /= level;
    --level;
  }
  return level;
}

Residue residue_at(unsigned long long p, unsigned long long denom) {
  return Residue(-mpz_class(static_cast<unsigned long>(p)), mpz_class(static_cast<unsigned long>(denom)));
}

void check_size(std::size_t n, const Caps& caps, const char* what) {
  if (n > caps.max_preorder)
    throw ResourceError(std::string(what) + ": " + std::to_string(n) + " elements exceed the cap of " +
                        std::to_string(caps.max_preorder));
}

// Number of k-tuples over `base` letters, saturating at limit + 1.
std::size_t tuple_count(std::size_t base, unsigned k, std::size_t limit) {
  std::size_t n = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (base != 0 && n > (limit + 1) / base) return limit + 1;
    n *= base;
  }
  return n;
}

// Index vectors of all k-tuples over {0, ..., base-1}, lexicographic.
std::vector<std::vector<unsigned>> index_tuples(unsigned base, unsigned k) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(k, 0);
  if (k > 0 && base == 0) return out;
  while (true) {
    out.push_back(cur);
    unsigned pos = k;
    while (pos > 0) {
      --pos;
      if (++cur[pos] < base) break;
      cur[pos] = 0;
      if (pos == 0) return out;
    }
    if (k == 0) return out;
  }
}

// Characters of one block, with the data needed to compare them quickly.
struct BlockElement {
  std::size_t block;
  unsigned codim;
  unsigned level;                    // 0 for standard-order blocks
  std::vector<unsigned long long> key;  // per-component position in the block order
  unsigned long long grade;
  std::string label;
};

bool dominated(const BlockElement& a, const BlockElement& b) {
  for (std::size_t i = 0; i < a.key.size(); ++i)
    if (a.key[i] > b.key[i]) return false;
  return true;
}

FinitePreorder assemble(std::vector<BlockElement> elems, bool totalize) {
  std::vector<std::string> labels;
  labels.reserve(elems.size());
  for (const auto& e : elems) labels.push_back(e.label);
  return FinitePreorder::from_predicate(std::move(labels), [&](std::size_t i, std::size_t j) {
    const auto& a = elems[i];
    const auto& b = elems[j];
    if (a.codim != b.codim) return a.codim > b.codim;
    if (a.level != b.level) return a.level > b.level;
    return totalize ? a.grade <= b.grade : dominated(a, b);
  });
}

std::vector<Residue> starred_letters(unsigned long r) { return zr_elements(r, true); }

std::vector<BlockElement> standard_block(std::size_t block, const std::string& name, unsigned codim,
                                         unsigned long r) {
  std::vector<BlockElement> out;
  const auto letters = starred_letters(r);
  for (const auto& idx : index_tuples(static_cast<unsigned>(letters.size()), codim)) {
    CharTuple chi;
    std::vector<unsigned long long> key;
    unsigned long long grade = 0;
    for (auto i : idx) {
      chi.push_back(letters[i]);
      key.push_back(i);
      grade += i;
    }
    out.push_back({block, codim, 0, std::move(key), grade, character_label(name, chi)});
  }
  return out;
}

}  // namespace

Residue::Residue(mpz_class num, mpz_class den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ <= 0) throw InputError("residue: denominator must be positive");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
  if (num_ > 0 || -num_ >= den_)
    throw InputError("residue " + num_.get_str() + "/" + den_.get_str() + " is outside (-1, 0]");
}

Residue Residue::parse(std::string_view text) {
  const auto t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string::npos) return Residue(parse_integer(t), 1);
  return Residue(parse_integer(trim(t.substr(0, slash))), parse_integer(trim(t.substr(slash + 1))));
}

std::string Residue::to_string() const {
  if (num_ == 0) return "0";
  return num_.get_str() + "/" + den_.get_str();
}

std::strong_ordering operator<=>(const Residue& a, const Residue& b) {
  const mpz_class lhs = a.num_ * b.den_;
  const mpz_class rhs = b.num_ * a.den_;
  const int c = cmp(lhs, rhs);
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string to_string(const CharTuple& chi) {
  std::string out = "(";
  for (std::size_t i = 0; i < chi.size(); ++i) out += (i ? "," : "") + chi[i].to_string();
  return out + ")";
}

CharTuple parse_tuple(std::string_view text) {
  auto t = trim(text);
  if (t.empty()) throw InputError("empty character tuple");
  if (t.front() != '(') return {Residue::parse(t)};
  if (t.back() != ')') throw InputError("unterminated character tuple '" + t + "'");
  const auto body = trim(std::string_view(t).substr(1, t.size() - 2));
  CharTuple out;
  if (body.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = body.find(',', start);
    out.push_back(Residue::parse(std::string_view(body).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

mpz_class factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

FactorialForm to_factorial_form(const CharTuple& chi) {
  FactorialForm form;
  for (const auto& c : chi) form.level = std::max(form.level, level_of_denominator(c.den()));
  const mpz_class f = factorial(form.level);
  for (const auto& c : chi) form.numerators.push_back(-c.num() * (f / c.den()));
  return form;
}

CharTuple from_factorial_form(const FactorialForm& form) {
  if (form.level < 2) throw InputError("factorial form level must be at least 2");
  const mpz_class f = factorial(form.level);
  CharTuple out;
  for (const auto& p : form.numerators) {
    if (p < 0 || p >= f) throw InputError("factorial numerator out of range");
    out.emplace_back(-p, f);
  }
  return out;
}

std::string_view to_string(Ordering o) noexcept {
  switch (o) {
    case Ordering::less: return "less";
    case Ordering::equal: return "equal";
    case Ordering::greater: return "greater";
    case Ordering::incomparable: return "incomparable";
  }
  return "incomparable";
}

Ordering cmp_bang_znfact(const mpz_class& p, const mpz_class& q, unsigned level) {
  if (level < 2) throw InputError("<=!: level must be at least 2");
  const mpz_class f = factorial(level);
  if (p < 0 || p >= f || q < 0 || q >= f) throw InputError("<=!: numerator outside Z_{n!}");
  mpz_class a = p;
  mpz_class b = q;
  // Compare images in Z_m (standard order: larger residue s means -s/m is
  // smaller), then recurse on the fiber coordinate floor(p/m) at level m-1.
  for (unsigned m = level; m >= 2; --m) {
    const mpz_class s = a % m;
    const mpz_class t = b % m;
    if (s != t) return s > t ? Ordering::less : Ordering::greater;
    a /= m;
    b /= m;
  }
  return Ordering::equal;
}

mpz_class bang_rank(const mpz_class& p, unsigned level) {
  if (level < 2) throw InputError("<=!: level must be at least 2");
  if (p < 0 || p >= factorial(level)) throw InputError("<=!: numerator outside Z_{n!}");
  mpz_class a = p;
  mpz_class rank = 0;
  for (unsigned m = level; m >= 2; --m) {
    const mpz_class s = a % m;
    rank += (m - 1 - s) * factorial(m - 1);
    a /= m;
  }
  return rank;
}

Ordering cmp_bang(const CharTuple& a, const CharTuple& b) {
  if (a.size() != b.size()) throw InputError("<=!: tuples have different lengths");
  const auto fa = to_factorial_form(a);
  const auto fb = to_factorial_form(b);
  if (fa.level != fb.level) return fa.level > fb.level ? Ordering::less : Ordering::greater;
  bool all_le = true;
  bool all_ge = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    switch (cmp_bang_znfact(fa.numerators[i], fb.numerators[i], fa.level)) {
      case Ordering::less: all_ge = false; break;
      case Ordering::greater: all_le = false; break;
      default: break;
    }
  }
  if (all_le && all_ge) return Ordering::equal;
  if (all_le) return Ordering::less;
  if (all_ge) return Ordering::greater;
  return Ordering::incomparable;
}

std::vector<Residue> zr_elements(unsigned long r, bool starred) {
  if (r == 0) throw InputError("Z_r: r must be at least 1");
  std::vector<Residue> out;
  for (unsigned long j = r - 1; j >= 1; --j) out.emplace_back(-mpz_class(j), mpz_class(r));
  if (!starred) out.emplace_back();
  return out;
}

std::string character_label(const std::string& block, const CharTuple& chi) {
  return block + ":" + to_string(chi);
}

FinitePreorder build_zkr(unsigned k, unsigned long r, bool starred, const Caps& caps) {
  const auto letters = zr_elements(r, starred);
  check_size(tuple_count(letters.size(), k, caps.max_preorder), caps, "Z_{k,r}");
  const auto tuples = index_tuples(static_cast<unsigned>(letters.size()), k);
  std::vector<std::string> labels;
  for (const auto& idx : tuples) {
    CharTuple chi;
    for (auto i : idx) chi.push_back(letters[i]);
    labels.push_back(to_string(chi));
  }
  return FinitePreorder::from_predicate(std::move(labels), [&](std::size_t i, std::size_t j) {
    for (unsigned c = 0; c < k; ++c)
      if (tuples[i][c] > tuples[j][c]) return false;
    return true;
  });
}

FinitePreorder build_zdr(unsigned max_codim, unsigned long r, bool totalize, const Caps& caps) {
  if (r == 0) throw InputError("Z_{D,r}: r must be at least 1");
  std::size_t total = 0;
  for (unsigned k = 0; k <= max_codim; ++k) total += tuple_count(r - 1, k, caps.max_preorder);
  check_size(total, caps, "Z_{D,r}");
  std::vector<BlockElement> elems;
  for (unsigned k = max_codim + 1; k-- > 0;) {
    auto block = standard_block(max_codim - k, std::to_string(k), k, r);
    elems.insert(elems.end(), block.begin(), block.end());
  }
  return assemble(std::move(elems), totalize);
}

namespace {

std::vector<std::size_t> codim_order(const std::vector<StratumBlock>& strata) {
  std::vector<std::size_t> order(strata.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return strata[a].codim > strata[b].codim; });
  return order;
}

}  // namespace

FinitePreorder build_zsdr(const std::vector<StratumBlock>& strata, unsigned long r, bool totalize,
                          const Caps& caps) {
  if (r == 0) throw InputError("Z_{S(D),r}: r must be at least 1");
  std::size_t total = 0;
  for (const auto& s : strata) total += tuple_count(r - 1, s.codim, caps.max_preorder);
  check_size(total, caps, "Z_{S(D),r}");
  std::vector<BlockElement> elems;
  for (auto b : codim_order(strata)) {
    auto block = standard_block(b, strata[b].id, strata[b].codim, r);
    elems.insert(elems.end(), block.begin(), block.end());
  }
  return assemble(std::move(elems), totalize);
}

namespace {

struct BangCharacter {
  CharTuple chi;
  unsigned level;
  std::vector<unsigned long long> ranks;
};

std::vector<BangCharacter> bang_characters(unsigned k, unsigned max_level, unsigned long exclude_prime,
                                           const Caps& caps) {
  if (max_level < 2) throw InputError("enumerate_characters: level must be at least 2");
  if (max_level > caps.max_level || max_level > 20)
    throw ResourceError("enumerate_characters: level " + std::to_string(max_level) + " exceeds the cap");
  const unsigned long long f = factorial_u64(max_level);
  std::vector<unsigned long long> letters;
  for (unsigned long long p = 1; p < f; ++p) {
    if (exclude_prime != 0) {
      const unsigned long long g = std::gcd(p, f);
      if ((f / g) % exclude_prime == 0) continue;
    }
    letters.push_back(p);
  }
  if (tuple_count(letters.size(), k, caps.max_enumeration) > caps.max_enumeration)
    throw ResourceError("enumerate_characters: more than " + std::to_string(caps.max_enumeration) + " characters");
  std::vector<BangCharacter> out;
  for (const auto& idx : index_tuples(static_cast<unsigned>(letters.size()), k)) {
    BangCharacter c;
    c.level = 2;
    for (auto i : idx) c.level = std::max(c.level, level_u64(letters[i], max_level));
    const unsigned long long shrink = f / factorial_u64(c.level);
    for (auto i : idx) {
      c.chi.push_back(residue_at(letters[i], f));
      c.ranks.push_back(bang_rank_u64(letters[i] / shrink, c.level));
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const BangCharacter& a, const BangCharacter& b) {
    if (a.level != b.level) return a.level > b.level;
    return a.ranks < b.ranks;
  });
  return out;
}

}  // namespace

std::vector<CharTuple> enumerate_characters(unsigned k, unsigned max_level, const Caps& caps) {
  std::vector<CharTuple> out;
  for (auto& c : bang_characters(k, max_level, 0, caps)) out.push_back(std::move(c.chi));
  return out;
}

std::vector<CharTuple> enumerate_characters_coprime(unsigned k, unsigned max_level, unsigned long prime,
                                                    const Caps& caps) {
  std::vector<CharTuple> out;
  for (auto& c : bang_characters(k, max_level, prime, caps)) out.push_back(std::move(c.chi));
  return out;
}

FinitePreorder build_bang_index(const std::vector<StratumBlock>& strata, unsigned max_level, bool totalize,
                                const Caps& caps, unsigned long exclude_prime) {
  std::vector<BlockElement> elems;
  for (auto b : codim_order(strata)) {
    const auto& s = strata[b];
    if (s.codim == 0) {
      elems.push_back({b, 0, 0, {}, 0, character_label(s.id, {})});
      continue;
    }
    for (auto& c : bang_characters(s.codim, max_level, exclude_prime, caps)) {
      unsigned long long grade = 0;
      for (auto r : c.ranks) grade += r;
      elems.push_back({b, s.codim, c.level, c.ranks, grade, character_label(s.id, c.chi)});
    }
    check_size(elems.size(), caps, "truncated <=! index");
  }
  return assemble(std::move(elems), totalize);
}

}  // namespace psodkit
