#include "surfbound/group_spec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "surfbound/errors.hpp"

namespace surfbound {

namespace {

long mod_pow(long base, long exp, long mod) {
  long acc = 1 % mod;
  base %= mod;
  if (base < 0) base += mod;
  while (exp > 0) {
    if (exp & 1) acc = acc * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return acc;
}

// 2x2 matrix over Z/m, row-major.
using Mat2 = std::array<long, 4>;

Mat2 mat_mul(const Mat2& a, const Mat2& b, long m) {
  return {(a[0] * b[0] + a[1] * b[2]) % m, (a[0] * b[1] + a[1] * b[3]) % m,
          (a[2] * b[0] + a[3] * b[2]) % m, (a[2] * b[1] + a[3] * b[3]) % m};
}

std::string mat_label(const Mat2& a) {
  return "[[" + std::to_string(a[0]) + "," + std::to_string(a[1]) + "],[" +
         std::to_string(a[2]) + "," + std::to_string(a[3]) + "]]";
}

// (Z/m)^2 : <mats> where mats is a list of matrices closed under product
// with mats[0] the identity.  Elements are (vector, matrix-index).
FiniteGroup module_semidirect(long m, const std::vector<Mat2>& mats,
                              const std::string& provenance, const ConstructionCaps& caps) {
  const long vcount = m * m;
  const long n = vcount * static_cast<long>(mats.size());
  if (n > caps.order_cap)
    fail(errc::size_cap, "order " + std::to_string(n) + " exceeds cap");
  std::vector<int> mat_index_of_product(mats.size() * mats.size());
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (std::size_t j = 0; j < mats.size(); ++j) {
      Mat2 prod = mat_mul(mats[i], mats[j], m);
      auto it = std::find(mats.begin(), mats.end(), prod);
      if (it == mats.end()) fail(errc::bad_input, "matrix list is not closed under product");
      mat_index_of_product[i * mats.size() + j] = static_cast<int>(it - mats.begin());
    }
  }
  auto index = [&](long vx, long vy, long k) {
    return static_cast<int>((vx * m + vy) * static_cast<long>(mats.size()) + k);
  };
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (long x1 = 0; x1 < m; ++x1)
    for (long y1 = 0; y1 < m; ++y1)
      for (std::size_t k1 = 0; k1 < mats.size(); ++k1) {
        const Mat2& a = mats[k1];
        int row = index(x1, y1, static_cast<long>(k1));
        for (long x2 = 0; x2 < m; ++x2)
          for (long y2 = 0; y2 < m; ++y2) {
            long tx = (x1 + a[0] * x2 + a[1] * y2) % m;
            long ty = (y1 + a[2] * x2 + a[3] * y2) % m;
            for (std::size_t k2 = 0; k2 < mats.size(); ++k2)
              table[row][index(x2, y2, static_cast<long>(k2))] =
                  index(tx, ty, mat_index_of_product[k1 * mats.size() + k2]);
          }
      }
  std::vector<std::string> labels(n);
  for (long x = 0; x < m; ++x)
    for (long y = 0; y < m; ++y)
      for (std::size_t k = 0; k < mats.size(); ++k)
        labels[index(x, y, static_cast<long>(k))] =
            "((" + std::to_string(x) + "," + std::to_string(y) + ")," + mat_label(mats[k]) + ")";
  return FiniteGroup(std::move(table), std::move(labels), provenance, caps.order_cap);
}

std::vector<std::vector<int>> permutations_of(int k) {
  std::vector<int> base(k);
  for (int i = 0; i < k; ++i) base[i] = i;
  std::vector<std::vector<int>> all;
  do {
    all.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return all;
}

bool is_even_permutation(const std::vector<int>& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0;
}

std::string cycle_label(const std::vector<int>& p) {
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (seen[start] || p[start] == static_cast<int>(start)) {
      seen[start] = true;
      continue;
    }
    out += "(";
    std::size_t v = start;
    while (!seen[v]) {
      seen[v] = true;
      out += std::to_string(v);
      v = static_cast<std::size_t>(p[v]);
    }
    out += ")";
  }
  return out.empty() ? "id" : out;
}

FiniteGroup permutation_group(std::vector<std::vector<int>> perms, const std::string& provenance,
                              const ConstructionCaps& caps) {
  const int n = static_cast<int>(perms.size());
  if (n > caps.order_cap) fail(errc::size_cap, "order " + std::to_string(n) + " exceeds cap");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // product "i then j"
      std::vector<int> prod(perms[i].size());
      for (std::size_t t = 0; t < prod.size(); ++t) prod[t] = perms[j][perms[i][t]];
      auto it = std::find(perms.begin(), perms.end(), prod);
      if (it == perms.end()) fail(errc::bad_input, "permutation set not closed");
      table[i][j] = static_cast<int>(it - perms.begin());
    }
  std::vector<std::string> labels;
  labels.reserve(n);
  for (const auto& p : perms) labels.push_back(cycle_label(p));
  return FiniteGroup(std::move(table), std::move(labels), provenance, caps.order_cap);
}

}  // namespace

FiniteGroup cyclic_group(long n, const ConstructionCaps& caps) {
  if (n < 1) fail(errc::bad_input, "cyclic order must be >= 1");
  if (n > caps.order_cap) fail(errc::size_cap, "order " + std::to_string(n) + " exceeds cap");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) table[i][j] = static_cast<int>((i + j) % n);
  std::vector<std::string> labels;
  for (long i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return FiniteGroup(std::move(table), std::move(labels), "C " + std::to_string(n),
                     caps.order_cap);
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b,
                           const ConstructionCaps& caps) {
  const long n = static_cast<long>(a.order()) * b.order();
  if (n > caps.order_cap) fail(errc::size_cap, "order " + std::to_string(n) + " exceeds cap");
  auto index = [&](int i, int j) { return i * b.order() + j; };
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i1 = 0; i1 < a.order(); ++i1)
    for (int j1 = 0; j1 < b.order(); ++j1)
      for (int i2 = 0; i2 < a.order(); ++i2)
        for (int j2 = 0; j2 < b.order(); ++j2)
          table[index(i1, j1)][index(i2, j2)] = index(a.mul(i1, i2), b.mul(j1, j2));
  std::vector<std::string> labels(n);
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j < b.order(); ++j)
      labels[index(i, j)] = "(" + a.label(i) + "," + b.label(j) + ")";
  return FiniteGroup(std::move(table), std::move(labels),
                     "(" + a.provenance() + ") x (" + b.provenance() + ")", caps.order_cap);
}

FiniteGroup semidirect_cyclic(long m, long n, long twist, const ConstructionCaps& caps) {
  if (m < 1 || n < 1) fail(errc::bad_input, "cyclic orders must be >= 1");
  long size = m * n;
  if (size > caps.order_cap) fail(errc::size_cap, "order " + std::to_string(size) + " exceeds cap");
  long b = twist % m;
  if (b < 0) b += m;
  if (mod_pow(b, n, m) != 1 % m)
    fail(errc::invalid_twist, "twist " + std::to_string(twist) + "^" + std::to_string(n) +
                                  " != 1 mod " + std::to_string(m));
  // Precompute b^j mod m.
  std::vector<long> bpow(n);
  for (long j = 0; j < n; ++j) bpow[j] = mod_pow(b, j, m);
  auto index = [&](long i, long j) { return static_cast<int>(i * n + j); };
  std::vector<std::vector<int>> table(size, std::vector<int>(size));
  for (long i1 = 0; i1 < m; ++i1)
    for (long j1 = 0; j1 < n; ++j1)
      for (long i2 = 0; i2 < m; ++i2)
        for (long j2 = 0; j2 < n; ++j2)
          table[index(i1, j1)][index(i2, j2)] =
              index((i1 + bpow[j1] * i2) % m, (j1 + j2) % n);
  std::vector<std::string> labels(size);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < n; ++j)
      labels[index(i, j)] = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  return FiniteGroup(std::move(table), std::move(labels),
                     "C " + std::to_string(m) + " : C " + std::to_string(n) + " @ " +
                         std::to_string(b),
                     caps.order_cap);
}

FiniteGroup matrix_semidirect(long q, long p, std::optional<std::pair<long, long>> poly,
                              const ConstructionCaps& caps) {
  if (!is_prime(Integer(q)) || !is_prime(Integer(p)))
    fail(errc::bad_input, "MAT construction needs primes q and p");
  auto try_poly = [&](long a, long b) -> std::optional<Mat2> {
    // Irreducible <=> no root of x^2 + a x + b in F_q.
    for (long r = 0; r < q; ++r)
      if ((r * r + a * r + b) % q == 0) return std::nullopt;
    Mat2 companion{0, ((-b) % q + q) % q, 1, ((-a) % q + q) % q};
    Mat2 acc{1, 0, 0, 1};
    for (long t = 0; t < p; ++t) acc = mat_mul(acc, companion, q);
    if (acc != Mat2{1, 0, 0, 1}) return std::nullopt;  // order must be exactly p (prime)
    return companion;
  };
  Mat2 companion;
  if (poly) {
    for (long r = 0; r < q; ++r)
      if ((r * r + poly->first * r + poly->second) % q == 0)
        fail(errc::not_irreducible, "x^2+" + std::to_string(poly->first) + "x+" +
                                        std::to_string(poly->second) + " has a root mod " +
                                        std::to_string(q));
    auto c = try_poly(poly->first, poly->second);
    if (!c)
      fail(errc::invalid_twist, "companion matrix does not have order " + std::to_string(p) +
                                    " (polynomial must divide the " + std::to_string(p) +
                                    "-th cyclotomic polynomial mod " + std::to_string(q) + ")");
    companion = *c;
  } else {
    bool found = false;
    for (long a = 0; a < q && !found; ++a)
      for (long b = 0; b < q && !found; ++b) {
        if (auto c = try_poly(a, b)) {
          companion = *c;
          found = true;
        }
      }
    if (!found)
      fail(errc::invalid_twist, "no irreducible quadratic of order " + std::to_string(p) +
                                    " over F_" + std::to_string(q) + " (need p | q+1)");
  }
  std::vector<Mat2> mats{{1, 0, 0, 1}};
  for (long t = 1; t < p; ++t) mats.push_back(mat_mul(mats.back(), companion, q));
  return module_semidirect(q, mats,
                           "MAT " + std::to_string(q) + " : C " + std::to_string(p), caps);
}

FiniteGroup symmetric_group(int k, const ConstructionCaps& caps) {
  if (k < 1 || k > 5) fail(errc::bad_input, "Sym k supported for 1 <= k <= 5");
  return permutation_group(permutations_of(k), "Sym " + std::to_string(k), caps);
}

FiniteGroup alternating_group(int k, const ConstructionCaps& caps) {
  if (k < 3 || k > 5) fail(errc::bad_input, "Alt k supported for 3 <= k <= 5");
  std::vector<std::vector<int>> evens;
  for (auto& p : permutations_of(k))
    if (is_even_permutation(p)) evens.push_back(std::move(p));
  return permutation_group(std::move(evens), "Alt " + std::to_string(k), caps);
}

FiniteGroup quaternion_group(const ConstructionCaps& caps) {
  // Elements 2*u + s: unit u in {1,i,j,k}, sign s (0 -> +, 1 -> -).
  static const char* names[8] = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  // unit products: entry = (unit index, sign) for u*v
  static const int unit_prod[4][4][2] = {
      {{0, 0}, {1, 0}, {2, 0}, {3, 0}},
      {{1, 0}, {0, 1}, {3, 0}, {2, 1}},
      {{2, 0}, {3, 1}, {0, 1}, {1, 0}},
      {{3, 0}, {2, 0}, {1, 1}, {0, 1}},
  };
  std::vector<std::vector<int>> table(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int ua = a / 2, sa = a % 2, ub = b / 2, sb = b % 2;
      int uc = unit_prod[ua][ub][0];
      int sc = (sa + sb + unit_prod[ua][ub][1]) % 2;
      table[a][b] = 2 * uc + sc;
    }
  std::vector<std::string> labels(names, names + 8);
  return FiniteGroup(std::move(table), std::move(labels), "Q8", caps.order_cap);
}

FiniteGroup general_linear_2(long p, const ConstructionCaps& caps) {
  if (!is_prime(Integer(p)) || p > 7) fail(errc::bad_input, "GL2 p supported for primes p <= 7");
  std::vector<Mat2> mats;
  for (long a = 0; a < p; ++a)
    for (long b = 0; b < p; ++b)
      for (long c = 0; c < p; ++c)
        for (long d = 0; d < p; ++d)
          if ((a * d - b * c) % p != 0) mats.push_back({a, b, c, d});
  const long n = static_cast<long>(mats.size());
  if (n > caps.order_cap) fail(errc::size_cap, "order " + std::to_string(n) + " exceeds cap");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      Mat2 prod = mat_mul(mats[i], mats[j], p);
      table[i][j] = static_cast<int>(std::lower_bound(mats.begin(), mats.end(), prod) -
                                     mats.begin());
    }
  std::vector<std::string> labels;
  labels.reserve(n);
  for (const auto& m : mats) labels.push_back(mat_label(m));
  return FiniteGroup(std::move(table), std::move(labels), "GL2 " + std::to_string(p),
                     caps.order_cap);
}

FiniteGroup c4c4_s3(const ConstructionCaps& caps) {
  const Mat2 s{0, 3, 1, 3};  // [[0,-1],[1,-1]] mod 4, order 3
  const Mat2 t{0, 1, 1, 0};
  std::vector<Mat2> mats{{1, 0, 0, 1}};
  for (std::size_t head = 0; head < mats.size(); ++head) {
    for (const Mat2& gen : {s, t}) {
      Mat2 prod = mat_mul(mats[head], gen, 4);
      if (std::find(mats.begin(), mats.end(), prod) == mats.end()) mats.push_back(prod);
    }
  }
  if (mats.size() != 6) fail(errc::bad_input, "C4C4S3 matrix closure has wrong size");
  return module_semidirect(4, mats, "C4C4S3", caps);
}

namespace {

struct Token {
  enum Kind { word, number, colon, at, times, comma, lparen, rparen, end } kind;
  std::string text;
  long value = 0;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    if (isspace(c)) {
      ++i;
    } else if (isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && isdigit(static_cast<unsigned char>(s[j]))) ++j;
      toks.push_back({Token::number, s.substr(i, j - i), std::stol(s.substr(i, j - i))});
      i = j;
    } else if (isalpha(c)) {
      std::size_t j = i;
      while (j < s.size() && isalnum(static_cast<unsigned char>(s[j]))) ++j;
      std::string w = s.substr(i, j - i);
      // A lone 'x' between factors is the product sign, not a name.
      if (w == "x" || w == "X") {
        toks.push_back({Token::times, w});
      } else {
        toks.push_back({Token::word, w});
      }
      i = j;
    } else if (c == ':') {
      toks.push_back({Token::colon, ":"});
      ++i;
    } else if (c == '@') {
      toks.push_back({Token::at, "@"});
      ++i;
    } else if (c == '*') {
      toks.push_back({Token::times, "*"});
      ++i;
    } else if (c == ',') {
      toks.push_back({Token::comma, ","});
      ++i;
    } else if (c == '(') {
      toks.push_back({Token::lparen, "("});
      ++i;
    } else if (c == ')') {
      toks.push_back({Token::rparen, ")"});
      ++i;
    } else if (c == 0xC3 && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x97) {
      toks.push_back({Token::times, "x"});  // UTF-8 times sign
      i += 2;
    } else if (c == 0xE2 && i + 2 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x8B &&
               static_cast<unsigned char>(s[i + 2]) == 0x8A) {
      toks.push_back({Token::colon, ":"});  // UTF-8 semidirect sign
      i += 3;
    } else {
      fail(errc::bad_input, std::string("unexpected character '") + static_cast<char>(c) +
                                "' in group spec");
    }
  }
  toks.push_back({Token::end, ""});
  return toks;
}

class SpecParser {
 public:
  SpecParser(std::vector<Token> toks, const ConstructionCaps& caps)
      : toks_(std::move(toks)), caps_(caps) {}

  FiniteGroup parse() {
    FiniteGroup g = parse_product();
    expect(Token::end, "end of spec");
    return g;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  void expect(Token::Kind k, const std::string& what) {
    if (peek().kind != k) fail(errc::bad_input, "expected " + what + " in group spec");
    ++pos_;
  }

  long take_number(const std::string& what) {
    if (peek().kind != Token::number) fail(errc::bad_input, "expected " + what);
    return take().value;
  }

  FiniteGroup parse_product() {
    FiniteGroup g = parse_factor();
    while (peek().kind == Token::times) {
      take();
      FiniteGroup h = parse_factor();
      g = direct_product(g, h, caps_);
    }
    return g;
  }

  FiniteGroup parse_factor() {
    if (peek().kind == Token::lparen) {
      take();
      FiniteGroup g = parse_product();
      expect(Token::rparen, "')'");
      return g;
    }
    if (peek().kind != Token::word) fail(errc::bad_input, "expected a group atom");
    std::string w = take().text;
    if (w == "C") {
      long m = take_number("cyclic order");
      if (peek().kind == Token::colon) {
        take();
        if (peek().kind != Token::word || peek().text != "C")
          fail(errc::bad_input, "semidirect complement must be cyclic: C m : C n @ b");
        take();
        long n = take_number("cyclic order");
        expect(Token::at, "'@ twist'");
        long b = take_number("twist");
        return semidirect_cyclic(m, n, b, caps_);
      }
      return cyclic_group(m, caps_);
    }
    if (w == "MAT") {
      long q = take_number("field size");
      expect(Token::colon, "':' after MAT q");
      if (peek().kind != Token::word || peek().text != "C")
        fail(errc::bad_input, "MAT q : C p [@ a,b]");
      take();
      long p = take_number("prime p");
      std::optional<std::pair<long, long>> poly;
      if (peek().kind == Token::at) {
        take();
        long a = take_number("polynomial coefficient a");
        expect(Token::comma, "','");
        long b = take_number("polynomial coefficient b");
        poly = {a, b};
      }
      return matrix_semidirect(q, p, poly, caps_);
    }
    if (w == "Q8") return quaternion_group(caps_);
    if (w == "Sym") return symmetric_group(static_cast<int>(take_number("degree")), caps_);
    if (w == "Alt") return alternating_group(static_cast<int>(take_number("degree")), caps_);
    if (w == "GL2") return general_linear_2(take_number("prime"), caps_);
    if (w == "C4C4S3") return c4c4_s3(caps_);
    fail(errc::bad_input, "unknown group atom '" + w + "'");
  }

  std::vector<Token> toks_;
  ConstructionCaps caps_;
  std::size_t pos_ = 0;
};

}  // namespace

FiniteGroup construct_group(const std::string& spec, const ConstructionCaps& caps) {
  return SpecParser(tokenize(spec), caps).parse();
}

FiniteGroup group_from_table_file(const std::string& path, const ConstructionCaps& caps) {
  std::ifstream in(path);
  if (!in) fail(errc::bad_input, "cannot open group file '" + path + "'");
  std::string line;
  long n = -1;
  std::vector<std::vector<int>> table;
  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "order") {
      if (!(ls >> n) || n < 1) fail(errc::bad_input, "bad order line in group file");
      labels.assign(n, "");
    } else if (head == "label") {
      long i;
      if (n < 0 || !(ls >> i) || i < 0 || i >= n) fail(errc::bad_input, "bad label line");
      std::string rest;
      std::getline(ls, rest);
      while (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
      labels[i] = rest;
    } else {
      if (n < 0) fail(errc::bad_input, "group file must start with 'order n'");
      std::istringstream row_stream(line);
      std::vector<int> row;
      int v;
      while (row_stream >> v) row.push_back(v);
      if (static_cast<long>(row.size()) != n) fail(errc::bad_input, "bad table row width");
      table.push_back(std::move(row));
    }
  }
  if (n < 0 || static_cast<long>(table.size()) != n)
    fail(errc::bad_input, "group file does not contain an order-n table");
  for (long i = 0; i < n; ++i)
    if (labels[i].empty()) labels[i] = std::to_string(i);
  return FiniteGroup(std::move(table), std::move(labels), "file:" + path, caps.order_cap);
}

FiniteGroup group_from_spec_or_file(const std::string& text, const ConstructionCaps& caps) {
  try {
    return construct_group(text, caps);
  } catch (const error& e) {
    if (e.code() != errc::bad_input) throw;
  }
  return group_from_table_file(text, caps);
}

}  // namespace surfbound
