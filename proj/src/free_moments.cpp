#include "brownflow/free_moments.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "brownflow/error.hpp"
#include "brownflow/ode.hpp"

namespace brownflow::free {

MomentVector circ_moment_odes(Complex lambda, double t, int M, double tol) {
  if (M < 1) {
    throw std::invalid_argument("circ_moment_odes: M must be >= 1");
  }
  if (!(t >= 0.0) || !(tol > 0.0)) {
    throw std::invalid_argument("circ_moment_odes: need t >= 0 and tol > 0");
  }
  const double r2 = std::norm(lambda);
  ode::Vector y0(M);  // y[n-1] = m_n
  double pw = 1.0;
  for (int n = 1; n <= M; ++n) {
    pw *= r2;
    y0[n - 1] = pw;
  }
  const auto rhs = [M](double, const ode::Vector& y, ode::Vector& dy) {
    const auto m = [&y](int k) { return k == 0 ? 1.0 : y[k - 1]; };
    for (int n = 1; n <= M; ++n) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        acc += m(j) * m(n - 1 - j);
      }
      dy[n - 1] = n * acc;
    }
  };
  ode::Options opt;
  opt.rtol = tol;
  opt.atol = tol;
  opt.blowup_norm = std::numeric_limits<double>::infinity();  // m_n grows geometrically
  const ode::Solution sol = ode::integrate(rhs, 0.0, y0, t, opt);
  if (!sol.completed()) {
    throw NonConvergence("circ_moment_odes: integration stopped (" +
                         std::string(ode::to_string(sol.status)) + ")");
  }
  MomentVector out{lambda, t, M, std::vector<double>(static_cast<std::size_t>(M) + 1)};
  out.m[0] = 1.0;
  for (int n = 1; n <= M; ++n) {
    out.m[static_cast<std::size_t>(n)] = sol.final_state()[n - 1];
  }
  return out;
}

SeriesValue S_series(Complex lambda, double x, double t, int M) {
  if (!(x > 0.0)) {
    throw DomainError("S_series: x must be > 0");
  }
  const MomentVector mv = circ_moment_odes(lambda, t, M);
  const double guard = 4.0 * std::pow(mv.m.back(), 1.0 / (2.0 * M));
  if (!(x > guard)) {
    throw DomainError("S_series: x=" + std::to_string(x) + " is below the convergence guard " +
                      std::to_string(guard) + "; use a larger x or a smaller t");
  }
  SeriesValue out;
  out.value = std::log(x);
  double xn = 1.0;
  for (int n = 1; n <= M; ++n) {
    xn *= x;
    const double term = mv.m[static_cast<std::size_t>(n)] / (n * xn);
    out.value += (n % 2 == 1) ? term : -term;
    out.truncation_bound = term;
  }
  return out;
}

// ---- words ------------------------------------------------------------------

FreeWord FreeWord::parse(const std::string& text) {
  FreeWord w;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c != 'a' && c != 'b') {
      throw std::invalid_argument("FreeWord::parse: unexpected character '" + std::string(1, c) +
                                  "'");
    }
    ++i;
    if (i < text.size() && text[i] == '^') {
      ++i;
    }
    int exponent = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      exponent = 10 * exponent + (text[i] - '0');
      ++i;
    }
    w.letters.push_back({c, exponent == 0 ? 1 : exponent});
  }
  w.validate();
  return w;
}

void FreeWord::validate() const {
  if (letters.empty() || letters.size() > 8) {
    throw std::invalid_argument("FreeWord: length must be between 1 and 8 letters");
  }
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const Letter& l = letters[i];
    if (l.symbol != 'a' && l.symbol != 'b') {
      throw std::invalid_argument("FreeWord: letters must be 'a' or 'b'");
    }
    if (l.exponent < 1) {
      throw std::invalid_argument("FreeWord: exponents must be >= 1");
    }
    if (i > 0 && letters[i - 1].symbol == l.symbol) {
      throw std::invalid_argument("FreeWord: adjacent letters must differ");
    }
  }
}

int FreeWord::degree(char symbol) const {
  int d = 0;
  for (const Letter& l : letters) {
    if (l.symbol == symbol) {
      d += l.exponent;
    }
  }
  return d;
}

namespace {

using Poly = std::vector<double>;  // coefficients, constant first

struct Factor {
  int var = 0;  // 0 = a, 1 = b
  Poly p;
};

Poly multiply(const Poly& x, const Poly& y) {
  Poly out(x.size() + y.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      out[i + j] += x[i] * y[j];
    }
  }
  return out;
}

class WordEvaluator {
 public:
  WordEvaluator(const std::vector<double>& ma, const std::vector<double>& mb)
      : moments_{&ma, &mb} {}

  double tau_single(const Factor& f) const {
    const std::vector<double>& m = *moments_[f.var];
    double acc = 0.0;
    for (std::size_t k = 0; k < f.p.size(); ++k) {
      if (f.p[k] != 0.0) {
        acc += f.p[k] * m[k];
      }
    }
    return acc;
  }

  double tau(std::vector<Factor> fs) {
    merge_neighbours(fs);
    if (fs.empty()) {
      return 1.0;
    }
    if (fs.size() == 1) {
      return tau_single(fs.front());
    }
    const std::string key = make_key(fs);
    if (const auto it = memo_.find(key); it != memo_.end()) {
      return it->second;
    }
    // p_i = centered_i + c_i; the product of all centered parts has trace 0,
    // every other term replaces a nonempty subset by its constants.
    const std::size_t k = fs.size();
    std::vector<double> c(k);
    std::vector<Factor> centered = fs;
    for (std::size_t i = 0; i < k; ++i) {
      c[i] = tau_single(fs[i]);
      centered[i].p[0] -= c[i];
    }
    double total = 0.0;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      double coef = 1.0;
      std::vector<Factor> rest;
      for (std::size_t i = 0; i < k; ++i) {
        if (mask & (1u << i)) {
          coef *= c[i];
        } else {
          rest.push_back(centered[i]);
        }
      }
      if (coef == 0.0) {
        continue;
      }
      total += coef * tau(std::move(rest));
    }
    memo_.emplace(key, total);
    return total;
  }

 private:
  // Multiplies adjacent factors in the same variable, including the
  // wrap-around pair (trace is cyclic).
  static void merge_neighbours(std::vector<Factor>& fs) {
    std::vector<Factor> out;
    for (auto& f : fs) {
      if (!out.empty() && out.back().var == f.var) {
        out.back().p = multiply(out.back().p, f.p);
      } else {
        out.push_back(std::move(f));
      }
    }
    while (out.size() > 1 && out.front().var == out.back().var) {
      out.front().p = multiply(out.back().p, out.front().p);
      out.pop_back();
    }
    fs = std::move(out);
  }

  static std::string make_key(const std::vector<Factor>& fs) {
    std::string key;
    for (const Factor& f : fs) {
      key += static_cast<char>('a' + f.var);
      key += static_cast<char>(f.p.size());
      for (double v : f.p) {
        const auto bits = std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);
        key.append(reinterpret_cast<const char*>(&bits), sizeof bits);
      }
    }
    return key;
  }

  const std::vector<double>* moments_[2];
  std::map<std::string, double> memo_;
};

}  // namespace

double free_word_moment(const FreeWord& word, const std::vector<double>& moments_a,
                        const std::vector<double>& moments_b) {
  word.validate();
  const int da = word.degree('a');
  const int db = word.degree('b');
  if (static_cast<int>(moments_a.size()) <= da || static_cast<int>(moments_b.size()) <= db) {
    throw std::invalid_argument("free_word_moment: moment lists must reach degree " +
                                std::to_string(da) + " (a) and " + std::to_string(db) + " (b)");
  }
  std::vector<Factor> fs;
  for (const auto& l : word.letters) {
    Poly p(static_cast<std::size_t>(l.exponent) + 1, 0.0);
    p.back() = 1.0;
    fs.push_back({l.symbol == 'a' ? 0 : 1, std::move(p)});
  }
  WordEvaluator ev(moments_a, moments_b);
  return ev.tau(std::move(fs));
}

}  // namespace brownflow::free
