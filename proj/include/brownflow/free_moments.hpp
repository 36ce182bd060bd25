#pragma once

#include <string>
#include <vector>

#include "brownflow/linalg.hpp"

namespace brownflow::free {

/// m[k] = tau[((c_t - lambda)^* (c_t - lambda))^k] for k = 0..M, where c_t is
/// circular Brownian motion.
struct MomentVector {
  Complex lambda;
  double t = 0.0;
  int M = 0;
  std::vector<double> m;
};

/// Integrates dm_n/dt = n sum_{j<n} m_j m_{n-1-j}, m_n(0) = |lambda|^{2n},
/// n = 1..M, with the adaptive Runge-Kutta integrator at relative tolerance
/// tol. Throws std::invalid_argument for M < 1 or t < 0.
MomentVector circ_moment_odes(Complex lambda, double t, int M, double tol = 1e-12);

struct SeriesValue {
  double value = 0.0;
  /// Magnitude of the last included term.
  double truncation_bound = 0.0;
};

/// log x + sum_{n=1}^{M} (-1)^{n-1} m_n(t) / (n x^n). Requires
/// x > 4 m_M^{1/(2M)} (a heuristic proxy for the spectral radius of the
/// positive operator); throws DomainError otherwise.
SeriesValue S_series(Complex lambda, double x, double t, int M);

/// A word a^{e1} b^{e2} a^{e3} ... in two freely independent variables.
struct FreeWord {
  struct Letter {
    char symbol = 'a';  // 'a' or 'b'
    int exponent = 1;
  };
  std::vector<Letter> letters;

  /// Parses "abab", "a2b", "a^2 b a" style strings; consecutive equal
  /// letters are rejected.
  static FreeWord parse(const std::string& text);

  /// Throws std::invalid_argument unless 1 <= letters.size() <= 8, every
  /// exponent is >= 1, symbols are 'a' or 'b', and neighbours differ.
  void validate() const;

  /// Total exponent carried by `symbol`.
  int degree(char symbol) const;
};

/// tau(word) for free a, b with tau(a^k) = moments_a[k] and
/// tau(b^k) = moments_b[k] (index 0 is the unit, normally 1). Evaluated by
/// centering each letter power, using the vanishing of alternating centered
/// products and the traciality of tau, memoized on the reduced words.
double free_word_moment(const FreeWord& word, const std::vector<double>& moments_a,
                        const std::vector<double>& moments_b);

}  // namespace brownflow::free
