#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "nlocus/scalar/prime_field.hpp"

namespace nlocus::linalg {

using ModRow = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

// Row echelon form over F_p.  `source[i]` is the input row that produced
// the i-th pivot; rows are normalized to leading coefficient 1 and, when
// requested, fully reduced.  Pivots are reported in increasing order.
struct ModularEchelon {
  std::uint64_t p = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> pivots;
  std::vector<std::size_t> source;
  std::vector<std::vector<std::uint64_t>> rows;  // dense
  std::size_t rank() const { return pivots.size(); }
};

namespace detail {

// y += f x mod p for reduced inputs and p < 2^31, using a precomputed
// quotient for f so the loop avoids hardware division.
inline void axpy_mod(std::uint64_t* y, const std::uint64_t* x, std::size_t n, std::uint64_t f, std::uint64_t p) {
  const std::uint64_t fq = static_cast<std::uint64_t>((static_cast<unsigned __int128>(f) << 64) / p);
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t a = x[j];
    if (a == 0) continue;
    std::uint64_t hi = static_cast<std::uint64_t>((static_cast<unsigned __int128>(fq) * a) >> 64);
    std::uint64_t prod = f * a - hi * p;
    if (prod >= p) prod -= p;
    std::uint64_t s = y[j] + prod;
    y[j] = s >= p ? s - p : s;
  }
}

}  // namespace detail

inline ModularEchelon modular_echelon(std::uint64_t p, std::size_t cols, const std::vector<ModRow>& input,
                                      bool reduce = false) {
  std::vector<std::vector<std::uint64_t>> pivot_row(cols);
  std::vector<std::size_t> pivot_source(cols, 0);
  std::size_t rank = 0;
  std::vector<std::uint64_t> v(cols);
  for (std::size_t r = 0; r < input.size() && rank < cols; ++r) {
    std::fill(v.begin(), v.end(), 0);
    bool any = false;
    for (const auto& [c, x] : input[r]) {
      v[c] = (v[c] + x) % p;
      any = any || v[c] != 0;
    }
    if (!any) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      if (v[c] == 0) continue;
      auto& P = pivot_row[c];
      if (P.empty()) {
        std::uint64_t inv = invmod(v[c], p);
        P.assign(cols, 0);
        for (std::size_t j = c; j < cols; ++j) P[j] = mulmod(v[j], inv, p);
        pivot_source[c] = r;
        ++rank;
        break;
      }
      detail::axpy_mod(v.data() + c, P.data() + c, cols - c, p - v[c], p);
    }
  }
  ModularEchelon out;
  out.p = p;
  out.cols = cols;
  for (std::size_t c = 0; c < cols; ++c) {
    if (pivot_row[c].empty()) continue;
    out.pivots.push_back(static_cast<std::uint32_t>(c));
    out.source.push_back(pivot_source[c]);
    out.rows.push_back(std::move(pivot_row[c]));
  }
  if (reduce) {
    for (std::size_t i = out.rows.size(); i-- > 0;) {
      std::uint32_t pc = out.pivots[i];
      for (std::size_t k = 0; k < i; ++k) {
        std::uint64_t t = out.rows[k][pc];
        if (t == 0) continue;
        detail::axpy_mod(out.rows[k].data() + pc, out.rows[i].data() + pc, cols - pc, p - t, p);
      }
    }
  }
  return out;
}

// Dense LU-style solver for a nonsingular r x r system mod p.
class ModularSolver {
 public:
  ModularSolver(std::uint64_t p, std::vector<std::vector<std::uint64_t>> a) : p_(p), n_(a.size()), lu_(std::move(a)) {
    perm_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t piv = c;
      while (piv < n_ && lu_[piv][c] == 0) ++piv;
      if (piv == n_) {
        singular_ = true;
        return;
      }
      std::swap(lu_[piv], lu_[c]);
      std::swap(perm_[piv], perm_[c]);
      std::uint64_t inv = invmod(lu_[c][c], p_);
      for (std::size_t r = c + 1; r < n_; ++r) {
        if (lu_[r][c] == 0) continue;
        std::uint64_t f = mulmod(lu_[r][c], inv, p_);
        lu_[r][c] = f;
        std::uint64_t nf = p_ - f;
        for (std::size_t j = c + 1; j < n_; ++j)
          if (lu_[c][j]) lu_[r][j] = (lu_[r][j] + mulmod(nf, lu_[c][j], p_)) % p_;
      }
    }
    diag_inv_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) diag_inv_[i] = invmod(lu_[i][i], p_);
  }

  bool singular() const { return singular_; }

  // Solves A x = b in place.
  void solve(std::vector<std::uint64_t>& b) const {
    std::vector<std::uint64_t> y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n_; ++i) {
      std::uint64_t acc = y[i];
      for (std::size_t j = 0; j < i; ++j)
        if (lu_[i][j] && y[j]) acc = (acc + p_ - mulmod(lu_[i][j], y[j], p_)) % p_;
      y[i] = acc;
    }
    for (std::size_t i = n_; i-- > 0;) {
      std::uint64_t acc = y[i];
      for (std::size_t j = i + 1; j < n_; ++j)
        if (lu_[i][j] && y[j]) acc = (acc + p_ - mulmod(lu_[i][j], y[j], p_)) % p_;
      y[i] = mulmod(acc, diag_inv_[i], p_);
    }
    b = std::move(y);
  }

 private:
  std::uint64_t p_;
  std::size_t n_;
  std::vector<std::vector<std::uint64_t>> lu_;
  std::vector<std::size_t> perm_;
  std::vector<std::uint64_t> diag_inv_;
  bool singular_ = false;
};

}  // namespace nlocus::linalg
