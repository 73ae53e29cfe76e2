#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "zk/field.hpp"
#include "zk/pi.hpp"

namespace zk {

// Allocation-free workspace for the hot substitution loops.  The Mat-based
// evaluation stays as the serial reference; these kernels must produce
// identical results.
struct EvalScratch {
  uint32_t n = 0;
  std::vector<uint64_t> cur, nxt, acc;
  void init(uint32_t n_) {
    if (n != n_) {
      n = n_;
      cur.assign(size_t(n) * n, 0);
      nxt.assign(size_t(n) * n, 0);
      acc.assign(size_t(n) * n, 0);
    }
  }
};

inline void mat_mul_into(const Field& K, uint32_t n, const uint64_t* a,
                         const uint64_t* b, uint64_t* c) {
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j) {
      uint64_t s = 0;
      for (uint32_t k = 0; k < n; ++k) {
        uint64_t x = a[i * n + k];
        if (x) {
          uint64_t y = b[k * n + j];
          if (y) s = K.add(s, K.mul(x, y));
        }
      }
      c[i * n + j] = s;
    }
}

// product of a word over flat matrices, into s.cur; false when the word is
// empty (the caller treats it as the identity)
inline bool word_eval(const Field& K, const NCWord& w, uint32_t n,
                      const uint64_t* const* args, EvalScratch& s) {
  s.init(n);
  bool first = true;
  for (auto& [v, e] : w)
    for (uint32_t rep = 0; rep < e; ++rep) {
      if (first) {
        std::copy(args[v], args[v] + size_t(n) * n, s.cur.begin());
        first = false;
      } else {
        mat_mul_into(K, n, s.cur.data(), args[v], s.nxt.data());
        s.cur.swap(s.nxt);
      }
    }
  return !first;
}

// evaluates f at the given flat matrices; true when the value is zero
inline bool nc_eval_zero(const Field& K, const NCPolynomial& f, uint32_t n,
                         const uint64_t* const* args, EvalScratch& s) {
  s.init(n);
  std::fill(s.acc.begin(), s.acc.end(), 0);
  for (auto& [w, c] : f.terms) {
    uint64_t coef = K.from_prime(c);
    if (!word_eval(K, w, n, args, s)) {  // constant word
      for (uint32_t i = 0; i < n; ++i)
        s.acc[i * n + i] = K.add(s.acc[i * n + i], coef);
      continue;
    }
    for (size_t i = 0; i < s.acc.size(); ++i)
      if (s.cur[i]) s.acc[i] = K.add(s.acc[i], K.mul(coef, s.cur[i]));
  }
  for (auto x : s.acc)
    if (x) return false;
  return true;
}

}  // namespace zk
