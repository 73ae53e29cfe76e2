// Benchmark of the data-parallel kernels against their serial references.
// Each kernel is run both ways on the same instance; results must agree.

#include <chrono>
#include <cstdio>

#include "zk/generic.hpp"
#include "zk/oracle.hpp"
#include "zk/pi.hpp"
#include "zk/structure.hpp"

using namespace zk;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename Fn>
double timed(Fn&& fn) {
  double t0 = now_ms();
  fn();
  return now_ms() - t0;
}

Mat unit(TowerRef t, uint32_t n, uint32_t i, uint32_t j, uint64_t c = 1) {
  Mat m(t->K(), n, n);
  m.at(i, j) = c;
  return m;
}

void line(const char* what, double serial, double parallel, bool agree) {
  printf("%-46s reference %9.1f ms   kernel %9.1f ms   speedup %5.2fx   %s\n",
         what, serial, parallel, parallel > 0 ? serial / parallel : 0.0,
         agree ? "agree" : "MISMATCH");
}

}  // namespace

int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
#ifdef _OPENMP
  printf("kernels: OpenMP enabled, %d threads available\n\n",
         omp_get_max_threads());
#else
  printf("kernels: built without OpenMP; both columns run serially\n\n");
#endif

  // 1. exhaustive identity check on full upper triangular 2x2 over GF(8):
  //    dim_F = 9, |A|^2 = 2^18 substitutions
  {
    auto t = Tower::make(2, 1, 3);
    std::vector<Mat> gens;
    for (uint32_t b = 0; b < 3; ++b) {
      uint64_t v = t->K()->pow(t->K()->gen(), b);
      gens.push_back(unit(t, 2, 0, 0, v));
      gens.push_back(unit(t, 2, 0, 1, v));
      gens.push_back(unit(t, 2, 1, 1, v));
    }
    auto A = close_algebra_gens(t, 2, gens);
    auto f = parse_ncpoly("(x^8-x)*(y^8-y)", 2);
    IdentityReport rs, rp;
    double ts = timed([&] { rs = check_identity(A, f, 1ull << 26, Exec::Serial); });
    double tp = timed([&] { rp = check_identity(A, f, 1ull << 26, Exec::Parallel); });
    line("identity check, 2^18 substitutions", ts, tp, rs.holds == rp.holds);
  }

  // 2. identity space at degree 4 in two variables over a 2^8-element algebra
  {
    auto t = Tower::make(2, 1, 3);
    std::vector<Mat> gens;
    for (uint32_t b = 0; b < 3; ++b) {
      uint64_t v = t->K()->pow(t->K()->gen(), b);
      gens.push_back(unit(t, 2, 0, 1, v));
      gens.push_back(unit(t, 2, 0, 0, v));
    }
    gens.push_back(unit(t, 2, 1, 1));
    auto A = close_algebra_gens(t, 2, gens);
    std::vector<std::vector<uint32_t>> is, ip;
    double ts = timed([&] { is = identity_space(A, 2, 4, 1ull << 26, Exec::Serial); });
    double tp = timed([&] { ip = identity_space(A, 2, 4, 1ull << 26, Exec::Parallel); });
    line("identity space, degree 4, 2^14 tuples", ts, tp, is == ip);
  }

  // 3. split-substitution check: a small-degree identity over a larger
  //    algebra, where splitting is the point
  {
    auto t = Tower::make(2, 1, 3);
    std::vector<Mat> gens;
    for (uint32_t b = 0; b < 3; ++b) {
      uint64_t v = t->K()->pow(t->K()->gen(), b);
      gens.push_back(unit(t, 2, 0, 1, v));
      gens.push_back(unit(t, 2, 1, 1, v));
    }
    gens.push_back(unit(t, 2, 0, 0));
    auto A = close_algebra_gens(t, 2, gens);
    auto wd = wedderburn_malcev(A);
    auto f = parse_ncpoly("(x^2-x)*[y,z]", 2);
    IdentityReport rs, rp;
    double ts = timed([&] {
      rs = check_identity_split(A, wd.S_space, wd.J_space, f, 1ull << 26,
                                Exec::Serial);
    });
    double tp = timed([&] {
      rp = check_identity_split(A, wd.S_space, wd.J_space, f, 1ull << 26,
                                Exec::Parallel);
    });
    line("split identity check, 3 variables", ts, tp, rs.holds == rp.holds);
  }

  return 0;
}
