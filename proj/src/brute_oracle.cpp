#include "qwalk/brute_oracle.hpp"

#include <string>
#include <vector>

#include "qwalk/error.hpp"

namespace qwalk {

JointReturnLaw enumerate_joint(int n, const StepDistribution& walk, Conditioning conditioning,
                               const OracleOptions& options) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "negative length");
  if (n > kOracleMaxLength) {
    fail(ErrorCode::CapTooLarge, "oracle handles n <= " + std::to_string(kOracleMaxLength) +
                                     ", got " + std::to_string(n));
  }
  check_length(conditioning, n);
  if (!walk.is_exact()) fail(ErrorCode::InvalidArgument, "oracle needs exact step probabilities");

  const int span = 2 * n + 1;
  const int max_r = n / 2 + 1;
  auto idx = [&](int x, int y, int r1, int r2, int s) {
    return ((((static_cast<std::size_t>(x + n) * span + (y + n)) * max_r + r1) * max_r + r2) * 2) + s;
  };
  const std::size_t size = static_cast<std::size_t>(span) * span * max_r * max_r * 2;
  std::vector<Rational> cur(size, Rational(0)), next(size, Rational(0));
  cur[idx(0, 0, 0, 0, 1)] = 1;

  struct Move {
    int dx, dy;
    Rational prob;
  };
  const Move moves[4] = {{1, 0, walk.exact_p(1)},
                         {-1, 0, walk.exact_q(1)},
                         {0, 1, walk.exact_p(2)},
                         {0, -1, walk.exact_q(2)}};

  for (int step = 0; step < n; ++step) {
    for (Rational& v : next) v = 0;
    for (int x = -step; x <= step; ++x)
      for (int y = -step; y <= step; ++y) {
        if (std::abs(x) + std::abs(y) > step) continue;
        for (int r1 = 0; r1 < max_r; ++r1)
          for (int r2 = 0; r2 < max_r; ++r2)
            for (int s = 0; s < 2; ++s) {
              const Rational& v = cur[idx(x, y, r1, r2, s)];
              if (sgn(v) == 0) continue;
              for (const Move& m : moves) {
                const int x2 = x + m.dx;
                const int y2 = y + m.dy;
                // A moved coordinate landing on 0 was at +-1 before, so the
                // return is strict without looking further back.
                const int nr1 = r1 + (m.dx != 0 && x2 == 0 ? 1 : 0);
                const int nr2 = r2 + (m.dy != 0 && y2 == 0 ? 1 : 0);
                const bool left = (options.survival_axis1 && x2 < 0) || (options.survival_axis2 && y2 < 0);
                const int s2 = (s == 1 && !left) ? 1 : 0;
                next[idx(x2, y2, nr1, nr2, s2)] += v * m.prob;
              }
            }
      }
    std::swap(cur, next);
  }

  const int extent = n / 2 + 1;
  Grid<Rational> cells(extent, extent, Rational(0));
  for (int x = -n; x <= n; ++x)
    for (int y = -n; y <= n; ++y) {
      if (std::abs(x) + std::abs(y) > n) continue;
      if (involves_endpoint(conditioning) && (x != 0 || y != 0)) continue;
      for (int r1 = 0; r1 < extent; ++r1)
        for (int r2 = 0; r2 < extent; ++r2)
          for (int s = 0; s < 2; ++s) {
            if (involves_survival(conditioning) && s == 0) continue;
            cells(r1, r2) += cur[idx(x, y, r1, r2, s)];
          }
    }
  JointReturnLaw law(n, walk, conditioning, Backend::Exact);
  law.set_exact(std::move(cells));
  return law;
}

}  // namespace qwalk
