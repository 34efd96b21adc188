#pragma once

// Event-driven integration core for the best-response inclusion, templated on
// the scalar type. Within a segment pointing at vertex b the state is
// x(t) = e_b + (x(t0) - e_b) * exp(-(t - t0)), so every payoff difference has
// the form A + B*exp(-dt) and the next switch time is a closed-form log. The
// template parameter exists because the Shapley-triangle residual decays like
// exp(-t); certifying it at t = 40 needs more than double precision.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "evoelim/common.hpp"
#include "evoelim/game.hpp"

#ifdef __SIZEOF_FLOAT128__
#include <quadmath.h>
#endif

namespace evoelim {
namespace detail {

template <class Real>
Real real_exp(Real x) {
  using std::exp;
  return exp(x);
}
template <class Real>
Real real_log(Real x) {
  using std::log;
  return log(x);
}
template <class Real>
Real real_abs(Real x) {
  using std::fabs;
  return fabs(x);
}

#ifdef __SIZEOF_FLOAT128__
template <>
inline __float128 real_exp(__float128 x) { return expq(x); }
template <>
inline __float128 real_log(__float128 x) { return logq(x); }
template <>
inline __float128 real_abs(__float128 x) { return fabsq(x); }
using quad = __float128;
#else
using quad = long double;
#endif

inline constexpr long long kMaxSwitchEvents = 1'000'000;

template <class Real>
struct BRPath {
  struct Segment {
    Real t0{};
    Real t1{};
    int target = 0;  // 0-based vertex index
    std::vector<Real> x0;
  };
  struct Event {
    Real t{};
    int from = 0;
    int to = 0;
  };
  std::vector<Segment> segments;
  std::vector<Event> events;
  Real horizon{};

  std::vector<Real> state_at(Real t) const {
    if (segments.empty()) throw ValidationError("empty trajectory");
    // Segments are ordered; linear scan is fine at these sizes.
    const Segment* seg = &segments.back();
    for (const auto& s : segments) {
      if (t <= s.t1) {
        seg = &s;
        break;
      }
    }
    const Real decay = real_exp<Real>(-(t - seg->t0));
    std::vector<Real> x = seg->x0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= decay;
    x[static_cast<std::size_t>(seg->target)] += Real(1) - decay;
    return x;
  }
};

template <class Real>
std::vector<Real> payoffs_of(const GameMatrix& u, const std::vector<Real>& x) {
  const int n = u.size();
  std::vector<Real> p(static_cast<std::size_t>(n), Real(0));
  for (int i = 0; i < n; ++i) {
    Real acc(0);
    for (int j = 0; j < n; ++j) acc += Real(u.at(i, j)) * x[static_cast<std::size_t>(j)];
    p[static_cast<std::size_t>(i)] = acc;
  }
  return p;
}

template <class Real>
BRPath<Real> integrate_br_core(const GameMatrix& u, std::vector<Real> x0, Real horizon) {
  const int n = u.size();
  if (static_cast<int>(x0.size()) != n) throw ValidationError("integrate_br: dimension mismatch");
  if (!(static_cast<double>(horizon) > 0.0)) throw ValidationError("horizon must be positive");

  // Initial best responses, with the same tolerance as best_responses().
  {
    const auto p = payoffs_of(u, x0);
    Real top = p[0];
    for (int i = 1; i < n; ++i) top = p[static_cast<std::size_t>(i)] > top ? p[static_cast<std::size_t>(i)] : top;
    std::vector<int> br;
    for (int i = 0; i < n; ++i) {
      if (p[static_cast<std::size_t>(i)] >= top - Real(1e-10)) br.push_back(i);
    }
    if (br.size() != 1) {
      std::string who;
      for (int i : br) who += (who.empty() ? "" : ", ") + std::to_string(i + 1);
      throw ValidationError("initial best response is not unique (tied strategies: " + who + ")");
    }
    if (br[0] >= 3) {
      throw ValidationError("strategy " + std::to_string(br[0] + 1) +
                            " is the initial best response; only the cyclic strategies 1..3 are "
                            "covered by the event-driven integrator");
    }
  }

  BRPath<Real> path;
  path.horizon = horizon;
  int target = 0;
  {
    const auto p = payoffs_of(u, x0);
    for (int i = 1; i < n; ++i) {
      if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(target)]) target = i;
    }
  }

  Real t = Real(0);
  std::vector<Real> x = std::move(x0);
  long long events = 0;
  while (true) {
    const auto p = payoffs_of(u, x);
    const Real pb = p[static_cast<std::size_t>(target)];
    // First crossing time of each rival payoff with the target's.
    Real best_dt = Real(-1);
    int incoming = -1;
    std::vector<int> near_ties;
    for (int j = 0; j < n; ++j) {
      if (j == target) continue;
      const Real a = Real(u.at(j, target)) - Real(u.at(target, target));
      if (!(static_cast<double>(a) > 0.0)) continue;  // never catches up within this segment
      const Real d0 = p[static_cast<std::size_t>(j)] - pb;
      // d(dt) = a + (d0 - a) exp(-dt) hits zero at dt = log((a - d0)/a).
      const Real dt = real_log<Real>((a - d0) / a);
      if (!(static_cast<double>(dt) > 0.0)) continue;
      if (incoming < 0 || dt < best_dt) {
        best_dt = dt;
        incoming = j;
      }
    }
    if (incoming >= 0) {
      for (int j = 0; j < n; ++j) {
        if (j == target || j == incoming) continue;
        const Real a = Real(u.at(j, target)) - Real(u.at(target, target));
        if (!(static_cast<double>(a) > 0.0)) continue;
        const Real d0 = p[static_cast<std::size_t>(j)] - pb;
        const Real dt = real_log<Real>((a - d0) / a);
        if (static_cast<double>(real_abs<Real>(dt - best_dt)) <= 1e-12) near_ties.push_back(j);
      }
    }

    if (incoming < 0 || t + best_dt >= horizon) {
      path.segments.push_back({t, horizon, target, x});
      break;
    }
    if (!near_ties.empty()) {
      // The improvement principle singles out the cyclic successor; any other
      // coincidence is outside the covered game class.
      const int successor = (target + 1) % 3;
      bool resolved = (incoming == successor);
      for (int j : near_ties) resolved = resolved || (j == successor);
      if (!resolved) {
        throw ValidationError("ambiguous switch tie at t = " +
                              std::to_string(static_cast<double>(t + best_dt)));
      }
      incoming = successor;
      const Real a = Real(u.at(incoming, target)) - Real(u.at(target, target));
      const Real d0 = p[static_cast<std::size_t>(incoming)] - pb;
      best_dt = real_log<Real>((a - d0) / a);
    }

    const Real t1 = t + best_dt;
    path.segments.push_back({t, t1, target, x});
    path.events.push_back({t1, target, incoming});
    if (++events > kMaxSwitchEvents) {
      throw IntegrationFailureSignal("switch events exceeded " + std::to_string(kMaxSwitchEvents) +
                                     "; switching times appear to accumulate");
    }
    const Real decay = real_exp<Real>(-best_dt);
    for (auto& xi : x) xi *= decay;
    x[static_cast<std::size_t>(target)] += Real(1) - decay;
    t = t1;
    target = incoming;
  }
  return path;
}

}  // namespace detail
}  // namespace evoelim
