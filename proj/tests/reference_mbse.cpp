#include "reference_mbse.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace reference {

namespace {

struct Slot {
  std::size_t arm;
  std::uint64_t n;
  double r;
};

}  // namespace

std::string simulate(const std::vector<std::vector<double>>& tapes, std::uint64_t horizon, const Params& params) {
  const std::size_t K = tapes.size();
  const int B = params.passes;
  const double T = static_cast<double>(horizon);
  const double inf = std::numeric_limits<double>::infinity();
  const double log_t = std::log(T);

  std::string out;
  auto emit = [&](const std::string& line) { out += line + "\n"; };
  std::vector<std::size_t> cursor(K, 0);
  std::vector<bool> resident(K, false);
  std::uint64_t t = 0;

  auto play = [&](std::size_t arm) {
    const double reward = tapes[arm][cursor[arm]++];
    ++t;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", reward);
    emit("{\"ev\":\"play\",\"arm\":" + std::to_string(arm) + ",\"reward\":" + buf + "}");
    return reward;
  };
  auto discard = [&](std::size_t arm) {
    resident[arm] = false;
    emit("{\"ev\":\"discard\",\"arm\":" + std::to_string(arm) + "}");
  };
  auto lcb = [&](const Slot& s) { return s.n == 0 ? -inf : s.r / s.n - std::sqrt(params.c * log_t / s.n); };
  auto ucb = [&](const Slot& s) { return s.n == 0 ? inf : s.r / s.n + std::sqrt(params.c * log_t / s.n); };

  std::vector<Slot> active;
  bool have_best = false;
  std::size_t best = 0;
  double best_lcb = -inf;
  double N = 1.0;

  for (int b = 1; b <= B; ++b) {
    emit("{\"ev\":\"pass\",\"pass\":" + std::to_string(b) + "}");
    if (params.w == 1)
      N = std::pow(T, std::pow(2.0, B) / (std::pow(2.0, B + 1) - 1.0)) * std::sqrt(N);
    else
      N = std::pow(T, 1.0 / (B + 1)) * N;
    double cap_real = params.w == 1 ? N / (static_cast<double>(K) * B) : N;
    cap_real = std::floor(cap_real * (1.0 + 1e-12));
    const std::uint64_t cap = cap_real < 1.0 ? 1 : static_cast<std::uint64_t>(cap_real);

    for (Slot& s : active) {
      s.n = 0;
      s.r = 0.0;
    }
    std::size_t pos = 0;
    bool drained = false;

    while (true) {
      if (t >= horizon) return out;

      while (!drained && active.size() + 1 < params.memory) {
        while (pos < K && resident[pos]) ++pos;
        if (pos == K) {
          drained = true;
          break;
        }
        resident[pos] = true;
        emit("{\"ev\":\"read\",\"arm\":" + std::to_string(pos) + "}");
        active.push_back({pos, 0, 0.0});
        ++pos;
      }
      if (active.empty()) break;

      std::size_t lo = 0;
      for (std::size_t k = 1; k < active.size(); ++k)
        if (active[k].n < active[lo].n || (active[k].n == active[lo].n && active[k].arm < active[lo].arm)) lo = k;

      if (active[lo].n >= cap) {
        if (drained) break;
        std::size_t hi = 0;
        for (std::size_t k = 1; k < active.size(); ++k)
          if (active[k].n > active[hi].n || (active[k].n == active[hi].n && active[k].arm < active[hi].arm)) hi = k;
        const std::size_t gone = active[hi].arm;
        active.erase(active.begin() + static_cast<long>(hi));
        if (!(have_best && best == gone)) discard(gone);
      } else {
        Slot& s = active[lo];
        s.r += play(s.arm);
        ++s.n;
        const double l = lcb(s);
        if (l > best_lcb || (l == best_lcb && have_best && s.arm < best)) {
          const bool had = have_best;
          const std::size_t old = best;
          have_best = true;
          best = s.arm;
          best_lcb = l;
          if (had && old != s.arm) {
            bool old_active = false;
            for (const Slot& a : active) old_active = old_active || a.arm == old;
            if (!old_active) discard(old);
          }
        }
      }

      if (t >= horizon) return out;
      const double threshold = std::max(0.0, best_lcb);
      std::size_t victim = K;
      std::size_t victim_slot = 0;
      for (std::size_t k = 0; k < active.size(); ++k)
        if (ucb(active[k]) < threshold && active[k].arm < victim) {
          victim = active[k].arm;
          victim_slot = k;
        }
      if (victim != K) {
        active.erase(active.begin() + static_cast<long>(victim_slot));
        if (!(have_best && best == victim)) discard(victim);
      }
    }
  }

  while (have_best && t < horizon) play(best);
  return out;
}

}  // namespace reference
