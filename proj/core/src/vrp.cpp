#include "gridplan/vrp.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <tuple>

#include "gridplan/error.hpp"

namespace gridplan {

CostMatrix::CostMatrix(std::size_t s, std::size_t t)
    : sources(s), targets(t), cost((s + t) * (s + t), kInfinity) {
  for (std::size_t i = 0; i < size(); ++i) at(i, i) = 0;
}

std::int64_t route_cost(const CostMatrix& m, std::size_t vehicle, const std::vector<std::size_t>& route,
                        bool return_to_start) {
  if (route.empty()) return 0;
  std::int64_t total = 0;
  std::size_t prev = vehicle;
  auto add = [&](std::size_t to) {
    const auto c = m.at(prev, to);
    if (c >= CostMatrix::kInfinity || total >= CostMatrix::kInfinity) {
      total = CostMatrix::kInfinity;
    } else {
      total += c;
    }
    prev = to;
  };
  for (auto k : route) add(m.target_entity(k));
  if (return_to_start) add(vehicle);
  return std::min(total, CostMatrix::kInfinity);
}

namespace {

constexpr auto kInf = CostMatrix::kInfinity;

std::int64_t add_finite(std::int64_t a, std::int64_t b) {
  return (a >= kInf || b >= kInf) ? kInf : a + b;
}

class LocalSearch {
 public:
  LocalSearch(const CostMatrix& m, const VrpOptions& options, std::vector<std::vector<std::size_t>>& routes)
      : m_(m), options_(options), routes_(routes), costs_(routes.size()) {
    for (std::size_t v = 0; v < routes_.size(); ++v) costs_[v] = cost(v, routes_[v]);
  }

  std::size_t run() {
    std::size_t moves = 0;
    while (moves < options_.max_moves &&
           (two_opt() || relocate() || swap() || tail_exchange() || segment_relocate())) {
      ++moves;
    }
    return moves;
  }

 private:
  std::int64_t cost(std::size_t v, const std::vector<std::size_t>& r) const {
    return route_cost(m_, v, r, options_.return_to_start);
  }

  bool two_opt() {
    for (std::size_t v = 0; v < routes_.size(); ++v) {
      auto& r = routes_[v];
      for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        for (std::size_t j = i + 1; j < r.size(); ++j) {
          scratch_ = r;
          std::reverse(scratch_.begin() + static_cast<std::ptrdiff_t>(i),
                       scratch_.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          const auto c = cost(v, scratch_);
          if (c < costs_[v]) {
            r.swap(scratch_);
            costs_[v] = c;
            return true;
          }
        }
      }
    }
    return false;
  }

  bool relocate() {
    for (std::size_t a = 0; a < routes_.size(); ++a) {
      for (std::size_t i = 0; i < routes_[a].size(); ++i) {
        std::vector<std::size_t> from = routes_[a];
        const auto k = from[i];
        from.erase(from.begin() + static_cast<std::ptrdiff_t>(i));
        const auto from_cost = cost(a, from);
        for (std::size_t b = 0; b < routes_.size(); ++b) {
          if (b == a) {
            // Same route: move the target to another position.
            for (std::size_t pos = 0; pos <= from.size(); ++pos) {
              if (pos == i) continue;
              scratch_ = from;
              scratch_.insert(scratch_.begin() + static_cast<std::ptrdiff_t>(pos), k);
              const auto c = cost(a, scratch_);
              if (c < costs_[a]) {
                routes_[a].swap(scratch_);
                costs_[a] = c;
                return true;
              }
            }
            continue;
          }
          for (std::size_t pos = 0; pos <= routes_[b].size(); ++pos) {
            scratch_ = routes_[b];
            scratch_.insert(scratch_.begin() + static_cast<std::ptrdiff_t>(pos), k);
            const auto to_cost = cost(b, scratch_);
            if (add_finite(from_cost, to_cost) < costs_[a] + costs_[b]) {
              routes_[a] = std::move(from);
              routes_[b].swap(scratch_);
              costs_[a] = from_cost;
              costs_[b] = to_cost;
              return true;
            }
          }
        }
      }
    }
    return false;
  }

  bool swap() {
    for (std::size_t a = 0; a < routes_.size(); ++a) {
      for (std::size_t b = a + 1; b < routes_.size(); ++b) {
        for (std::size_t i = 0; i < routes_[a].size(); ++i) {
          for (std::size_t j = 0; j < routes_[b].size(); ++j) {
            auto ra = routes_[a];
            auto rb = routes_[b];
            std::swap(ra[i], rb[j]);
            const auto ca = cost(a, ra);
            const auto cb = cost(b, rb);
            if (add_finite(ca, cb) < costs_[a] + costs_[b]) {
              routes_[a] = std::move(ra);
              routes_[b] = std::move(rb);
              costs_[a] = ca;
              costs_[b] = cb;
              return true;
            }
          }
        }
      }
    }
    return false;
  }

  // Inter-route 2-opt*: route a keeps its head and takes b's tail, and vice versa.
  bool tail_exchange() {
    for (std::size_t a = 0; a < routes_.size(); ++a) {
      for (std::size_t b = a + 1; b < routes_.size(); ++b) {
        const auto& ra = routes_[a];
        const auto& rb = routes_[b];
        for (std::size_t i = 0; i <= ra.size(); ++i) {
          for (std::size_t j = 0; j <= rb.size(); ++j) {
            if (i == ra.size() && j == rb.size()) continue;
            std::vector<std::size_t> na(ra.begin(), ra.begin() + static_cast<std::ptrdiff_t>(i));
            na.insert(na.end(), rb.begin() + static_cast<std::ptrdiff_t>(j), rb.end());
            std::vector<std::size_t> nb(rb.begin(), rb.begin() + static_cast<std::ptrdiff_t>(j));
            nb.insert(nb.end(), ra.begin() + static_cast<std::ptrdiff_t>(i), ra.end());
            const auto ca = cost(a, na);
            const auto cb = cost(b, nb);
            if (add_finite(ca, cb) < costs_[a] + costs_[b]) {
              routes_[a] = std::move(na);
              routes_[b] = std::move(nb);
              costs_[a] = ca;
              costs_[b] = cb;
              return true;
            }
          }
        }
      }
    }
    return false;
  }

  // Or-opt: a run of 2 or 3 consecutive targets moves to any position of any
  // route, in either orientation.
  bool segment_relocate() {
    for (std::size_t a = 0; a < routes_.size(); ++a) {
      for (std::size_t len = 2; len <= 3; ++len) {
        for (std::size_t i = 0; i + len <= routes_[a].size(); ++i) {
          const auto first = routes_[a].begin() + static_cast<std::ptrdiff_t>(i);
          std::vector<std::size_t> seg(first, first + static_cast<std::ptrdiff_t>(len));
          std::vector<std::size_t> from = routes_[a];
          from.erase(from.begin() + static_cast<std::ptrdiff_t>(i),
                     from.begin() + static_cast<std::ptrdiff_t>(i + len));
          const auto from_cost = cost(a, from);
          for (std::size_t b = 0; b < routes_.size(); ++b) {
            const auto& base = b == a ? from : routes_[b];
            for (std::size_t pos = 0; pos <= base.size(); ++pos) {
              for (bool reversed : {false, true}) {
                if (b == a && pos == i && !reversed) continue;
                scratch_ = base;
                if (reversed) {
                  scratch_.insert(scratch_.begin() + static_cast<std::ptrdiff_t>(pos), seg.rbegin(), seg.rend());
                } else {
                  scratch_.insert(scratch_.begin() + static_cast<std::ptrdiff_t>(pos), seg.begin(), seg.end());
                }
                const auto c = cost(b, scratch_);
                const bool better = b == a ? c < costs_[a] : add_finite(from_cost, c) < costs_[a] + costs_[b];
                if (!better) continue;
                if (b != a) {
                  routes_[a] = std::move(from);
                  costs_[a] = from_cost;
                }
                routes_[b].swap(scratch_);
                costs_[b] = c;
                return true;
              }
            }
          }
        }
      }
    }
    return false;
  }

  const CostMatrix& m_;
  const VrpOptions& options_;
  std::vector<std::vector<std::size_t>>& routes_;
  std::vector<std::int64_t> costs_;
  std::vector<std::size_t> scratch_;
};

// Seeded permutation rank per target, used only to order equal-cost candidates.
std::vector<std::size_t> tie_ranks(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;
  return rank;
}

}  // namespace

VrpSolution solve_vrp(const CostMatrix& m, std::size_t num_vehicles, std::uint64_t seed, const VrpOptions& options) {
  if (num_vehicles != m.sources || num_vehicles == 0) {
    throw Error(ErrorCode::kInvalidArgument, "vehicle count must equal the number of sources");
  }
  if (m.cost.size() != m.size() * m.size()) throw Error(ErrorCode::kInvalidArgument, "matrix is not square");

  std::vector<std::int64_t> unreachable;
  for (std::size_t k = 0; k < m.targets; ++k) {
    bool any = false;
    for (std::size_t v = 0; v < num_vehicles && !any; ++v) any = m.at(v, m.target_entity(k)) < kInf;
    if (!any) unreachable.push_back(static_cast<std::int64_t>(k));
  }
  if (!unreachable.empty()) {
    std::string list;
    for (auto k : unreachable) list += " " + std::to_string(k);
    throw Error(ErrorCode::kInfeasible, "target indices unreachable from every vehicle:" + list);
  }

  VrpSolution sol;
  sol.routes.assign(num_vehicles, {});
  const auto rank = tie_ranks(m.targets, seed);
  std::vector<char> assigned(m.targets, 0);
  const bool closed = options.return_to_start;

  for (std::size_t placed = 0; placed < m.targets; ++placed) {
    // (delta, rank, vehicle, position, target)
    std::tuple<std::int64_t, std::size_t, std::size_t, std::size_t, std::size_t> best{kInf, 0, 0, 0, 0};
    bool found = false;
    for (std::size_t k = 0; k < m.targets; ++k) {
      if (assigned[k]) continue;
      const auto tk = m.target_entity(k);
      for (std::size_t v = 0; v < num_vehicles; ++v) {
        const auto& r = sol.routes[v];
        for (std::size_t pos = 0; pos <= r.size(); ++pos) {
          const auto prev = pos == 0 ? v : m.target_entity(r[pos - 1]);
          const bool has_next = pos < r.size() || closed;
          const auto next = pos < r.size() ? m.target_entity(r[pos]) : v;
          std::int64_t delta = m.at(prev, tk);
          if (delta >= kInf) continue;
          if (has_next) {
            const auto in = m.at(tk, next);
            if (in >= kInf) continue;
            // An empty closed route has no prev->next arc to remove.
            const auto removed = (pos == 0 && r.empty()) ? 0 : m.at(prev, next);
            delta += in - removed;
          }
          const std::tuple candidate{delta, rank[k], v, pos, k};
          if (!found || candidate < best) {
            best = candidate;
            found = true;
          }
        }
      }
    }
    if (!found) {
      std::string list;
      for (std::size_t k = 0; k < m.targets; ++k) {
        if (!assigned[k]) list += " " + std::to_string(k);
      }
      throw Error(ErrorCode::kInfeasible, "no finite insertion for target indices:" + list);
    }
    const auto [delta, r, v, pos, k] = best;
    auto& route = sol.routes[v];
    route.insert(route.begin() + static_cast<std::ptrdiff_t>(pos), k);
    assigned[k] = 1;
  }

  auto total = [&] {
    std::int64_t sum = 0;
    for (std::size_t v = 0; v < num_vehicles; ++v) {
      sum = add_finite(sum, route_cost(m, v, sol.routes[v], closed));
    }
    return sum;
  };
  sol.construction_cost = total();
  sol.moves = LocalSearch(m, options, sol.routes).run();
  sol.total_cost = total();
  return sol;
}

}  // namespace gridplan
