// Copyright 2026 The relocheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reloc/explorer.hpp"

#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "reloc/hash.hpp"

namespace reloc {

const char *to_string(BoundHit b) {
  switch (b) {
    case BoundHit::None:
      return "none";
    case BoundHit::Steps:
      return "steps";
    case BoundHit::Configs:
      return "configs";
    case BoundHit::Threads:
      return "threads";
  }
  return "?";
}

namespace {

constexpr std::uint64_t kPlain = 0x51;
constexpr std::uint64_t kLocTag = 0x52;
constexpr std::uint64_t kProphTag = 0x53;
constexpr std::uint64_t kNodeTag = 0x54;
constexpr std::uint64_t kSep = 0x55;
constexpr std::uint64_t kDangling = 0x56;

class Canonicalizer {
 public:
  explicit Canonicalizer(const Heap &heap) : heap_(heap), loc_map_(heap.cells.size(), kUnassigned) {}

  void root(const Expr &e) {
    h_.add(kSep);
    expr(e);
  }

  CanonicalKey finish() {
    h_.add(kSep);
    h_.add(0xFEED);
    for (std::size_t k = 0; k < discovered_.size(); ++k) {
      h_.add(kSep);
      expr(heap_.cells[discovered_[k]].expr());
    }
    return CanonicalKey{h_.hi(), h_.lo()};
  }

  void add(std::uint64_t v) { h_.add(v); }

 private:
  static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

  void expr(const Expr &e) {
    if (!e.has_runtime_ids()) {
      h_.add(kPlain);
      h_.add(e.hash());
      return;
    }
    switch (e.kind()) {
      case ExprKind::Loc: {
        h_.add(kLocTag);
        const std::size_t id = e.loc_id();
        if (id >= loc_map_.size()) {
          h_.add(kDangling);
          h_.add(id);
          return;
        }
        if (loc_map_[id] == kUnassigned) {
          loc_map_[id] = discovered_.size();
          discovered_.push_back(id);
        }
        h_.add(loc_map_[id]);
        return;
      }
      case ExprKind::Proph: {
        h_.add(kProphTag);
        auto [it, fresh] = proph_map_.try_emplace(e.proph_id(), proph_map_.size());
        h_.add(it->second);
        return;
      }
      default:
        break;
    }
    h_.add(kNodeTag);
    h_.add(static_cast<std::uint64_t>(e.kind()));
    switch (e.kind()) {
      case ExprKind::Rec:
        h_.add(hash_string(e.name()));
        h_.add(hash_string(e.name2()));
        break;
      case ExprKind::Match:
        h_.add(hash_string(e.name()));
        h_.add(hash_string(e.name2()));
        break;
      case ExprKind::Unpack:
        h_.add(hash_string(e.name()));
        break;
      case ExprKind::Proj:
        h_.add(static_cast<std::uint64_t>(e.proj_index()));
        break;
      case ExprKind::BinOp:
        h_.add(static_cast<std::uint64_t>(e.binop_kind()));
        break;
      case ExprKind::UnOp:
        h_.add(static_cast<std::uint64_t>(e.unop_kind()));
        break;
      case ExprKind::Ascribe:
        h_.add(e.type().hash());
        break;
      default:
        break;
    }
    h_.add(e.arity());
    for (const Expr &c : e.children()) expr(c);
  }

  const Heap &heap_;
  std::vector<std::size_t> loc_map_;
  std::vector<std::size_t> discovered_;
  std::unordered_map<std::size_t, std::size_t> proph_map_;
  Hasher128 h_;
};

struct StackFrame {
  Config cfg;
  CanonicalKey key;
  std::size_t next_thread = 0;
};

struct StuckKey {
  CanonicalKey key;
  std::size_t thread;
  friend auto operator<=>(const StuckKey &, const StuckKey &) = default;
};

// Shared DFS for explore_all and search_outcome. With a goal, stops at the
// first satisfying outcome and records only that one.
class Explorer {
 public:
  Explorer(const Bounds &bounds, const OutcomeGoal *goal) : bounds_(bounds), goal_(goal) {}

  void run(const Expr &e) {
    Config init = init_config(e);
    CanonicalKey k = canonicalize(init);
    memo_.insert(k);
    if (bounds_.cycle_is_step_bound) on_path_.insert(k);
    stack_.push_back(StackFrame{std::move(init), k, 0});
    if (visit(stack_.back())) return;

    while (!stack_.empty()) {
      StackFrame &top = stack_.back();
      if (top.next_thread >= top.cfg.threads.size()) {
        if (bounds_.cycle_is_step_bound) on_path_.erase(top.key);
        stack_.pop_back();
        if (!path_.empty()) path_.pop_back();
        continue;
      }
      const std::size_t i = top.next_thread++;
      ThreadStep r = thread_step(top.cfg, i);
      if (r.status == ThreadStatus::IsValue) continue;
      if (r.status == ThreadStatus::Stuck) {
        record_stuck(top, i, *r.stuck_redex);
        continue;
      }
      if (r.step->config.threads.size() > bounds_.max_threads) {
        hit(BoundHit::Threads);
        continue;
      }
      if (path_.size() >= bounds_.max_steps) {
        hit(BoundHit::Steps);
        continue;
      }
      CanonicalKey k = canonicalize(r.step->config);
      if (memo_.count(k) != 0) {
        if (bounds_.cycle_is_step_bound && on_path_.count(k) != 0) hit(BoundHit::Steps);
        continue;
      }
      if (memo_.size() >= bounds_.max_configs) {
        hit(BoundHit::Configs);
        return;
      }
      memo_.insert(k);
      if (bounds_.cycle_is_step_bound) on_path_.insert(k);
      path_.push_back(TraceStep{i, r.step->tag});
      stack_.push_back(StackFrame{std::move(r.step->config), k, 0});
      if (visit(stack_.back())) return;
    }
  }

  ExploreReport report;
  std::optional<Outcome> found;

 private:
  // Returns true when the search should stop.
  bool visit(const StackFrame &f) {
    ++report.states_visited;
    const Expr &main = f.cfg.threads[0];
    if (!main.is_value()) return false;
    Val v(main);
    if (goal_ != nullptr) {
      if ((*goal_)(v, f.cfg.heap)) {
        found = Outcome{v, f.cfg.heap, path_, canonicalize_value(v, f.cfg.heap)};
        return true;
      }
      return false;
    }
    CanonicalKey k = canonicalize_value(v, f.cfg.heap);
    if (outcome_keys_.insert(k).second) {
      report.outcomes.push_back(Outcome{std::move(v), f.cfg.heap, path_, k});
    }
    return false;
  }

  void record_stuck(const StackFrame &f, std::size_t i, const Expr &redex) {
    if (!stuck_keys_.insert(StuckKey{f.key, i}).second) return;
    report.stuck.push_back(StuckThread{f.cfg, i, redex, path_});
  }

  void hit(BoundHit b) {
    report.complete = false;
    if (report.bound_hit == BoundHit::None) report.bound_hit = b;
  }

  const Bounds &bounds_;
  const OutcomeGoal *goal_;
  std::vector<StackFrame> stack_;
  Trace path_;
  std::unordered_set<CanonicalKey, CanonicalKeyHash> memo_;
  std::unordered_set<CanonicalKey, CanonicalKeyHash> on_path_;
  std::unordered_set<CanonicalKey, CanonicalKeyHash> outcome_keys_;
  std::set<StuckKey> stuck_keys_;
};

}  // namespace

CanonicalKey canonicalize(const Config &cfg) {
  Canonicalizer c(cfg.heap);
  c.add(cfg.threads.size());
  for (const Expr &t : cfg.threads) c.root(t);
  return c.finish();
}

CanonicalKey canonicalize_value(const Val &v, const Heap &heap) {
  Canonicalizer c(heap);
  c.add(1);
  c.root(v.expr());
  return c.finish();
}

CanonicalKey canonicalize_roots(std::span<const Expr> roots, const Heap &heap) {
  Canonicalizer c(heap);
  c.add(roots.size());
  for (const Expr &r : roots) c.root(r);
  return c.finish();
}

ExploreReport explore_all(const Expr &e, const Bounds &bounds) {
  Explorer x(bounds, nullptr);
  x.run(e);
  return std::move(x.report);
}

SearchResult search_outcome(const Expr &e, const OutcomeGoal &goal, const Bounds &bounds) {
  Explorer x(bounds, &goal);
  x.run(e);
  SearchResult r;
  r.found = std::move(x.found);
  r.complete = x.report.complete;
  r.bound_hit = x.report.bound_hit;
  r.states_visited = x.report.states_visited;
  return r;
}

}  // namespace reloc
