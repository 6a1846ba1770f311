#include "search.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <thread>

namespace zcap::detail {

std::vector<Point> triple_class_representatives(int n, std::vector<int>* class_of_point) {
  std::vector<Point> reps;
  std::vector<int> cls(static_cast<std::size_t>(n) * n, std::numeric_limits<int>::max());
  for (int e = 1; e < n; ++e) {
    if (n % e != 0) continue;
    for (int x = 0; x < e; ++x) {
      const int id = static_cast<int>(reps.size());
      reps.push_back({x, e});
      for (int u = 0; u < n; ++u)
        for (int v = 1; v < n; ++v)
          if (gcd(v, n) == e && u % e == x) cls[u * n + v] = id;
    }
  }
  if (class_of_point) *class_of_point = std::move(cls);
  return reps;
}

Geometry make_geometry(int n, bool permutation) {
  Geometry g;
  g.n = n;
  g.points = n * n;
  g.index = &line_index(n);
  const LineIndex& idx = *g.index;
  g.capacity.assign(static_cast<std::size_t>(idx.line_count()), 2);
  if (permutation) {
    for (int l = 0; l < idx.line_count(); ++l) {
      const Point& t = idx.direction(idx.line_class(l));
      if ((t.u == 1 % n && t.v == 0) || (t.u == 0 && t.v == 1 % n)) g.capacity[l] = 1;
    }
  }
  g.content_of.resize(static_cast<std::size_t>(g.points));
  g.to_axis.resize(static_cast<std::size_t>(g.points));
  for (int d = 0; d < g.points; ++d) {
    g.content_of[d] = static_cast<int>(content(d / n, d % n, n));
    if (g.content_of[d] == 1 && n > 1) g.to_axis[d] = to_first_axis({d / n, d % n}, n);
  }
  triple_class_representatives(n, &g.triple_class);
  const int classes = idx.class_count();
  g.lines_of_point.resize(static_cast<std::size_t>(g.points) * classes);
  for (int p = 0; p < g.points; ++p) {
    auto ls = idx.lines_through(p);
    std::copy(ls.begin(), ls.end(), g.lines_of_point.begin() + static_cast<std::ptrdiff_t>(p) * classes);
  }
  return g;
}

namespace {

template <int W>
class Searcher {
 public:
  Searcher(const Geometry& geo, const std::vector<Bits<W>>& line_masks, const CaseSpec& spec, const RunRequest& req,
           Control& control, int case_index)
      : geo_(geo), masks_(line_masks), spec_(spec), req_(req), control_(control), case_index_(case_index) {
    const int classes = geo.index->class_count();
    classes_ = classes;
    count_.assign(geo.capacity.size(), 0);
    if (!spec.forbidden_difference.empty()) {
      forbid_masks_.resize(static_cast<std::size_t>(geo.points));
      for (int p = 0; p < geo.points; ++p)
        for (int q = 0; q < geo.points; ++q)
          if (q != p && spec.forbidden_difference[geo.diff(q, p)]) forbid_masks_[p].set(q);
    }
    if (!spec.pair_exclusions.empty()) {
      partners_.resize(static_cast<std::size_t>(geo.points));
      for (auto [a, b] : spec.pair_exclusions) {
        partners_[a].push_back(b);
        partners_[b].push_back(a);
      }
    }
  }

  CaseOutcome run() {
    CaseOutcome out;
    for (int p = 0; p < geo_.points; ++p) {
      addable_.set(p);
      cand_.set(p);
    }
    for (int p : spec_.fixed_out) cand_.reset(p);
    for (int p : spec_.fixed_in) {
      if (!cand_.test(p) || !admissible(p)) {
        out.feasible = false;
        out.finished = true;
        return out;
      }
      push(p);
    }
    out.root_bound = static_cast<int>(cap_.size()) + class_bound(std::numeric_limits<int>::min());
    best_size_ = req_.mode == Mode::Maximize ? req_.threshold : -1;
    if (req_.mode == Mode::Maximize)
      search_max();
    else
      search_complete();
    flush_nodes();
    out.finished = !aborted_;
    out.best = best_;
    out.nodes = nodes_;
    return out;
  }

 private:
  bool admissible(int s) const {
    for (int q : partners_.empty() ? empty_ : partners_[s])
      if (std::find(cap_.begin(), cap_.end(), q) != cap_.end()) return false;
    if (spec_.min_triple_class >= 0) {
      const int cmin = spec_.min_triple_class;
      for (int p : cap_) {
        if (geo_.content_of[geo_.diff(s, p)] != 1) continue;
        for (int r : cap_) {
          if (r == p) continue;
          if (geo_.class_relative(p, s, r) < cmin || geo_.class_relative(s, p, r) < cmin) return false;
        }
      }
    }
    return true;
  }

  void push(int s) {
    if (spec_.min_triple_class >= 0) {
      const int cmin = spec_.min_triple_class;
      for (int p : cap_) {
        if (geo_.content_of[geo_.diff(s, p)] != 1) continue;
        Bits<W> drop;
        cand_.for_each([&](int r) {
          if (r != s && (geo_.class_relative(p, s, r) < cmin || geo_.class_relative(s, p, r) < cmin)) drop.set(r);
        });
        cand_.andnot(drop);
      }
    }
    cap_.push_back(s);
    addable_.reset(s);
    cand_.reset(s);
    const int* lines = &geo_.lines_of_point[static_cast<std::size_t>(s) * classes_];
    for (int c = 0; c < classes_; ++c) {
      const int l = lines[c];
      if (++count_[l] == geo_.capacity[l]) {
        addable_.andnot(masks_[l]);
        cand_.andnot(masks_[l]);
      }
    }
    if (!forbid_masks_.empty()) cand_.andnot(forbid_masks_[s]);
    if (!partners_.empty())
      for (int q : partners_[s]) cand_.reset(q);
  }

  void pop() {
    const int s = cap_.back();
    cap_.pop_back();
    const int* lines = &geo_.lines_of_point[static_cast<std::size_t>(s) * classes_];
    for (int c = 0; c < classes_; ++c) --count_[lines[c]];
  }

  // Least, over parallel classes, of the number of further points the
  // candidates can contribute; stops early once a class is at or below
  // `stop_at` (a value at which the caller prunes anyway).
  int class_bound(int stop_at) const {
    int best = std::numeric_limits<int>::max();
    const int base = 0;
    for (int c = 0; c < classes_; ++c) {
      int s = base;
      const int begin = geo_.index->class_begin(c), end = geo_.index->class_end(c);
      for (int l = begin; l < end; ++l) {
        const int room = geo_.capacity[l] - count_[l];
        if (room <= 0) continue;
        const int k = Bits<W>::count_and(cand_, masks_[l]);
        s += std::min(room, k);
        if (s >= best) break;
      }
      if (s < best) {
        best = s;
        if (best <= stop_at) return best;
      }
    }
    return best;
  }

  bool tick() {
    if (aborted_) return false;
    if ((++nodes_ & 1023) == 0) {
      flush_nodes();
      if (case_index_ > control_.cancel_above.load(std::memory_order_relaxed)) aborted_ = true;
      if (control_.timed_out.load(std::memory_order_relaxed)) aborted_ = true;
      if (control_.deadline && std::chrono::steady_clock::now() > *control_.deadline) {
        control_.timed_out = true;
        aborted_ = true;
      }
    }
    return !aborted_;
  }

  void flush_nodes() {
    control_.nodes.fetch_add(nodes_ - flushed_, std::memory_order_relaxed);
    flushed_ = nodes_;
  }

  void record() {
    best_size_ = static_cast<int>(cap_.size());
    best_ = cap_;
    int cur = control_.shared_best.load();
    while (best_size_ > cur && !control_.shared_best.compare_exchange_weak(cur, best_size_)) {
    }
  }

  void search_max() {
    if (!tick()) return;
    const int size = static_cast<int>(cap_.size());
    if (size > best_size_) {
      record();
      if (best_size_ >= req_.upper) {
        control_.cancel_from(case_index_);
        done_ = true;
        return;
      }
    }
    while (!done_ && !aborted_) {
      // Prune when no completion can beat the local incumbent, or cannot even
      // reach the best value found by any case.
      const int floor = std::max(best_size_, control_.shared_best.load(std::memory_order_relaxed) - 1);
      const int bound = size + class_bound(floor - size);
      if (bound <= floor) return;
      const int p = cand_.first();
      if (p < 0) return;
      const Bits<W> saved_cand = cand_, saved_addable = addable_;
      if (admissible(p)) {
        push(p);
        search_max();
        pop();
        addable_ = saved_addable;
      }
      cand_ = saved_cand;
      cand_.reset(p);
    }
  }

  // Every addable point outside the candidate set must still be blockable:
  // some line through it has to be able to collect a full load of cap points.
  bool uncovered_points_blockable(int remaining) const {
    Bits<W> open = addable_;
    open.andnot(cand_);
    bool ok = true;
    open.for_each([&](int x) {
      if (!ok) return;
      const int* lines = &geo_.lines_of_point[static_cast<std::size_t>(x) * classes_];
      for (int c = 0; c < classes_; ++c) {
        const int l = lines[c];
        const int need = geo_.capacity[l] - count_[l];
        if (need <= remaining && Bits<W>::count_and(cand_, masks_[l]) >= need) return;
      }
      ok = false;
    });
    return ok;
  }

  void search_complete() {
    if (!tick()) return;
    const int size = static_cast<int>(cap_.size());
    if (size == req_.target) {
      if (!addable_.any()) {
        best_ = cap_;
        done_ = true;
        control_.cancel_from(case_index_);
      }
      return;
    }
    const int remaining = req_.target - size;
    while (!done_ && !aborted_) {
      if (!cand_.any()) return;
      if (class_bound(remaining - 1) < remaining) return;
      if (!uncovered_points_blockable(remaining)) return;
      const int p = cand_.first();
      const Bits<W> saved_cand = cand_, saved_addable = addable_;
      if (admissible(p)) {
        push(p);
        search_complete();
        pop();
        addable_ = saved_addable;
      }
      cand_ = saved_cand;
      cand_.reset(p);
    }
  }

  const Geometry& geo_;
  const std::vector<Bits<W>>& masks_;
  const CaseSpec& spec_;
  const RunRequest& req_;
  Control& control_;
  const int case_index_;
  int classes_ = 0;

  std::vector<int> cap_;
  Bits<W> addable_, cand_;
  std::vector<std::uint8_t> count_;
  std::vector<Bits<W>> forbid_masks_;
  std::vector<std::vector<int>> partners_;
  const std::vector<int> empty_;

  int best_size_ = -1;
  std::vector<int> best_;
  bool done_ = false;
  bool aborted_ = false;
  std::uint64_t nodes_ = 0, flushed_ = 0;
};

template <int W>
std::vector<CaseOutcome> run_with(const Geometry& geo, const std::vector<CaseSpec>& cases, const RunRequest& req,
                                  Control& control) {
  const LineIndex& idx = *geo.index;
  std::vector<Bits<W>> masks(static_cast<std::size_t>(idx.line_count()));
  for (int l = 0; l < idx.line_count(); ++l)
    for (int p : idx.points_on(l)) masks[l].set(p);

  std::vector<CaseOutcome> outcomes(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cases.size()) return;
      if (static_cast<int>(i) > control.cancel_above.load() || control.timed_out.load()) {
        outcomes[i].finished = false;
        continue;
      }
      Searcher<W> s(geo, masks, cases[i], req, control, static_cast<int>(i));
      outcomes[i] = s.run();
    }
  };
  const int threads = std::max(1, std::min<int>(req.threads, static_cast<int>(cases.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return outcomes;
}

}  // namespace

std::vector<CaseOutcome> run_cases(const Geometry& geo, const std::vector<CaseSpec>& cases, const RunRequest& req,
                                   Control& control) {
  const int words = (geo.points + 63) / 64;
  if (words <= 1) return run_with<1>(geo, cases, req, control);
  if (words <= 2) return run_with<2>(geo, cases, req, control);
  if (words <= 3) return run_with<3>(geo, cases, req, control);
  if (words <= 4) return run_with<4>(geo, cases, req, control);
  if (words <= 6) return run_with<6>(geo, cases, req, control);
  if (words <= 8) return run_with<8>(geo, cases, req, control);
  if (words <= 12) return run_with<12>(geo, cases, req, control);
  if (words <= 16) return run_with<16>(geo, cases, req, control);
  throw std::invalid_argument("search supports at most 1024 points");
}

}  // namespace zcap::detail
