#include "gca/automaton.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace gca {

void StateSet::fill() {
  for (std::size_t i = 0; i < n_; ++i) set(i);
}

bool StateSet::any() const {
  for (auto w : w_)
    if (w) return true;
  return false;
}

std::uint64_t StateSet::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (auto w : w_) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return h;
}

Elem DeBruijn::first_symbol(Elem word_code) const {
  std::int64_t rad = 1;
  for (int i = 0; i < word_len - 1; ++i) rad *= alphabet->order();
  return word_code / rad;
}

DeBruijnPtr build_automaton(const Shift& x, int min_word_len, std::int64_t cap) {
  if (x.dim() != 1) throw Error(Errc::NotOneDimensional, "automaton needs a 1D presentation");
  const GroupPtr& g = x.alphabet();
  const int ell = std::max({2, min_word_len, x.width()});
  std::int64_t words = 1;
  for (int i = 0; i < ell; ++i) {
    words *= g->order();
    if (words > cap)
      throw Error(Errc::PowerTooLarge, "automaton words |G|^" + std::to_string(ell) +
                                           " exceed cap " + std::to_string(cap));
  }
  const std::int64_t nstates_all = words / g->order();

  // decode each forbidden pattern once: (offset cells, values, extent)
  struct Fp {
    std::vector<int> cells;
    std::vector<Elem> values;
    int extent;
  };
  std::vector<Fp> fps;
  for (const auto& p : x.forbidden()) {
    Fp f;
    int hi = 0;
    for (const auto& c : p.shape.cells()) {
      f.cells.push_back(c[0]);
      hi = std::max(hi, c[0]);
    }
    f.values = p.values;
    f.extent = hi + 1;  // canonical patterns start at 0
    fps.push_back(std::move(f));
  }

  auto word_ok = [&](const std::vector<Elem>& w) {
    for (const auto& f : fps) {
      if (f.extent > ell) continue;
      for (int off = 0; off + f.extent <= ell; ++off) {
        bool match = true;
        for (std::size_t i = 0; i < f.cells.size() && match; ++i)
          match = w[static_cast<std::size_t>(off + f.cells[i])] == f.values[i];
        if (match) return false;
      }
    }
    return true;
  };

  auto a = std::make_shared<DeBruijn>();
  a->alphabet = g;
  a->word_len = ell;

  // degree-based trim to the bi-infinite core
  std::vector<std::int64_t> outd(static_cast<std::size_t>(nstates_all), 0);
  std::vector<std::int64_t> ind(static_cast<std::size_t>(nstates_all), 0);
  std::vector<char> alive(static_cast<std::size_t>(nstates_all), 0);
  std::vector<char> word_alive(static_cast<std::size_t>(words), 0);
  std::vector<Elem> w(static_cast<std::size_t>(ell), 0);
  for (Elem code = 0; code < words; ++code) {
    Elem c = code;
    for (int i = ell; i-- > 0;) {
      w[static_cast<std::size_t>(i)] = c % g->order();
      c /= g->order();
    }
    if (!word_ok(w)) continue;
    word_alive[static_cast<std::size_t>(code)] = 1;
    const Elem pre = code / g->order();
    const Elem suf = code % nstates_all;
    ++outd[static_cast<std::size_t>(pre)];
    ++ind[static_cast<std::size_t>(suf)];
    alive[static_cast<std::size_t>(pre)] = 1;
    alive[static_cast<std::size_t>(suf)] = 1;
  }
  std::deque<Elem> dead;
  for (Elem s = 0; s < nstates_all; ++s)
    if (alive[static_cast<std::size_t>(s)] &&
        (outd[static_cast<std::size_t>(s)] == 0 || ind[static_cast<std::size_t>(s)] == 0))
      dead.push_back(s);
  auto kill_word = [&](Elem code) {
    if (!word_alive[static_cast<std::size_t>(code)]) return;
    word_alive[static_cast<std::size_t>(code)] = 0;
    const Elem pre = code / g->order();
    const Elem suf = code % nstates_all;
    if (--outd[static_cast<std::size_t>(pre)] == 0 && alive[static_cast<std::size_t>(pre)]) {
      alive[static_cast<std::size_t>(pre)] = 0;
      dead.push_back(pre);
    }
    if (--ind[static_cast<std::size_t>(suf)] == 0 && alive[static_cast<std::size_t>(suf)]) {
      alive[static_cast<std::size_t>(suf)] = 0;
      dead.push_back(suf);
    }
  };
  while (!dead.empty()) {
    const Elem s = dead.front();
    dead.pop_front();
    alive[static_cast<std::size_t>(s)] = 0;
    // words with prefix s
    for (Elem sym = 0; sym < g->order(); ++sym) kill_word(s * g->order() + sym);
    // words with suffix s
    for (Elem sym = 0; sym < g->order(); ++sym) kill_word(sym * nstates_all + s);
  }

  for (Elem s = 0; s < nstates_all; ++s)
    if (alive[static_cast<std::size_t>(s)]) {
      a->state_index[s] = static_cast<int>(a->state_code.size());
      a->state_code.push_back(s);
    }
  a->out.resize(a->state_code.size());
  a->in_deg_list.resize(a->state_code.size());
  for (Elem code = 0; code < words; ++code) {
    if (!word_alive[static_cast<std::size_t>(code)]) continue;
    const Elem pre = code / g->order();
    const Elem suf = code % nstates_all;
    if (!alive[static_cast<std::size_t>(pre)] || !alive[static_cast<std::size_t>(suf)]) continue;
    const int u = a->state_index[pre];
    const int v = a->state_index[suf];
    a->out[static_cast<std::size_t>(u)].push_back({v, code});
    a->in_deg_list[static_cast<std::size_t>(v)].push_back(u);
  }
  return a;
}

std::vector<int> DeBruijn::scc_ids() const {
  const int n = states();
  std::vector<int> ids(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n)),
      num(static_cast<std::size_t>(n), -1);
  std::vector<int> stk;
  std::vector<char> on(static_cast<std::size_t>(n), 0);
  int counter = 0, comp = 0;
  // iterative Tarjan
  struct Frame {
    int v;
    std::size_t ei;
  };
  for (int root = 0; root < n; ++root) {
    if (num[static_cast<std::size_t>(root)] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    while (!call.empty()) {
      auto& f = call.back();
      const int v = f.v;
      if (f.ei == 0) {
        num[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = counter++;
        stk.push_back(v);
        on[static_cast<std::size_t>(v)] = 1;
      }
      bool descended = false;
      while (f.ei < out[static_cast<std::size_t>(v)].size()) {
        const int w = out[static_cast<std::size_t>(v)][f.ei].first;
        ++f.ei;
        if (num[static_cast<std::size_t>(w)] == -1) {
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on[static_cast<std::size_t>(w)])
          low[static_cast<std::size_t>(v)] =
              std::min(low[static_cast<std::size_t>(v)], num[static_cast<std::size_t>(w)]);
      }
      if (descended) continue;
      if (low[static_cast<std::size_t>(v)] == num[static_cast<std::size_t>(v)]) {
        while (true) {
          const int w = stk.back();
          stk.pop_back();
          on[static_cast<std::size_t>(w)] = 0;
          ids[static_cast<std::size_t>(w)] = comp;
          if (w == v) break;
        }
        ++comp;
      }
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().v;
        low[static_cast<std::size_t>(parent)] =
            std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(v)]);
      }
    }
  }
  return ids;
}

int DeBruijn::scc_count() const {
  auto ids = scc_ids();
  int m = 0;
  for (int i : ids) m = std::max(m, i + 1);
  return m;
}

bool DeBruijn::single_scc() const { return states() > 0 && scc_count() == 1; }

int DeBruijn::cycle_gcd() const {
  if (empty()) return 0;
  // gcd over edges inside one SCC of level(u)+1-level(v); for a strongly
  // connected graph this equals the gcd of all cycle lengths
  auto ids = scc_ids();
  int g = 0;
  const int n = states();
  std::vector<int> level(static_cast<std::size_t>(n), -1);
  for (int root = 0; root < n; ++root) {
    if (level[static_cast<std::size_t>(root)] != -1) continue;
    level[static_cast<std::size_t>(root)] = 0;
    std::deque<int> q{root};
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      for (auto [v, w] : out[static_cast<std::size_t>(u)]) {
        (void)w;
        if (ids[static_cast<std::size_t>(v)] != ids[static_cast<std::size_t>(u)]) continue;
        if (level[static_cast<std::size_t>(v)] == -1) {
          level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
          q.push_back(v);
        } else {
          g = std::gcd(g, std::abs(level[static_cast<std::size_t>(u)] + 1 -
                                   level[static_cast<std::size_t>(v)]));
        }
      }
    }
  }
  return g;
}

bool DeBruijn::deterministic_cycles() const {
  for (int s = 0; s < states(); ++s)
    if (out[static_cast<std::size_t>(s)].size() != 1 ||
        in_deg_list[static_cast<std::size_t>(s)].size() != 1)
      return false;
  return true;
}

std::vector<int> DeBruijn::cycle_lengths() const {
  std::vector<int> lens;
  std::vector<char> seen(static_cast<std::size_t>(states()), 0);
  for (int s = 0; s < states(); ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    int len = 0, v = s;
    while (!seen[static_cast<std::size_t>(v)]) {
      seen[static_cast<std::size_t>(v)] = 1;
      v = out[static_cast<std::size_t>(v)][0].first;
      ++len;
    }
    lens.push_back(len);
  }
  return lens;
}

namespace {

struct Scan {
  int lo = 0;            // first constrained position
  int steps = 0;         // number of advance steps
  std::vector<Elem> want;  // per step: required symbol or -1
};

Scan make_scan(const DeBruijn& a, const Pattern& p) {
  Scan s;
  Cell lo, hi;
  p.shape.bounds(lo, hi);
  s.lo = lo[0];
  s.steps = hi[0] - lo[0] + 1;
  s.want.assign(static_cast<std::size_t>(s.steps), -1);
  for (std::size_t i = 0; i < p.shape.size(); ++i)
    s.want[static_cast<std::size_t>(p.shape.cells()[i][0] - s.lo)] = p.values[i];
  return s;
}

}  // namespace

int scan_pattern(const DeBruijn& a, const Pattern& p) {
  if (a.empty()) return 0;
  if (p.shape.empty()) return -1;
  const Scan sc = make_scan(a, p);
  StateSet cur(static_cast<std::size_t>(a.states()));
  cur.fill();
  for (int j = 0; j < sc.steps; ++j) {
    StateSet nxt(static_cast<std::size_t>(a.states()));
    const Elem want = sc.want[static_cast<std::size_t>(j)];
    bool nonempty = false;
    for (int u = 0; u < a.states(); ++u) {
      if (!cur.test(static_cast<std::size_t>(u))) continue;
      for (auto [v, w] : a.out[static_cast<std::size_t>(u)]) {
        if (want >= 0 && a.reveal(w) != want) continue;
        nxt.set(static_cast<std::size_t>(v));
        nonempty = true;
      }
    }
    if (!nonempty) return j;
    cur = nxt;
  }
  return -1;
}

std::optional<PeriodicConfiguration> periodic_witness(const DeBruijn& a, const Pattern& p) {
  if (a.empty()) return std::nullopt;
  const Scan sc = make_scan(a, p);
  const int n = a.states();
  for (int base = 0; base < n; ++base) {
    // forward DFS through the constrained window from {base}
    // memo on (step, state) dead entries
    std::vector<std::vector<char>> dead(static_cast<std::size_t>(sc.steps + 1),
                                        std::vector<char>(static_cast<std::size_t>(n), 0));
    std::vector<Elem> syms;
    std::vector<int> path{base};
    std::function<bool(int, int)> go = [&](int step, int u) -> bool {
      if (step == sc.steps) {
        // close the cycle: BFS back to base recording symbols
        std::vector<int> prev(static_cast<std::size_t>(n), -1);
        std::vector<Elem> via(static_cast<std::size_t>(n), -1);
        std::deque<int> q{u};
        std::vector<char> vis(static_cast<std::size_t>(n), 0);
        vis[static_cast<std::size_t>(u)] = 1;
        bool found = (u == base && sc.steps > 0);
        int at = u;
        while (!q.empty() && !found) {
          const int x = q.front();
          q.pop_front();
          for (auto [y, w] : a.out[static_cast<std::size_t>(x)]) {
            if (vis[static_cast<std::size_t>(y)]) continue;
            vis[static_cast<std::size_t>(y)] = 1;
            prev[static_cast<std::size_t>(y)] = x;
            via[static_cast<std::size_t>(y)] = a.reveal(w);
            if (y == base) {
              found = true;
              at = y;
              break;
            }
            q.push_back(y);
          }
        }
        if (!found) return false;
        std::vector<Elem> tail;
        while (at != u) {
          tail.push_back(via[static_cast<std::size_t>(at)]);
          at = prev[static_cast<std::size_t>(at)];
        }
        std::reverse(tail.begin(), tail.end());
        syms.insert(syms.end(), tail.begin(), tail.end());
        return true;
      }
      if (dead[static_cast<std::size_t>(step)][static_cast<std::size_t>(u)]) return false;
      const Elem want = sc.want[static_cast<std::size_t>(step)];
      for (auto [v, w] : a.out[static_cast<std::size_t>(u)]) {
        if (want >= 0 && a.reveal(w) != want) continue;
        syms.push_back(a.reveal(w));
        if (go(step + 1, v)) return true;
        syms.pop_back();
      }
      dead[static_cast<std::size_t>(step)][static_cast<std::size_t>(u)] = 1;
      return false;
    };
    if (!go(0, base)) continue;
    const int period = static_cast<int>(syms.size());
    if (period == 0) continue;
    PeriodicConfiguration c;
    c.group = a.alphabet;
    c.periods = {period};
    c.fundamental.assign(static_cast<std::size_t>(period), a.alphabet->identity());
    // step j constrained the cell sc.lo + j
    for (int j = 0; j < period; ++j) {
      int cell = sc.lo + j;
      int m = cell % period;
      if (m < 0) m += period;
      c.fundamental[static_cast<std::size_t>(m)] = syms[static_cast<std::size_t>(j)];
    }
    if (c.contains_pattern(p)) return c;
  }
  return std::nullopt;
}

SubsetDfa::SubsetDfa(const DeBruijn& a, std::function<Elem(Elem)> label_of_word)
    : a_(a), label_of_word_(std::move(label_of_word)) {
  StateSet s(static_cast<std::size_t>(a_.states()));
  s.fill();
  intern(std::move(s));
}

int SubsetDfa::start() { return 0; }

int SubsetDfa::intern(StateSet s) {
  const auto h = s.hash();
  auto& bucket = by_hash_[h];
  for (int id : bucket)
    if (nodes_[static_cast<std::size_t>(id)].set == s) return id;
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{std::move(s), {}});
  expanded_.push_back(false);
  labels_cache_.emplace_back();
  bucket.push_back(id);
  return id;
}

void SubsetDfa::expand(int node) {
  if (expanded_[static_cast<std::size_t>(node)]) return;
  std::unordered_map<Elem, StateSet> move;
  const StateSet& cur = nodes_[static_cast<std::size_t>(node)].set;
  for (int u = 0; u < a_.states(); ++u) {
    if (!cur.test(static_cast<std::size_t>(u))) continue;
    for (auto [v, w] : a_.out[static_cast<std::size_t>(u)]) {
      const Elem lab = label_of_word_ ? label_of_word_(w) : a_.reveal(w);
      if (lab < 0) continue;
      auto it = move.find(lab);
      if (it == move.end())
        it = move.emplace(lab, StateSet(static_cast<std::size_t>(a_.states()))).first;
      it->second.set(static_cast<std::size_t>(v));
    }
  }
  std::vector<Elem> labels;
  labels.reserve(move.size());
  for (auto& [lab, set] : move) {
    // intern may grow nodes_, so re-index instead of holding a reference
    const int id = intern(std::move(set));
    nodes_[static_cast<std::size_t>(node)].next[lab] = id;
    labels.push_back(lab);
  }
  std::sort(labels.begin(), labels.end());
  labels_cache_[static_cast<std::size_t>(node)] = std::move(labels);
  expanded_[static_cast<std::size_t>(node)] = true;
}

int SubsetDfa::step(int node, Elem label) {
  expand(node);
  const auto& nx = nodes_[static_cast<std::size_t>(node)].next;
  auto it = nx.find(label);
  return it == nx.end() ? -1 : it->second;
}

const std::vector<Elem>& SubsetDfa::labels_from(int node) {
  expand(node);
  return labels_cache_[static_cast<std::size_t>(node)];
}

std::vector<Elem> SubsetDfa::words(int length, std::int64_t out_radix, std::int64_t cap) {
  std::vector<Elem> out;
  if (a_.empty()) return out;
  if (length == 0) return {0};
  // DFS over the word tree; nodes are shared via the lazy subset DFA
  struct Frame {
    int node;
    std::size_t li;
  };
  std::vector<Frame> stack{{start(), 0}};
  std::vector<Elem> digits;
  while (!stack.empty()) {
    auto& f = stack.back();
    if (static_cast<int>(stack.size()) - 1 == length) {
      Elem code = 0;
      for (Elem d : digits) code = code * out_radix + d;
      out.push_back(code);
      if (static_cast<std::int64_t>(out.size()) > cap)
        throw Error(Errc::PowerTooLarge, "word collection exceeds cap");
      stack.pop_back();
      if (!digits.empty()) digits.pop_back();
      continue;
    }
    const auto& labels = labels_from(f.node);
    if (f.li >= labels.size()) {
      stack.pop_back();
      if (!digits.empty()) digits.pop_back();
      continue;
    }
    const Elem lab = labels[f.li++];
    const int nxt = step(f.node, lab);
    digits.push_back(lab);
    stack.push_back({nxt, 0});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Elem> collect_words(const DeBruijn& a, int length,
                                const std::function<bool(Elem)>& symbol_filter,
                                const std::function<Elem(Elem)>& symbol_proj,
                                std::int64_t out_radix, std::int64_t cap) {
  if (out_radix == 0) out_radix = a.alphabet->order();
  std::function<Elem(Elem)> label;
  if (symbol_filter || symbol_proj) {
    label = [&a, symbol_filter, symbol_proj](Elem w) -> Elem {
      const Elem sym = a.reveal(w);
      if (symbol_filter && !symbol_filter(sym)) return -1;
      return symbol_proj ? symbol_proj(sym) : sym;
    };
  }
  SubsetDfa dfa(a, label);
  return dfa.words(length, out_radix, cap);
}

}  // namespace gca
