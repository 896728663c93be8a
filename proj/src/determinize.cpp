#include "tsyn/determinize.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <unordered_map>

#include "tsyn/errors.hpp"

namespace tsyn {

void ParityAutomaton::validate() const {
    if (delta.size() != states.size() * alphabet.size())
        throw DomainError("parity transition map is not total");
    for (StateId s : delta)
        if (s < 0 || s >= state_count()) throw DomainError("parity transition out of range");
    if (priority.size() != states.size()) throw DomainError("missing priorities");
}

bool accepts_lasso(const ParityAutomaton& p, const LassoWord& u) {
    if (u.loop.empty()) throw DomainError("lasso loop must be nonempty");
    auto sym = [&](const std::string& s) {
        auto it = std::find(p.alphabet.begin(), p.alphabet.end(), s);
        if (it == p.alphabet.end()) throw DomainError("lasso symbol outside alphabet: " + s);
        return static_cast<SymbolId>(it - p.alphabet.begin());
    };
    StateId cur = p.initial;
    for (const auto& s : u.stem) cur = p.next(cur, sym(s));

    std::vector<SymbolId> loop;
    for (const auto& s : u.loop) loop.push_back(sym(s));

    // iterate loops until the entry state repeats
    std::vector<int> seen(static_cast<std::size_t>(p.state_count()), -1);
    std::vector<StateId> entries;
    while (seen[static_cast<std::size_t>(cur)] == -1) {
        seen[static_cast<std::size_t>(cur)] = static_cast<int>(entries.size());
        entries.push_back(cur);
        for (SymbolId a : loop) cur = p.next(cur, a);
    }
    // cycle: from entries[seen[cur]] back to cur; min priority over the cycle
    int min_pri = INT_MAX;
    StateId s = entries[static_cast<std::size_t>(seen[static_cast<std::size_t>(cur)])];
    StateId walker = s;
    do {
        for (SymbolId a : loop) {
            walker = p.next(walker, a);
            min_pri = std::min(min_pri, p.priority[static_cast<std::size_t>(walker)]);
        }
    } while (walker != s);
    return min_pri % 2 == 0;
}

ParityAutomaton complement_parity(const ParityAutomaton& p) {
    ParityAutomaton out = p;
    for (int& pr : out.priority) pr += 1;
    return out;
}

namespace {

using Bits = std::vector<std::uint64_t>;

Bits bits_make(int n) { return Bits(static_cast<std::size_t>((n + 63) / 64), 0); }
void bits_set(Bits& b, int i) { b[static_cast<std::size_t>(i / 64)] |= std::uint64_t{1} << (i % 64); }
bool bits_get(const Bits& b, int i) {
    return (b[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1;
}
bool bits_empty(const Bits& b) {
    for (auto w : b)
        if (w) return false;
    return true;
}
void bits_and_not(Bits& b, const Bits& o) {
    for (std::size_t i = 0; i < b.size(); ++i) b[i] &= ~o[i];
}
void bits_or(Bits& b, const Bits& o) {
    for (std::size_t i = 0; i < b.size(); ++i) b[i] |= o[i];
}
Bits bits_and(const Bits& a, const Bits& b) {
    Bits r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] &= b[i];
    return r;
}

struct TreeNode {
    int name;  // compact rank, stable order
    Bits label;
    std::vector<int> children;  // oldest first
};

struct Tree {
    std::vector<TreeNode> nodes;  // index 0 is the root when nonempty
    bool empty() const { return nodes.empty(); }

    std::vector<int> encode() const {
        std::vector<int> out;
        out.push_back(static_cast<int>(nodes.size()));
        for (const auto& n : nodes) {
            out.push_back(n.name);
            for (auto w : n.label) {
                out.push_back(static_cast<int>(w & 0xffffffffu));
                out.push_back(static_cast<int>(w >> 32));
            }
            out.push_back(static_cast<int>(n.children.size()));
            for (int c : n.children) out.push_back(c);
        }
        return out;
    }
};

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = v.size();
        for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x + 7);
        return h;
    }
};

struct StepResult {
    Tree tree;
    int priority;
};

class Safra {
  public:
    Safra(const UntimedAutomaton& nba) : nba_(nba), n_(nba.state_count()) {
        fin_ = bits_make(n_);
        for (StateId s = 0; s < n_; ++s)
            if (nba.is_final(s)) bits_set(fin_, s);
        // successor bitsets per (state, symbol)
        succ_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(nba.symbol_count()),
                     bits_make(n_));
        for (const auto& t : nba.transitions)
            bits_set(succ_[static_cast<std::size_t>(t.from) *
                               static_cast<std::size_t>(nba.symbol_count()) +
                           static_cast<std::size_t>(*t.label)],
                     t.to);
        default_priority_ = 2 * std::max(1, n_) + 1;
    }

    int default_priority() const { return default_priority_; }

    Tree initial_tree() const {
        Tree t;
        Bits init = bits_make(n_);
        for (StateId s : nba_.initial) bits_set(init, s);
        if (bits_empty(init)) return t;
        t.nodes.push_back({0, init, {}});
        return t;
    }

    StepResult step(const Tree& t, SymbolId a) const {
        if (t.empty()) return {Tree{}, default_priority_};

        // working copy with bookkeeping
        struct W {
            int name;      // start-of-step name, or -1 for sprouted nodes
            Bits label;
            std::vector<int> children;
            bool alive = true;
            bool green = false;
        };
        std::vector<W> w;
        w.reserve(t.nodes.size() * 2);
        for (const auto& n : t.nodes) w.push_back({n.name, n.label, n.children, true, false});

        // sprout: youngest child carrying the final part of the label
        std::size_t old_count = w.size();
        for (std::size_t v = 0; v < old_count; ++v) {
            Bits f = bits_and(w[v].label, fin_);
            if (bits_empty(f)) continue;
            w.push_back({-1, f, {}, true, false});
            w[v].children.push_back(static_cast<int>(w.size() - 1));
        }

        // powerset
        for (auto& node : w) {
            Bits nl = bits_make(n_);
            for (int s = 0; s < n_; ++s)
                if (bits_get(node.label, s))
                    bits_or(nl, succ_[static_cast<std::size_t>(s) *
                                          static_cast<std::size_t>(nba_.symbol_count()) +
                                      static_cast<std::size_t>(a)]);
            node.label = std::move(nl);
        }

        // horizontal merge: older siblings keep shared states
        {
            std::vector<int> order;  // DFS from root
            std::vector<int> stack{0};
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                order.push_back(v);
                for (auto it = w[static_cast<std::size_t>(v)].children.rbegin();
                     it != w[static_cast<std::size_t>(v)].children.rend(); ++it)
                    stack.push_back(*it);
            }
            auto remove_from_subtree = [&](int root, const Bits& u) {
                std::vector<int> st{root};
                while (!st.empty()) {
                    int v = st.back();
                    st.pop_back();
                    bits_and_not(w[static_cast<std::size_t>(v)].label, u);
                    for (int c : w[static_cast<std::size_t>(v)].children) st.push_back(c);
                }
            };
            for (int v : order) {
                Bits u = bits_make(n_);
                for (int c : w[static_cast<std::size_t>(v)].children) {
                    remove_from_subtree(c, u);
                    bits_or(u, w[static_cast<std::size_t>(c)].label);
                }
            }
        }

        int e_min = INT_MAX;  // smallest deleted old name
        int f_min = INT_MAX;  // smallest green old name

        // remove empty nodes (whole subtrees are empty together)
        {
            std::vector<int> stack{0};
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                if (bits_empty(w[static_cast<std::size_t>(v)].label)) {
                    // drop subtree
                    std::vector<int> st{v};
                    while (!st.empty()) {
                        int x = st.back();
                        st.pop_back();
                        if (!w[static_cast<std::size_t>(x)].alive) continue;
                        w[static_cast<std::size_t>(x)].alive = false;
                        if (w[static_cast<std::size_t>(x)].name >= 0)
                            e_min = std::min(e_min, w[static_cast<std::size_t>(x)].name);
                        for (int c : w[static_cast<std::size_t>(x)].children) st.push_back(c);
                    }
                } else {
                    for (int c : w[static_cast<std::size_t>(v)].children) stack.push_back(c);
                }
            }
            if (!w[0].alive) {
                // root died: everything is gone
                return {Tree{}, std::min(e_min == INT_MAX ? default_priority_ : 2 * e_min + 1,
                                         default_priority_)};
            }
            for (auto& node : w) {
                std::vector<int> kept;
                for (int c : node.children)
                    if (w[static_cast<std::size_t>(c)].alive) kept.push_back(c);
                node.children = std::move(kept);
            }
        }

        // vertical merge: children covering the parent turn it green
        {
            std::vector<int> stack{0};
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                if (!w[static_cast<std::size_t>(v)].alive) continue;
                if (!w[static_cast<std::size_t>(v)].children.empty()) {
                    Bits u = bits_make(n_);
                    for (int c : w[static_cast<std::size_t>(v)].children)
                        bits_or(u, w[static_cast<std::size_t>(c)].label);
                    if (u == w[static_cast<std::size_t>(v)].label) {
                        w[static_cast<std::size_t>(v)].green = true;
                        if (w[static_cast<std::size_t>(v)].name >= 0)
                            f_min = std::min(f_min, w[static_cast<std::size_t>(v)].name);
                        // descendants are removed; old ones count as deleted
                        std::vector<int> st = w[static_cast<std::size_t>(v)].children;
                        w[static_cast<std::size_t>(v)].children.clear();
                        while (!st.empty()) {
                            int x = st.back();
                            st.pop_back();
                            w[static_cast<std::size_t>(x)].alive = false;
                            if (w[static_cast<std::size_t>(x)].name >= 0)
                                e_min = std::min(e_min, w[static_cast<std::size_t>(x)].name);
                            for (int c : w[static_cast<std::size_t>(x)].children) st.push_back(c);
                        }
                        continue;  // nothing below to visit
                    }
                }
                for (int c : w[static_cast<std::size_t>(v)].children) stack.push_back(c);
            }
        }

        // compact: survivors ordered by old name, then sprouts in creation
        // order; rebuild indices in DFS order with the root at index 0
        std::vector<int> alive_idx;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i].alive) alive_idx.push_back(static_cast<int>(i));
        std::stable_sort(alive_idx.begin(), alive_idx.end(), [&](int x, int y) {
            int nx = w[static_cast<std::size_t>(x)].name, ny = w[static_cast<std::size_t>(y)].name;
            if (nx >= 0 && ny >= 0) return nx < ny;
            if (nx >= 0) return true;   // survivors before sprouts
            if (ny >= 0) return false;
            return x < y;  // sprouts by creation order
        });
        std::vector<int> new_name(w.size(), -1);
        for (std::size_t i = 0; i < alive_idx.size(); ++i)
            new_name[static_cast<std::size_t>(alive_idx[i])] = static_cast<int>(i);

        Tree out;
        std::vector<int> new_index(w.size(), -1);
        // DFS from root to lay out nodes
        std::vector<int> stack{0};
        std::vector<int> dfs;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            dfs.push_back(v);
            for (auto it = w[static_cast<std::size_t>(v)].children.rbegin();
                 it != w[static_cast<std::size_t>(v)].children.rend(); ++it)
                stack.push_back(*it);
        }
        for (int v : dfs) {
            new_index[static_cast<std::size_t>(v)] = static_cast<int>(out.nodes.size());
            out.nodes.push_back({new_name[static_cast<std::size_t>(v)],
                                 w[static_cast<std::size_t>(v)].label,
                                 {}});
        }
        for (int v : dfs) {
            auto& children = out.nodes[static_cast<std::size_t>(new_index[static_cast<std::size_t>(v)])].children;
            for (int c : w[static_cast<std::size_t>(v)].children)
                children.push_back(new_index[static_cast<std::size_t>(c)]);
        }

        int pri = default_priority_;
        if (e_min != INT_MAX) pri = std::min(pri, 2 * e_min + 1);
        if (f_min != INT_MAX) pri = std::min(pri, 2 * f_min + 2);
        return {std::move(out), pri};
    }

  private:
    const UntimedAutomaton& nba_;
    int n_;
    Bits fin_;
    std::vector<Bits> succ_;
    int default_priority_;
};

}  // namespace

ParityAutomaton determinize(const UntimedAutomaton& nba, std::size_t cap) {
    if (nba.has_epsilon()) throw PreconditionError("determinization expects epsilon-free input");
    if (nba.mode != AcceptanceMode::Buchi)
        throw PreconditionError("determinization expects Buchi acceptance");
    nba.validate();

    Safra safra(nba);
    ParityAutomaton out;
    out.alphabet = nba.alphabet;

    // DPA states are (tree, priority of the step that entered it)
    std::unordered_map<std::vector<int>, StateId, VecHash> index;
    std::vector<Tree> trees;
    std::deque<StateId> work;

    auto intern = [&](const Tree& t, int pri) -> StateId {
        std::vector<int> key = t.encode();
        key.push_back(pri);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (cap && trees.size() >= cap) throw ResourceError("determinize", cap);
        StateId id = static_cast<StateId>(trees.size());
        trees.push_back(t);
        out.states.push_back("t" + std::to_string(id));
        out.priority.push_back(pri);
        index.emplace(std::move(key), id);
        work.push_back(id);
        return id;
    };

    std::vector<std::vector<StateId>> rows;
    out.initial = intern(safra.initial_tree(), safra.default_priority());
    while (!work.empty()) {
        StateId s = work.front();
        work.pop_front();
        Tree t = trees[static_cast<std::size_t>(s)];
        std::vector<StateId> row(static_cast<std::size_t>(nba.symbol_count()));
        for (SymbolId a = 0; a < nba.symbol_count(); ++a) {
            auto res = safra.step(t, a);
            row[static_cast<std::size_t>(a)] = intern(res.tree, res.priority);
        }
        if (rows.size() <= static_cast<std::size_t>(s)) rows.resize(static_cast<std::size_t>(s) + 1);
        rows[static_cast<std::size_t>(s)] = std::move(row);
    }
    rows.resize(trees.size());
    out.delta.reserve(trees.size() * static_cast<std::size_t>(nba.symbol_count()));
    for (const auto& row : rows)
        for (StateId v : row) out.delta.push_back(v);
    out.validate();
    return out;
}

}  // namespace tsyn
