#include "gll/graph.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "gll/errors.hpp"
#include "gll/rng.hpp"

namespace gll {

namespace {

bool parse_int(const std::string& s, int64_t& out) {
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

// "x,y" -> pair
bool parse_pair(const std::string& s, int64_t& x, int64_t& y) {
    auto comma = s.find(',');
    if (comma == std::string::npos) return false;
    return parse_int(s.substr(0, comma), x) && parse_int(s.substr(comma + 1), y);
}

std::string pair_enc(int64_t x, int64_t y) {
    return std::to_string(x) + "," + std::to_string(y);
}

[[noreturn]] void bad_vertex(const std::string& family, const VertexId& v) {
    throw InvalidVertex("vertex '" + v.enc + "' is not in the universe of family '" +
                        family + "'");
}

class RayFamily final : public GraphFamily {
public:
    std::string name() const override { return "ray"; }
    VertexId origin() const override { return VertexId("0"); }
    std::optional<int> degree_bound() const override { return 2; }

    bool contains(const VertexId& v) const override {
        int64_t n;
        return parse_int(v.enc, n) && n >= 0 && v.enc == std::to_string(n);
    }

    std::vector<VertexId> neighbors(const VertexId& v) const override {
        int64_t n;
        if (!parse_int(v.enc, n) || n < 0) bad_vertex(name(), v);
        if (n == 0) return {VertexId("1")};
        return {VertexId(std::to_string(n - 1)), VertexId(std::to_string(n + 1))};
    }
};

// Homogeneous tree: every vertex has degree q. Encoding: "e" for the root,
// else dot-separated child labels; the root has q children (labels 0..q-1),
// every other vertex has q-1 children (labels 0..q-2).
class TreeFamily final : public GraphFamily {
public:
    explicit TreeFamily(int q) : q_(q) {}

    std::string name() const override { return "tree:" + std::to_string(q_); }
    VertexId origin() const override { return VertexId("e"); }
    std::optional<int> degree_bound() const override { return q_; }

    bool contains(const VertexId& v) const override {
        std::vector<int64_t> w;
        return parse_word(v.enc, w);
    }

    std::vector<VertexId> neighbors(const VertexId& v) const override {
        std::vector<int64_t> w;
        if (!parse_word(v.enc, w)) bad_vertex(name(), v);
        std::vector<VertexId> out;
        if (w.empty()) {
            for (int64_t j = 0; j < q_; ++j) out.emplace_back(std::to_string(j));
            return out;
        }
        // parent first (shorter word precedes in canonical order)
        std::vector<int64_t> p(w.begin(), w.end() - 1);
        out.emplace_back(print_word(p));
        for (int64_t j = 0; j + 1 < q_; ++j) {
            std::vector<int64_t> c = w;
            c.push_back(j);
            out.emplace_back(print_word(c));
        }
        return out;
    }

private:
    bool parse_word(const std::string& s, std::vector<int64_t>& out) const {
        out.clear();
        if (s == "e") return true;
        size_t pos = 0;
        while (pos <= s.size()) {
            size_t dot = s.find('.', pos);
            std::string tok = s.substr(pos, dot == std::string::npos ? std::string::npos
                                                                     : dot - pos);
            int64_t lab;
            if (!parse_int(tok, lab) || tok != std::to_string(lab)) return false;
            int64_t hi = out.empty() ? q_ : q_ - 1;
            if (lab < 0 || lab >= hi) return false;
            out.push_back(lab);
            if (dot == std::string::npos) return true;
            pos = dot + 1;
        }
        return false;
    }

    static std::string print_word(const std::vector<int64_t>& w) {
        if (w.empty()) return "e";
        std::string s;
        for (size_t i = 0; i < w.size(); ++i) {
            if (i) s += '.';
            s += std::to_string(w[i]);
        }
        return s;
    }

    int q_;
};

class LatticeFamily final : public GraphFamily {
public:
    explicit LatticeFamily(int d) : d_(d) {}

    std::string name() const override { return "lattice:" + std::to_string(d_); }
    VertexId origin() const override {
        return VertexId(d_ == 1 ? "0" : "0,0");
    }
    std::optional<int> degree_bound() const override { return 2 * d_; }

    bool contains(const VertexId& v) const override {
        int64_t x, y;
        if (d_ == 1) return parse_int(v.enc, x) && v.enc == std::to_string(x);
        return parse_pair(v.enc, x, y) && v.enc == pair_enc(x, y);
    }

    std::vector<VertexId> neighbors(const VertexId& v) const override {
        if (d_ == 1) {
            int64_t x;
            if (!parse_int(v.enc, x)) bad_vertex(name(), v);
            return {VertexId(std::to_string(x - 1)), VertexId(std::to_string(x + 1))};
        }
        int64_t x, y;
        if (!parse_pair(v.enc, x, y)) bad_vertex(name(), v);
        // ascending (x, y)
        return {VertexId(pair_enc(x - 1, y)), VertexId(pair_enc(x, y - 1)),
                VertexId(pair_enc(x, y + 1)), VertexId(pair_enc(x + 1, y))};
    }

    std::optional<std::pair<int64_t, int64_t>>
    coordinates(const VertexId& v) const override {
        int64_t x, y;
        if (d_ == 1) {
            if (!parse_int(v.enc, x)) return std::nullopt;
            return std::make_pair(x, int64_t{0});
        }
        if (!parse_pair(v.enc, x, y)) return std::nullopt;
        return std::make_pair(x, y);
    }

private:
    int d_;
};

// N x {0,1}: rails (n,s)~(n+1,s) and rungs (n,0)~(n,1).
class LadderFamily final : public GraphFamily {
public:
    std::string name() const override { return "ladder"; }
    VertexId origin() const override { return VertexId("0,0"); }
    std::optional<int> degree_bound() const override { return 3; }

    bool contains(const VertexId& v) const override {
        int64_t n, s;
        return parse_pair(v.enc, n, s) && n >= 0 && (s == 0 || s == 1) &&
               v.enc == pair_enc(n, s);
    }

    std::vector<VertexId> neighbors(const VertexId& v) const override {
        int64_t n, s;
        if (!parse_pair(v.enc, n, s) || n < 0 || (s != 0 && s != 1))
            bad_vertex(name(), v);
        std::vector<VertexId> out;
        if (n > 0) out.emplace_back(pair_enc(n - 1, s));
        out.emplace_back(pair_enc(n, 1 - s));
        out.emplace_back(pair_enc(n + 1, s));
        return out;
    }
};

// Seeded random graph of bounded degree. Vertex w >= 1 attaches to one (and
// with probability 1/2 two) vertices in the window [floor(w/2), w) that still
// have room; the window keeps neighbor enumeration finite (children of v can
// only be in (v, 2v+1]) and a counting argument guarantees a non-full
// candidate whenever maxdeg >= 4. Construction is sequential in the vertex
// id, so the adjacency is independent of query order; the memo table is
// mutex-guarded for concurrent readers.
class RandomFamily final : public GraphFamily {
public:
    RandomFamily(uint64_t seed, int maxdeg) : seed_(seed), maxdeg_(maxdeg) {
        if (maxdeg < 4)
            throw InvalidFamily("random family requires maxdeg >= 4");
        adj_.emplace_back(); // vertex 0
    }

    std::string name() const override {
        return "random:" + std::to_string(seed_) + ":" + std::to_string(maxdeg_);
    }
    VertexId origin() const override { return VertexId("0"); }
    std::optional<int> degree_bound() const override { return maxdeg_; }

    bool contains(const VertexId& v) const override {
        int64_t n;
        return parse_int(v.enc, n) && n >= 0 && v.enc == std::to_string(n);
    }

    std::vector<VertexId> neighbors(const VertexId& v) const override {
        int64_t n;
        if (!parse_int(v.enc, n) || n < 0) bad_vertex(name(), v);
        std::vector<uint64_t> ids;
        {
            std::lock_guard<std::mutex> lock(mu_);
            ensure(uint64_t(2 * n + 1));
            ids = adj_[size_t(n)];
        }
        std::sort(ids.begin(), ids.end());
        std::vector<VertexId> out;
        out.reserve(ids.size());
        for (uint64_t u : ids) out.emplace_back(std::to_string(u));
        return out;
    }

private:
    void ensure(uint64_t up_to) const {
        while (adj_.size() <= up_to) {
            uint64_t w = adj_.size();
            adj_.emplace_back();
            SplitMix64 rng(mix_seed(seed_, w));
            uint64_t lo = w / 2;
            auto pick = [&](uint64_t exclude) -> int64_t {
                std::vector<uint64_t> cand;
                for (uint64_t u = lo; u < w; ++u)
                    if (u != exclude && adj_[u].size() < size_t(maxdeg_))
                        cand.push_back(u);
                if (cand.empty()) return -1;
                return int64_t(cand[rng.next_below(cand.size())]);
            };
            int64_t first = pick(w);
            // Non-full candidate always exists for maxdeg >= 4: the window
            // holds s = ceil(w/2) vertices with at most 4s - 2 endpoints.
            if (first >= 0) {
                adj_[w].push_back(uint64_t(first));
                adj_[size_t(first)].push_back(w);
            }
            if (rng.next_u64() & 1) {
                int64_t second = pick(uint64_t(first));
                if (second >= 0) {
                    adj_[w].push_back(uint64_t(second));
                    adj_[size_t(second)].push_back(w);
                }
            }
        }
    }

    uint64_t seed_;
    int maxdeg_;
    mutable std::mutex mu_;
    mutable std::vector<std::vector<uint64_t>> adj_;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t c = s.find(sep, pos);
        out.push_back(s.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    return out;
}

} // namespace

Graph make_graph(const std::string& descriptor,
                 const std::optional<std::string>& root_override) {
    auto parts = split(descriptor, ':');
    std::shared_ptr<const GraphFamily> fam;
    if (parts[0] == "ray" && parts.size() == 1) {
        fam = std::make_shared<RayFamily>();
    } else if (parts[0] == "tree" && parts.size() == 2) {
        int64_t q;
        if (!parse_int(parts[1], q) || q < 2)
            throw InvalidFamily("tree:<q> requires q >= 2");
        fam = std::make_shared<TreeFamily>(int(q));
    } else if (parts[0] == "lattice" && parts.size() == 2) {
        int64_t d;
        if (!parse_int(parts[1], d) || (d != 1 && d != 2))
            throw InvalidFamily("lattice:<d> requires d in {1,2}");
        fam = std::make_shared<LatticeFamily>(int(d));
    } else if (parts[0] == "ladder" && parts.size() == 1) {
        fam = std::make_shared<LadderFamily>();
    } else if (parts[0] == "random" && parts.size() == 3) {
        int64_t seed, maxdeg;
        if (!parse_int(parts[1], seed) || !parse_int(parts[2], maxdeg) || seed < 0)
            throw InvalidFamily("random:<seed>:<maxdeg> with nonnegative seed");
        fam = std::make_shared<RandomFamily>(uint64_t(seed), int(maxdeg));
    } else {
        throw InvalidFamily("unknown graph family descriptor '" + descriptor + "'");
    }

    VertexId root = fam->origin();
    if (root_override) {
        VertexId r(*root_override);
        if (!fam->contains(r))
            throw InvalidVertex("root override '" + *root_override +
                                "' is not a vertex of '" + descriptor + "'");
        root = r;
    }
    return Graph{std::move(fam), std::move(root), descriptor};
}

std::vector<VertexId> neighbors(const Graph& g, const VertexId& v) {
    if (!g.family->contains(v)) bad_vertex(g.family->name(), v);
    return g.family->neighbors(v);
}

std::vector<int64_t> distances_of(const Graph& g, const std::vector<VertexId>& targets) {
    std::vector<int64_t> out(targets.size(), -1);
    std::unordered_map<std::string, std::vector<size_t>> want;
    for (size_t i = 0; i < targets.size(); ++i) {
        if (!g.family->contains(targets[i]))
            throw InvalidVertex("vertex '" + targets[i].enc + "' is not in the universe");
        want[targets[i].enc].push_back(i);
    }
    size_t remaining = targets.size();
    std::unordered_set<std::string> seen{g.root.enc};
    std::vector<VertexId> frontier{g.root};
    int64_t depth = 0;
    auto settle = [&](const VertexId& u) {
        auto it = want.find(u.enc);
        if (it == want.end()) return;
        for (size_t idx : it->second)
            if (out[idx] < 0) {
                out[idx] = depth;
                --remaining;
            }
        want.erase(it);
    };
    settle(g.root);
    while (remaining > 0 && !frontier.empty()) {
        ++depth;
        std::vector<VertexId> next;
        for (const auto& u : frontier) {
            for (auto& w : g.family->neighbors(u)) {
                if (seen.insert(w.enc).second) {
                    settle(w);
                    next.push_back(std::move(w));
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

int64_t distance(const Graph& g, const VertexId& v) {
    if (!g.family->contains(v))
        throw InvalidVertex("vertex '" + v.enc + "' is not in the universe of family '" +
                            g.family->name() + "'");
    if (v == g.root) return 0;
    // layered BFS from the root, stopping at v's layer
    std::unordered_set<std::string> seen{g.root.enc};
    std::vector<VertexId> frontier{g.root};
    int64_t depth = 0;
    while (!frontier.empty()) {
        ++depth;
        std::vector<VertexId> next;
        for (const auto& u : frontier) {
            for (auto& w : g.family->neighbors(u)) {
                if (w == v) return depth;
                if (seen.insert(w.enc).second) next.push_back(std::move(w));
            }
        }
        frontier = std::move(next);
    }
    throw InvalidVertex("vertex '" + v.enc + "' unreachable from root");
}

} // namespace gll
