#include "ks/kssets.hpp"

#include "ks/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace ks {

namespace {

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(x, y, &out)) throw ParseError("coordinate overflow");
    return out;
}

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(x, y, &out)) throw ParseError("coordinate overflow");
    return out;
}

class SurdParser {
public:
    explicit SurdParser(std::string_view text) {
        for (char c : text) {
            if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
        }
    }

    RationalSurd parse() {
        if (s_.empty()) fail();
        RationalSurd out;
        bool first = true;
        while (pos_ < s_.size() || first) {
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
            } else if (!first) {
                fail();
            }
            first = false;
            add_term(out, sign);
        }
        return out;
    }

private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    [[noreturn]] void fail() const { throw ParseError("cannot parse coordinate '" + s_ + "'"); }

    std::int64_t integer() {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (pos_ == start) fail();
        std::int64_t v = 0;
        for (std::size_t i = start; i < pos_; ++i) v = checked_add(checked_mul(v, 10), s_[i] - '0');
        return v;
    }

    bool consume(std::string_view token) {
        if (s_.compare(pos_, token.size(), token) == 0) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    bool radical() { return consume("sqrt(2)") || consume("sqrt2") || consume("√2"); }

    static void accumulate(std::int64_t& num, std::int64_t& den, std::int64_t n, std::int64_t d) {
        num = checked_add(checked_mul(num, d), checked_mul(n, den));
        den = checked_mul(den, d);
        const std::int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    void add_term(RationalSurd& out, int sign) {
        std::int64_t num = 1;
        std::int64_t den = 1;
        bool has_coef = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            num = integer();
            has_coef = true;
            if (peek() == '/') {
                ++pos_;
                den = integer();
                if (den == 0) fail();
            }
        }
        if (has_coef && peek() == '*') ++pos_;
        bool surd = false;
        if (radical()) {
            surd = true;
            if (peek() == '/') {
                ++pos_;
                const std::int64_t d = integer();
                if (d == 0) fail();
                den = checked_mul(den, d);
            }
        } else if (!has_coef) {
            fail();
        }
        num *= sign;
        if (surd) accumulate(out.b_num, out.b_den, num, den);
        else accumulate(out.a_num, out.a_den, num, den);
    }

    std::string s_;
    std::size_t pos_ = 0;
};

} // namespace

double Surd::value() const { return static_cast<double>(a) + static_cast<double>(b) * std::sqrt(2.0); }

std::string Surd::to_string() const {
    if (b == 0) return std::to_string(a);
    std::string radical = (b == 1 ? "" : b == -1 ? "-" : std::to_string(b) + "*") + std::string("sqrt2");
    if (a == 0) return radical;
    return std::to_string(a) + (b > 0 ? "+" : "") + radical;
}

RationalSurd parse_surd(std::string_view text) { return SurdParser(text).parse(); }

std::vector<Surd> clear_denominators(const std::vector<RationalSurd>& row) {
    std::int64_t l = 1;
    for (const auto& c : row) {
        l = std::lcm(l, c.a_den);
        l = std::lcm(l, c.b_den);
    }
    std::vector<Surd> out;
    out.reserve(row.size());
    std::int64_t g = 0;
    for (const auto& c : row) {
        const Surd s{checked_mul(c.a_num, l / c.a_den), checked_mul(c.b_num, l / c.b_den)};
        g = std::gcd(g, std::gcd(s.a, s.b));
        out.push_back(s);
    }
    if (g > 1) {
        for (Surd& s : out) {
            s.a /= g;
            s.b /= g;
        }
    }
    return out;
}

void validate(const RaySet& rs) {
    if (rs.dimension < 2) throw DomainError("ray set dimension must be at least 2");
    if (rs.rays.empty()) throw DomainError("ray set is empty");
    for (std::size_t i = 0; i < rs.rays.size(); ++i) {
        const Ray& r = rs.rays[i];
        if (r.size() != rs.dimension) {
            throw DomainError("ray " + std::to_string(i) + " has " + std::to_string(r.size()) +
                              " coordinates, expected " + std::to_string(rs.dimension));
        }
        if (std::all_of(r.begin(), r.end(), [](Surd s) { return s.is_zero(); })) {
            throw DomainError("ray " + std::to_string(i) + " is the zero vector");
        }
    }
}

Surd dot(const Ray& u, const Ray& w) {
    Surd acc;
    for (std::size_t k = 0; k < u.size(); ++k) acc = acc + u[k] * w[k];
    return acc;
}

bool parallel(const Ray& u, const Ray& w) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = i + 1; j < u.size(); ++j) {
            if (!(u[i] * w[j] - u[j] * w[i]).is_zero()) return false;
        }
    }
    return true;
}

void OrthoGraph::add_edge(std::size_t i, std::size_t j) {
    if (i == j || adjacent(i, j)) return;
    adj_[i * n_ + j] = adj_[j * n_ + i] = 1;
    neighbors_[i].push_back(j);
    neighbors_[j].push_back(i);
    ++edges_;
}

OrthoGraph build_ortho_graph(const RaySet& rs) {
    validate(rs);
    const std::size_t n = rs.rays.size();
    OrthoGraph g(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (parallel(rs.rays[i], rs.rays[j])) {
                throw DuplicateRay("rays " + std::to_string(i) + " and " + std::to_string(j) + " are parallel");
            }
            if (dot(rs.rays[i], rs.rays[j]).is_zero()) g.add_edge(i, j);
        }
    }
    return g;
}

BasisList enumerate_bases(const OrthoGraph& g, std::size_t d) {
    BasisList out;
    if (d == 0) return out;
    Basis current;
    const auto extend = [&](auto&& self, std::size_t start) -> void {
        if (current.size() == d) {
            out.push_back(current);
            return;
        }
        for (std::size_t j = start; j < g.size(); ++j) {
            const bool fits = std::all_of(current.begin(), current.end(),
                                          [&](std::size_t i) { return g.adjacent(i, j); });
            if (!fits) continue;
            current.push_back(j);
            self(self, j + 1);
            current.pop_back();
        }
    };
    extend(extend, 0);
    return out;
}

BasisList resolve_bases(const RaySet& rs, const OrthoGraph& g) {
    if (!rs.bases) return enumerate_bases(g, rs.dimension);
    BasisList out;
    for (const Basis& b : *rs.bases) {
        if (b.size() != rs.dimension) throw NotABasis("supplied basis has the wrong size");
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (b[i] >= g.size()) throw NotABasis("supplied basis index out of range");
            for (std::size_t j = 0; j < i; ++j) {
                if (!g.adjacent(b[i], b[j])) {
                    throw NotABasis("supplied basis rays " + std::to_string(b[j]) + " and " +
                                    std::to_string(b[i]) + " are not orthogonal");
                }
            }
        }
        Basis sorted = b;
        std::sort(sorted.begin(), sorted.end());
        out.push_back(std::move(sorted));
    }
    return out;
}

std::vector<std::size_t> basis_multiplicity(const BasisList& bases, std::size_t n) {
    std::vector<std::size_t> count(n, 0);
    for (const Basis& b : bases) {
        for (std::size_t i : b) ++count.at(i);
    }
    return count;
}

bool parity_obstruction(const BasisList& bases, std::size_t n) {
    if (bases.size() % 2 == 0) return false;
    const auto count = basis_multiplicity(bases, n);
    return std::all_of(count.begin(), count.end(), [](std::size_t c) { return c % 2 == 0; });
}

bool verify_assignment(const OrthoGraph& g, const BasisList& bases, const std::vector<int>& assignment) {
    if (assignment.size() != g.size()) return false;
    for (int a : assignment) {
        if (a != 0 && a != 1) return false;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (assignment[i] != 1) continue;
        for (std::size_t j : g.neighbors(i)) {
            if (assignment[j] == 1) return false;
        }
    }
    for (const Basis& b : bases) {
        int sum = 0;
        for (std::size_t i : b) sum += assignment[i];
        if (sum != 1) return false;
    }
    return true;
}

namespace {

class Search {
public:
    Search(const OrthoGraph& g, const BasisList& bases) : g_(g), bases_(bases), of_(g.size()), value_(g.size(), -1) {
        for (std::size_t b = 0; b < bases.size(); ++b) {
            for (std::size_t i : bases[b]) of_.at(i).push_back(b);
        }
    }

    /// Visits every solution; the visitor returns false to stop.
    template <typename Visit>
    bool run(Visit&& visit) {
        for (std::size_t b = 0; b < bases_.size(); ++b) {
            if (bases_[b].empty()) return false;
        }
        return descend(visit);
    }

    std::vector<int> assignment() const {
        std::vector<int> out(value_.size());
        for (std::size_t i = 0; i < value_.size(); ++i) out[i] = value_[i] == 1 ? 1 : 0;
        return out;
    }

    const SolverStats& stats() const { return stats_; }

private:
    bool set(std::size_t i, int v) {
        if (value_[i] == v) return true;
        if (value_[i] != -1) return false;
        value_[i] = static_cast<std::int8_t>(v);
        trail_.push_back(i);
        queue_.push_back(i);
        return true;
    }

    bool propagate() {
        while (!queue_.empty()) {
            const std::size_t i = queue_.back();
            queue_.pop_back();
            ++stats_.propagations;
            if (value_[i] == 1) {
                for (std::size_t j : g_.neighbors(i)) {
                    if (!set(j, 0)) return false;
                }
                continue;
            }
            for (std::size_t b : of_[i]) {
                std::size_t open = 0;
                std::size_t last_open = 0;
                bool has_one = false;
                for (std::size_t k : bases_[b]) {
                    if (value_[k] == 1) has_one = true;
                    else if (value_[k] == -1) {
                        ++open;
                        last_open = k;
                    }
                }
                if (has_one) continue;
                if (open == 0) return false;
                if (open == 1 && !set(last_open, 1)) return false;
            }
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            value_[trail_.back()] = -1;
            trail_.pop_back();
        }
        queue_.clear();
    }

    template <typename Visit>
    bool descend(Visit& visit) {
        ++stats_.nodes;
        std::size_t best = bases_.size();
        std::size_t best_open = static_cast<std::size_t>(-1);
        for (std::size_t b = 0; b < bases_.size(); ++b) {
            std::size_t open = 0;
            bool has_one = false;
            for (std::size_t k : bases_[b]) {
                if (value_[k] == 1) has_one = true;
                else if (value_[k] == -1) ++open;
            }
            if (has_one) continue;
            if (open < best_open) {
                best_open = open;
                best = b;
            }
        }
        if (best == bases_.size()) return visit(*this);
        if (best_open == 0) return true;

        std::size_t ray = 0;
        for (std::size_t k : bases_[best]) {
            if (value_[k] == -1) {
                ray = k;
                break;
            }
        }
        for (int choice : {1, 0}) {
            const std::size_t mark = trail_.size();
            if (set(ray, choice) && propagate()) {
                if (!descend(visit)) return false;
            } else {
                ++stats_.backtracks;
            }
            undo(mark);
        }
        return true;
    }

    const OrthoGraph& g_;
    const BasisList& bases_;
    std::vector<std::vector<std::size_t>> of_;
    std::vector<std::int8_t> value_;
    std::vector<std::size_t> trail_;
    std::vector<std::size_t> queue_;
    SolverStats stats_;
};

} // namespace

ColoringResult find_valuation(const OrthoGraph& g, const BasisList& bases) {
    Search search(g, bases);
    ColoringResult result;
    search.run([&](const Search& s) {
        result.assignment = s.assignment();
        result.colorable = true;
        return false;
    });
    result.stats = search.stats();
    if (result.colorable && !verify_assignment(g, bases, result.assignment)) {
        throw Error("solver produced an assignment that fails verification");
    }
    if (!result.colorable) result.assignment.clear();
    return result;
}

std::size_t count_valuations(const OrthoGraph& g, const BasisList& bases, std::size_t limit) {
    Search search(g, bases);
    std::size_t count = 0;
    search.run([&](const Search&) {
        ++count;
        return count < limit;
    });
    return count;
}

} // namespace ks
