#include "zerosum/sequence.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace zerosum {

Sequence::Sequence(std::span<const Elem> elems) {
    std::vector<Elem> sorted(elems.begin(), elems.end());
    std::sort(sorted.begin(), sorted.end());
    for (Elem g : sorted) {
        if (!counts_.empty() && counts_.back().first == g)
            ++counts_.back().second;
        else
            counts_.emplace_back(g, 1);
    }
    length_ = static_cast<int>(sorted.size());
}

Sequence Sequence::repeated(Elem g, int k) {
    Sequence s;
    if (k > 0) {
        s.counts_.emplace_back(g, k);
        s.length_ = k;
    }
    return s;
}

int Sequence::multiplicity(Elem g) const {
    auto it = std::lower_bound(counts_.begin(), counts_.end(), g,
                               [](const auto& p, Elem e) { return p.first < e; });
    return (it != counts_.end() && it->first == g) ? it->second : 0;
}

int Sequence::max_multiplicity() const {
    int h = 0;
    for (const auto& [g, k] : counts_) h = std::max(h, k);
    return h;
}

ElemMask Sequence::support_mask() const {
    ElemMask m = 0;
    for (const auto& [g, k] : counts_) m = mask_with(m, g);
    return m;
}

std::vector<Elem> Sequence::expanded() const {
    std::vector<Elem> out;
    out.reserve(static_cast<size_t>(length_));
    for (const auto& [g, k] : counts_)
        for (int i = 0; i < k; ++i) out.push_back(g);
    return out;
}

Sequence& Sequence::append(Elem g, int k) {
    if (k <= 0) return *this;
    auto it = std::lower_bound(counts_.begin(), counts_.end(), g,
                               [](const auto& p, Elem e) { return p.first < e; });
    if (it != counts_.end() && it->first == g)
        it->second += k;
    else
        counts_.insert(it, {g, k});
    length_ += k;
    return *this;
}

Sequence concat(const Sequence& s, const Sequence& t) {
    Sequence out = s;
    for (const auto& [g, k] : t.counts()) out.append(g, k);
    return out;
}

bool divides(const Sequence& part, const Sequence& whole) {
    for (const auto& [g, k] : part.counts())
        if (whole.multiplicity(g) < k) return false;
    return true;
}

Sequence remove_subsequence(const Sequence& s, const Sequence& t) {
    if (!divides(t, s)) throw NotASubsequence("removal argument is not a subsequence");
    Sequence out;
    for (const auto& [g, k] : s.counts()) {
        int left = k - t.multiplicity(g);
        if (left > 0) out.append(g, left);
    }
    return out;
}

Sequence restrict_to(const Sequence& s, ElemMask A) {
    Sequence out;
    for (const auto& [g, k] : s.counts())
        if (mask_contains(A, g)) out.append(g, k);
    return out;
}

namespace {

std::string element_term(const Group& g, Elem e) {
    if (e == g.identity()) return "1";
    if (!g.is_metacyclic()) return "g" + std::to_string(e);
    int a = g.x_exponent(e), b = g.y_exponent(e);
    std::string out;
    if (a > 0) {
        out += "x";
        if (a > 1) out += "^" + std::to_string(a);
        if (b > 0) out += "*";
    }
    if (b > 0) {
        out += "y";
        if (b > 1) out += "^" + std::to_string(b);
    }
    return out;
}

struct TermParser {
    const Group& g;
    std::string_view text;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw TextParseError("bad sequence term '" + std::string(text) + "': " + why);
    }
    bool eat(char c) {
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    long parse_int() {
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected an integer");
        long v = 0;
        for (size_t i = start; i < pos; ++i) {
            v = v * 10 + (text[i] - '0');
            if (v > std::numeric_limits<int>::max()) fail("integer too large");
        }
        return v;
    }

    // Returns (element, multiplicity).
    std::pair<Elem, int> parse() {
        Elem e;
        int mult = 1;
        if (eat('(')) {
            size_t close = text.find(')', pos);
            if (close == std::string_view::npos) fail("missing ')'");
            TermParser inner{g, text.substr(pos, close - pos)};
            auto [ie, im] = inner.parse();
            if (im != 1) fail("nested multiplicity");
            pos = close + 1;
            if (!eat('^')) fail("expected ^k after (term)");
            mult = static_cast<int>(parse_int());
            e = ie;
        } else if (eat('1')) {
            e = g.identity();
            if (eat('^')) mult = static_cast<int>(parse_int());
        } else if (eat('g')) {
            long idx = parse_int();
            if (idx >= g.order()) fail("element index out of range");
            e = static_cast<Elem>(idx);
        } else if (eat('x')) {
            long a = 1, b = 0;
            if (eat('^')) a = parse_int();
            if (eat('*')) {
                if (!eat('y')) fail("expected y after *");
                b = 1;
                if (eat('^')) b = parse_int();
            }
            e = g.pair_element(static_cast<int>(a % 1000000), static_cast<int>(b % 1000000));
        } else if (eat('y')) {
            long b = 1;
            if (eat('^')) b = parse_int();
            e = g.pair_element(0, static_cast<int>(b % 1000000));
        } else {
            fail("unrecognized term");
        }
        if (pos != text.size()) fail("trailing characters");
        if (mult < 1) fail("multiplicity must be >= 1");
        return {e, mult};
    }
};

}  // namespace

std::string format_element(const Group& g, Elem e) { return element_term(g, e); }

std::string format_sequence(const Group& g, const Sequence& s) {
    std::string out;
    for (const auto& [e, k] : s.counts()) {
        if (!out.empty()) out += ".";
        std::string term = element_term(g, e);
        if (k == 1)
            out += term;
        else if (e == g.identity())
            out += term + "^" + std::to_string(k);
        else
            out += "(" + term + ")^" + std::to_string(k);
    }
    return out;
}

Sequence parse_sequence(const Group& g, std::string_view text) {
    Sequence out;
    if (text.empty()) return out;
    size_t start = 0;
    while (start <= text.size()) {
        size_t dot = text.find('.', start);
        if (dot == std::string_view::npos) dot = text.size();
        std::string_view term = text.substr(start, dot - start);
        if (term.empty()) throw TextParseError("empty term in sequence text");
        TermParser p{g, term};
        auto [e, k] = p.parse();
        out.append(e, k);
        if (dot == text.size()) break;
        start = dot + 1;
    }
    return out;
}

namespace {

void enumerate_rec(const Group& g, int depth, int n, Elem min_elem, std::vector<Elem>& prefix,
                   MultisetVisitor& v) {
    if (depth == n) {
        v.on_leaf(prefix);
        return;
    }
    for (Elem e = min_elem; e < g.order(); ++e) {
        Visit action = v.on_push(e);
        if (action == Visit::Continue) {
            prefix.push_back(e);
            enumerate_rec(g, depth + 1, n, e, prefix, v);
            prefix.pop_back();
        }
        v.on_pop(e);
    }
}

}  // namespace

void enumerate_multisets(const Group& g, int n, MultisetVisitor& visitor) {
    if (n < 0) throw std::invalid_argument("multiset length must be >= 0");
    std::vector<Elem> prefix;
    prefix.reserve(static_cast<size_t>(n));
    enumerate_rec(g, 0, n, 0, prefix, visitor);
}

unsigned long long multiset_count(int q, int n) {
    // C(q+n-1, n) with saturation at ULLONG_MAX.
    unsigned long long result = 1;
    for (int i = 1; i <= n; ++i) {
        unsigned long long num = static_cast<unsigned long long>(q - 1 + i);
        if (result > std::numeric_limits<unsigned long long>::max() / num) return std::numeric_limits<unsigned long long>::max();
        result = result * num / static_cast<unsigned long long>(i);
    }
    return result;
}

}  // namespace zerosum
