#include "zerosum/group.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace zerosum {

namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int smallest_prime_factor(int n) {
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return d;
    return n;
}

long long gcdll(long long a, long long b) { return std::gcd(a, b); }

int pow_mod(long long base, long long exp, long long mod) {
    if (mod == 1) return 0;
    long long acc = 1 % mod;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if (exp & 1) acc = acc * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return static_cast<int>(acc);
}

}  // namespace

std::vector<Elem> mask_elements(ElemMask m) {
    std::vector<Elem> out;
    out.reserve(static_cast<size_t>(mask_size(m)));
    mask_for_each(m, [&](Elem g) { out.push_back(g); });
    return out;
}

ElemMask mask_of(std::span<const Elem> elems) {
    ElemMask m = 0;
    for (Elem g : elems) m = mask_with(m, g);
    return m;
}

std::string MetacyclicSpec::to_string() const {
    std::ostringstream os;
    os << "metacyclic:" << p << "," << m << "," << r;
    return os.str();
}

Group Group::metacyclic(int p, int m, int r) {
    if (!is_prime(p)) throw InvalidSpec("p = " + std::to_string(p) + " is not prime");
    if (m < 1) throw InvalidSpec("m must be >= 1");
    if (static_cast<long long>(p) * m > kMaxGroupOrder)
        throw InvalidSpec("group order exceeds " + std::to_string(kMaxGroupOrder));
    if (m > 1 && smallest_prime_factor(m) <= p)
        throw InvalidSpec("m has a prime divisor <= p; p must be the smallest prime divisor of the order");
    if (m == 1) {
        if (r != 0) throw InvalidSpec("for m = 1 the only residue is r = 0");
    } else {
        if (r < 1 || r >= m) throw InvalidSpec("r must lie in [1, m-1]");
    }
    if (gcdll(static_cast<long long>(p) * (r - 1), m) != 1)
        throw InvalidSpec("gcd(p*(r-1), m) != 1");
    if (pow_mod(r, p, m) != 1 % m) throw InvalidSpec("r^p != 1 (mod m)");

    // Consequences of the accepted constraints; cheap consistency checks.
    if (m % p != 1 % p) throw InvalidSpec("internal: m != 1 (mod p)");
    for (int a = 1; a < p; ++a)
        if (gcdll(pow_mod(r, a, m) - 1 + m, m) != 1 && m > 1)
            throw InvalidSpec("internal: gcd(r^a - 1, m) != 1 for a = " + std::to_string(a));

    Group g;
    g.order_ = p * m;
    g.spec_ = MetacyclicSpec{p, m, r};
    g.origin_ = g.spec_->to_string();
    g.rpow_.resize(static_cast<size_t>(p));
    for (int s = 0; s < p; ++s) g.rpow_[static_cast<size_t>(s)] = pow_mod(r, s, m);

    g.table_.assign(static_cast<size_t>(g.order_) * g.order_, 0);
    for (int a1 = 0; a1 < p; ++a1)
        for (int b1 = 0; b1 < m; ++b1)
            for (int a2 = 0; a2 < p; ++a2)
                for (int b2 = 0; b2 < m; ++b2) {
                    int a = (a1 + a2) % p;
                    int b = static_cast<int>((static_cast<long long>(b1) * g.rpow_[static_cast<size_t>(a2)] + b2) % m);
                    g.table_[static_cast<size_t>(a1 * m + b1) * g.order_ + (a2 * m + b2)] = a * m + b;
                }
    g.finish(/*validate_table=*/false);
    return g;
}

Group Group::from_table(const std::vector<std::vector<int>>& table, std::string origin) {
    const int n = static_cast<int>(table.size());
    if (n < 1 || n > kMaxGroupOrder) throw InvalidSpec("table size must be in [1, 64]");
    Group g;
    g.order_ = n;
    g.origin_ = std::move(origin);
    g.table_.assign(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(table[static_cast<size_t>(i)].size()) != n)
            throw InvalidSpec("table is not square");
        for (int j = 0; j < n; ++j) {
            int v = table[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (v < 0 || v >= n) throw InvalidSpec("table entry out of range");
            g.table_[static_cast<size_t>(i) * n + j] = v;
        }
    }
    g.finish(/*validate_table=*/true);
    return g;
}

Group Group::cyclic(int n) {
    if (n < 1 || n > kMaxGroupOrder) throw InvalidSpec("cyclic order must be in [1, 64]");
    std::vector<std::vector<int>> t(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[static_cast<size_t>(i)][static_cast<size_t>(j)] = (i + j) % n;
    return from_table(t, "cyclic:" + std::to_string(n));
}

Group Group::from_cayley_json(const std::string& json_text, std::string origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(std::string("bad cayley JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("size") || !doc.contains("table"))
        throw InvalidSpec("cayley JSON must be an object with \"size\" and \"table\"");
    int n = doc["size"].get<int>();
    auto table = doc["table"].get<std::vector<std::vector<int>>>();
    if (static_cast<int>(table.size()) != n) throw InvalidSpec("cayley JSON: table size != size");
    return from_table(table, std::move(origin));
}

Group Group::from_spec_string(const std::string& spec) {
    if (spec.rfind("metacyclic:", 0) == 0) {
        std::string rest = spec.substr(11);
        std::replace(rest.begin(), rest.end(), ',', ' ');
        std::istringstream is(rest);
        int p, m, r;
        if (!(is >> p >> m >> r)) throw InvalidSpec("expected metacyclic:p,m,r");
        std::string trailing;
        if (is >> trailing) throw InvalidSpec("trailing characters in group spec");
        return metacyclic(p, m, r);
    }
    if (spec.rfind("cyclic:", 0) == 0) {
        std::istringstream is(spec.substr(7));
        int n;
        if (!(is >> n)) throw InvalidSpec("expected cyclic:n");
        return cyclic(n);
    }
    if (spec.rfind("cayley:", 0) == 0) {
        std::string path = spec.substr(7);
        std::ifstream in(path);
        if (!in) throw InvalidSpec("cannot open cayley table file: " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        return from_cayley_json(buf.str(), spec);
    }
    throw InvalidSpec("group spec must start with metacyclic:, cyclic:, or cayley:");
}

void Group::finish(bool validate_table) {
    const int n = order_;
    if (validate_table) {
        for (int j = 0; j < n; ++j)
            if (mul(0, j) != j || mul(j, 0) != j)
                throw InvalidSpec("index 0 is not the identity");
        // Latin square: each row and column is a permutation.
        for (int i = 0; i < n; ++i) {
            ElemMask row = 0, col = 0;
            for (int j = 0; j < n; ++j) {
                row = mask_with(row, mul(i, j));
                col = mask_with(col, mul(j, i));
            }
            if (row != all_mask() || col != all_mask())
                throw InvalidSpec("multiplication table is not a Latin square");
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                        throw InvalidSpec("multiplication table is not associative");
    }
    inv_.assign(static_cast<size_t>(n), 0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (mul(a, b) == 0) {
                inv_[static_cast<size_t>(a)] = b;
                break;
            }
    }
    abelian_ = true;
    for (int a = 0; a < n && abelian_; ++a)
        for (int b = a + 1; b < n; ++b)
            if (mul(a, b) != mul(b, a)) {
                abelian_ = false;
                break;
            }
}

Elem Group::power(Elem g, long long k) const {
    if (k < 0) return power(inv(g), -k);
    Elem acc = 0, base = g;
    while (k > 0) {
        if (k & 1) acc = mul(acc, base);
        base = mul(base, base);
        k >>= 1;
    }
    return acc;
}

int Group::element_order(Elem g) const {
    Elem acc = g;
    int k = 1;
    while (acc != 0) {
        acc = mul(acc, g);
        ++k;
    }
    return k;
}

Elem Group::pair_element(int a, int b) const {
    if (!spec_) throw UnsupportedQuery("pair view needs a metacyclic group");
    const auto& s = *spec_;
    a %= s.p;
    if (a < 0) a += s.p;
    b %= s.m;
    if (b < 0) b += s.m;
    return a * s.m + b;
}

int Group::x_exponent(Elem g) const {
    if (!spec_) throw UnsupportedQuery("pair view needs a metacyclic group");
    return g / spec_->m;
}

int Group::y_exponent(Elem g) const {
    if (!spec_) throw UnsupportedQuery("pair view needs a metacyclic group");
    return g % spec_->m;
}

int Group::quotient_class(Elem g) const {
    if (!spec_) throw UnsupportedQuery("quotient map needs a metacyclic group with designated normal part");
    return x_exponent(g);
}

int Group::conj_power(int s) const {
    if (!spec_) throw UnsupportedQuery("conjugation powers need a metacyclic group");
    return rpow_[static_cast<size_t>(s % spec_->p)];
}

ElemMask Group::orbit_mask(Elem u) const {
    if (!spec_) throw UnsupportedQuery("orbits need a metacyclic group");
    if (x_exponent(u) != 0) throw std::invalid_argument("orbit_mask: element lies outside the normal part");
    const auto& s = *spec_;
    ElemMask m = 0;
    int b = y_exponent(u);
    for (int k = 0; k < s.p; ++k)
        m = mask_with(m, static_cast<int>(static_cast<long long>(b) * rpow_[static_cast<size_t>(k)] % s.m));
    return m;
}

ElemMask Group::normal_subgroup_mask() const {
    if (!spec_) throw UnsupportedQuery("no designated normal part on a Cayley-table group");
    return spec_->m == 64 ? ~ElemMask{0} : (ElemMask{1} << spec_->m) - 1;
}

ElemMask Group::coset_mask(int i) const {
    if (!spec_) throw UnsupportedQuery("no designated normal part on a Cayley-table group");
    i %= spec_->p;
    if (i < 0) i += spec_->p;
    return normal_subgroup_mask() << (i * spec_->m);
}

std::vector<ElemMask> Group::subgroups_of_normal() const {
    if (!spec_) throw UnsupportedQuery("no designated normal part on a Cayley-table group");
    const int m = spec_->m;
    std::vector<ElemMask> out;
    for (int d = 1; d <= m; ++d) {
        if (m % d != 0) continue;
        ElemMask s = 0;
        for (int j = 0; j < d; ++j) s = mask_with(s, (m / d) * j);
        out.push_back(s);
    }
    return out;
}

ElemMask Group::mul_mask(ElemMask A, Elem g) const {
    ElemMask out = 0;
    mask_for_each(A, [&](Elem a) { out = mask_with(out, mul(a, g)); });
    return out;
}

ElemMask Group::mul_elem_mask(Elem g, ElemMask A) const {
    ElemMask out = 0;
    mask_for_each(A, [&](Elem a) { out = mask_with(out, mul(g, a)); });
    return out;
}

ElemMask Group::product_mask(ElemMask A, ElemMask B) const {
    ElemMask out = 0;
    mask_for_each(B, [&](Elem b) { out |= mul_mask(A, b); });
    return out;
}

ElemMask Group::inverse_mask(ElemMask A) const {
    ElemMask out = 0;
    mask_for_each(A, [&](Elem a) { out = mask_with(out, inv(a)); });
    return out;
}

ElemMask Group::subgroup_generated(ElemMask A) const {
    ElemMask closure = single_mask(0) | A;
    mask_for_each(A, [&](Elem a) { closure = mask_with(closure, inv(a)); });
    for (;;) {
        ElemMask next = closure;
        mask_for_each(closure, [&](Elem a) { next |= mul_mask(closure, a); });
        if (next == closure) return closure;
        closure = next;
    }
}

ElemMask Group::stabilizer(ElemMask A, ElemMask H) const {
    if (A == 0) throw EmptySetError("stabilizer of the empty set is undefined");
    ElemMask out = 0;
    mask_for_each(H, [&](Elem h) {
        if (mul_elem_mask(h, A) == A) out = mask_with(out, h);
    });
    return out;
}

ElemMask Group::centralizer(Elem h) const {
    ElemMask out = 0;
    for (Elem g = 0; g < order_; ++g)
        if (mul(g, h) == mul(h, g)) out = mask_with(out, g);
    return out;
}

Group Group::subgroup_as_group(ElemMask elems) const {
    if (!mask_contains(elems, 0)) throw std::invalid_argument("subgroup must contain the identity");
    std::vector<Elem> list = mask_elements(elems);
    std::vector<int> pos(static_cast<size_t>(order_), -1);
    for (size_t i = 0; i < list.size(); ++i) pos[static_cast<size_t>(list[i])] = static_cast<int>(i);
    const int k = static_cast<int>(list.size());
    std::vector<std::vector<int>> t(static_cast<size_t>(k), std::vector<int>(static_cast<size_t>(k)));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            Elem prod = mul(list[static_cast<size_t>(i)], list[static_cast<size_t>(j)]);
            if (!mask_contains(elems, prod)) throw std::invalid_argument("subset is not closed under products");
            t[static_cast<size_t>(i)][static_cast<size_t>(j)] = pos[static_cast<size_t>(prod)];
        }
    return from_table(t, "cayley:<subgroup of " + origin_ + ">");
}

}  // namespace zerosum
